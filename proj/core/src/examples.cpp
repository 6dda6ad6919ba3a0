#include "s1map/examples.hpp"

#include <cmath>
#include <numbers>

namespace s1map::examples {

namespace {

constexpr double kPi = std::numbers::pi;

// Bisection for a strictly monotone scalar function.
template <class F>
double bisect(const F& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CircleMap two_wave() {
  return CircleMap::fourier(FourierData{1, 0.0, {0.0}, {0.3}});
}

CircleMap four_wave() {
  return CircleMap::fourier(FourierData{1, 0.0, {0.0, 0.0}, {0.0, 0.1}});
}

CircleMap two_wave_perturbed() {
  return CircleMap::fourier(FourierData{1, 0.0, {0.0, 0.05}, {0.3, 0.0}});
}

CircleMap degree_two_covering() {
  return CircleMap::fourier(FourierData{2, 0.0, {}, {}});
}

CircleMap three_value_wave() {
  // With L = t + b sin(6 pi t) the critical points in [0, 1/3) sit at
  // theta/(6 pi) and (2 pi - theta)/(6 pi), theta = arccos(-1/(6 pi b)),
  // and their values satisfy v1 + v2 = 1/3. Tuning v1(b) = 1/3 makes the
  // six critical values collapse onto {0, 1/3, 2/3}.
  static const double b = bisect(
      [](double bb) {
        double theta = std::acos(-1.0 / (6.0 * kPi * bb));
        double v1 = theta / (6.0 * kPi) + bb * std::sin(theta);
        return v1 - 1.0 / 3.0;
      },
      0.1, 0.3);
  return CircleMap::fourier(FourierData{1, 0.0, {0, 0, 0}, {0, 0, b}});
}

CircleMap twisted_pair_wave() {
  // With L = t + A sin(4 pi t) the two critical values in a half period
  // differ by 1/2 - psi/(2 pi) - 2 A sin(psi), psi = arccos(-1/(4 pi A)).
  // Forcing that difference to be a half turn needs psi - tan(psi) = 2 pi.
  static const double psi =
      bisect([](double p) { return p - std::tan(p) - 2.0 * kPi; }, 1.6, 3.0);
  static const double amp = -1.0 / (4.0 * kPi * std::cos(psi));
  return CircleMap::fourier(FourierData{1, 0.0, {0.0, 0.0}, {0.0, amp}});
}

CircleMap one_value_wave() {
  // With L = t + A sin(2 pi t) the lift gap between the maximum and the
  // minimum is (psi - tan(psi))/pi - 1, psi = arccos(-1/(2 pi A)). Forcing
  // the gap to be exactly one turn merges the two critical values.
  static const double psi =
      bisect([](double p) { return p - std::tan(p) - 2.0 * kPi; }, 1.6, 3.0);
  static const double amp = -1.0 / (2.0 * kPi * std::cos(psi));
  return CircleMap::fourier(FourierData{1, 0.0, {0.0}, {amp}});
}

}  // namespace s1map::examples
