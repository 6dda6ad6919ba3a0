#pragma once

#include <cmath>
#include <utility>

#include "s1map/errors.hpp"

namespace s1map::internal {

// Safeguarded Newton on a bracket [lo, hi] with f(lo) and f(hi) of opposite
// sign (or zero). Falls back to bisection whenever the Newton step leaves the
// bracket or fails to shrink it fast enough. df may return 0 to force
// bisection for that iterate.
template <class F, class DF>
double solve_bracketed(const F& f, const DF& df, double lo, double hi,
                       double xtol, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericError("solve_bracketed: endpoints do not bracket a root");
  }
  if (flo > 0.0) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  // Invariant: f(lo) < 0 < f(hi); lo/hi may be unordered as numbers.
  double x = 0.5 * (lo + hi);
  double dx_old = std::fabs(hi - lo);
  double dx = dx_old;
  double fx = f(x);
  double dfx = df(x);
  for (int i = 0; i < max_iter; ++i) {
    const bool newton_ok =
        dfx != 0.0 &&
        ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) < 0.0 &&
        std::fabs(2.0 * fx) <= std::fabs(dx_old * dfx);
    if (newton_ok) {
      dx_old = dx;
      dx = fx / dfx;
      x -= dx;
    } else {
      dx_old = dx;
      dx = 0.5 * (hi - lo);
      x = lo + dx;
    }
    if (std::fabs(dx) < xtol) return x;
    fx = f(x);
    dfx = df(x);
    if (fx < 0.0) {
      lo = x;
    } else if (fx > 0.0) {
      hi = x;
    } else {
      return x;
    }
  }
  return x;
}

// Plain bisection for a monotone increasing function g with g(lo) <= target
// <= g(hi). Stops on |g - target| <= ftol or bracket collapse.
template <class G>
double bisect_increasing(const G& g, double lo, double hi, double target,
                         double ftol, int max_iter = 200) {
  double best = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    best = 0.5 * (lo + hi);
    if (best == lo || best == hi) break;  // bracket collapsed to a ulp
    double v = g(best);
    if (std::fabs(v - target) <= ftol) return best;
    if (v < target) {
      lo = best;
    } else {
      hi = best;
    }
  }
  return best;
}

}  // namespace s1map::internal
