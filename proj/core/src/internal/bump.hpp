#pragma once

#include <cmath>
#include <limits>

namespace s1map::internal {

// Bump profile on (0, 1): beta(u) = exp(4 - 1/(u(1-u))), normalized so the
// peak beta(1/2) = 1, flat to infinite order at both endpoints. The log form
// is the primary representation: for huge density exponents the product
// lambda * beta(u) must be assembled in log space to dodge under/overflow.
inline double log_bump(double u) {
  if (u <= 0.0 || u >= 1.0) return -std::numeric_limits<double>::infinity();
  return 4.0 - 1.0 / (u * (1.0 - u));
}

inline double bump(double u) {
  double lb = log_bump(u);
  return lb < -745.0 ? 0.0 : std::exp(lb);
}

// d(log beta)/du = (1 - 2u) / (u(1-u))^2.
inline double log_bump_d1(double u) {
  double w = u * (1.0 - u);
  return (1.0 - 2.0 * u) / (w * w);
}

// exp(lambda * beta(u)) evaluated through log space. sign_lambda and
// log_abs_lambda describe lambda (log_abs_lambda = -inf means lambda == 0).
inline double exp_lambda_bump(int sign_lambda, double log_abs_lambda,
                              double u) {
  if (sign_lambda == 0) return 1.0;
  double e = log_abs_lambda + log_bump(u);  // log |lambda * beta|
  if (e == -std::numeric_limits<double>::infinity()) return 1.0;
  double prod = e > 709.0 ? std::numeric_limits<double>::infinity()
                          : std::exp(e);
  if (sign_lambda < 0) {
    return prod > 745.0 ? 0.0 : std::exp(-prod);
  }
  return std::exp(prod);  // overflows to inf only for unsolvable targets
}

// lambda * beta(u) itself (the exponent), through log space.
inline double lambda_bump(int sign_lambda, double log_abs_lambda, double u) {
  if (sign_lambda == 0) return 0.0;
  double e = log_abs_lambda + log_bump(u);
  if (e == -std::numeric_limits<double>::infinity()) return 0.0;
  if (e > 709.0) {
    return sign_lambda * std::numeric_limits<double>::infinity();
  }
  return sign_lambda * std::exp(e);
}

// Smooth monotone step: 0 for u <= 0, 1 for u >= 1, flat to infinite order
// at both ends. Used for partition-of-unity blending.
inline double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double a = std::exp(-1.0 / u);
  double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

}  // namespace s1map::internal
