#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "s1map/errors.hpp"

namespace s1map::internal {

// 12-point Gauss-Legendre rule on [-1, 1]. Nodes and weights are computed
// once by Newton iteration on the Legendre polynomial, so no literal tables
// are needed and the rule is accurate to machine precision.
struct GaussRule {
  static constexpr int kOrder = 12;
  std::array<double, kOrder> node{};
  std::array<double, kOrder> weight{};

  GaussRule() {
    const int n = kOrder;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) break;
      }
      node[i] = -x;
      node[n - 1 - i] = x;
      weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
      weight[n - 1 - i] = weight[i];
    }
  }
};

inline const GaussRule& gauss_rule() {
  static const GaussRule rule;
  return rule;
}

template <class F>
double gauss_panel(const F& f, double a, double b) {
  const GaussRule& r = gauss_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < GaussRule::kOrder; ++i) {
    sum += r.weight[i] * f(mid + half * r.node[i]);
  }
  return sum * half;
}

struct Panel {
  double left;
  double right;
  double integral;  // over [left, right]
  double prefix;    // integral over [domain start, left]
};

// Adaptive bisection: a panel is accepted when splitting it changes the
// value by less than its share of the tolerance budget (halved per level,
// floored at the roundoff scale of the values involved so machine noise
// cannot force runaway refinement). Leaves are appended in order.
template <class F>
void refine_panel(const F& f, double a, double b, double whole, double tol,
                  int depth, std::vector<Panel>& out) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_panel(f, a, mid);
  const double right = gauss_panel(f, mid, b);
  const double err = std::fabs(left + right - whole);
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                       (std::fabs(left) + std::fabs(right) + std::fabs(whole));
  const double accept = std::max(tol, noise);
  if (err <= accept || depth >= 44) {
    if (depth >= 44 && err > 1e6 * accept) {
      throw NumericError("adaptive quadrature: refinement depth exhausted");
    }
    out.push_back(Panel{a, mid, left, 0.0});
    out.push_back(Panel{mid, b, right, 0.0});
    return;
  }
  refine_panel(f, a, mid, left, 0.5 * tol, depth + 1, out);
  refine_panel(f, mid, b, right, 0.5 * tol, depth + 1, out);
}

template <class F>
std::vector<Panel> integrate_panels(const F& f, double a, double b,
                                    double tol) {
  std::vector<Panel> leaves;
  refine_panel(f, a, b, gauss_panel(f, a, b), tol, 0, leaves);
  double acc = 0.0;
  for (Panel& p : leaves) {
    p.prefix = acc;
    acc += p.integral;
  }
  return leaves;
}

// Seeded variant: the subdivision starts from the given breakpoints so that
// features the caller knows about (boundary layers) cannot slip between the
// sample nodes of a wide panel.
template <class F>
std::vector<Panel> integrate_panels_seeded(const F& f,
                                           const std::vector<double>& seeds,
                                           double tol) {
  std::vector<Panel> leaves;
  double per = tol / static_cast<double>(seeds.size() - 1);
  for (std::size_t i = 0; i + 1 < seeds.size(); ++i) {
    refine_panel(f, seeds[i], seeds[i + 1],
                 gauss_panel(f, seeds[i], seeds[i + 1]), per, 0, leaves);
  }
  double acc = 0.0;
  for (Panel& p : leaves) {
    p.prefix = acc;
    acc += p.integral;
  }
  return leaves;
}

template <class F>
double integrate(const F& f, double a, double b, double tol) {
  std::vector<Panel> leaves = integrate_panels(f, a, b, tol);
  return leaves.empty() ? 0.0 : leaves.back().prefix + leaves.back().integral;
}

template <class F>
double integrate_seeded(const F& f, const std::vector<double>& seeds,
                        double tol) {
  std::vector<Panel> leaves = integrate_panels_seeded(f, seeds, tol);
  return leaves.empty() ? 0.0 : leaves.back().prefix + leaves.back().integral;
}

}  // namespace s1map::internal
