#include "s1map/config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "s1map/errors.hpp"

namespace s1map {

namespace {

// Sign of det(m) for a small dense matrix, by Gaussian elimination with
// partial pivoting.
int determinant_sign(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    }
    if (std::fabs(m[pivot][col]) < 1e-9) {
      throw NumericError("shift_jacobian_sign: degenerate finite differences");
    }
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      sign = -sign;
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      double factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
    if (m[col][col] < 0.0) sign = -sign;
  }
  return sign;
}

}  // namespace

SimplexPoint::SimplexPoint(std::vector<double> coords)
    : coords_(std::move(coords)) {
  double prev = 0.0;
  for (double t : coords_) {
    if (!(t > prev && t < 1.0)) {
      throw std::invalid_argument(
          "SimplexPoint: coordinates must satisfy 0 < t_1 < ... < t_{n-1} < 1");
    }
    prev = t;
  }
}

Configuration::Configuration(std::vector<Angle> points)
    : points_(std::move(points)) {
  if (points_.empty()) {
    throw std::invalid_argument("Configuration: at least one point required");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (points_[i] == points_[j]) {
        throw std::invalid_argument("Configuration: points must be distinct");
      }
    }
  }
}

bool in_base_component(const Configuration& c) {
  const std::size_t n = c.size();
  double prev = 0.0;
  for (std::size_t a = 1; a < n; ++a) {
    double u = normalize_turns(c[a].turns() - c[0].turns());
    if (u <= prev) return false;
    prev = u;
  }
  return true;
}

Chart chart_coordinates(const Configuration& c) {
  if (!in_base_component(c)) {
    throw std::invalid_argument(
        "chart_coordinates: configuration not in the base component");
  }
  std::vector<double> offsets;
  offsets.reserve(c.size() - 1);
  for (std::size_t a = 1; a < c.size(); ++a) {
    offsets.push_back(normalize_turns(c[a].turns() - c[0].turns()));
  }
  return Chart{c[0], SimplexPoint(std::move(offsets))};
}

Configuration from_chart(Angle base, const SimplexPoint& t) {
  std::vector<Angle> pts;
  pts.reserve(t.dimension() + 1);
  pts.push_back(base);
  for (double u : t.coords()) pts.push_back(Angle(base.turns() + u));
  return Configuration(std::move(pts));
}

Configuration from_chart(const Chart& chart) {
  return from_chart(chart.base, chart.simplex);
}

Configuration cyclic_shift(const Configuration& c, long power) {
  const long n = static_cast<long>(c.size());
  long shift = ((power % n) + n) % n;
  std::vector<Angle> pts;
  pts.reserve(c.size());
  for (long i = 0; i < n; ++i) pts.push_back(c[(i + shift) % n]);
  return Configuration(std::move(pts));
}

int shift_jacobian_sign(int n, int d) {
  if (n < 1 || d < 1 || d > n || n % d != 0) {
    throw std::invalid_argument("shift_jacobian_sign: d must divide n");
  }
  // Interior evaluation point: the uniform chart point nudged by 0.01 in
  // every simplex coordinate. The shift is smooth, so the sign is constant
  // and any interior point works.
  double base_phi = 0.125;
  std::vector<double> t0(n - 1);
  for (int a = 1; a < n; ++a) t0[a - 1] = static_cast<double>(a) / n + 0.01;

  const double step = 1e-5;
  // Map under study, in chart coordinates.
  auto image = [&](Angle phi, const std::vector<double>& t) {
    Configuration c = from_chart(phi, SimplexPoint(t));
    return chart_coordinates(cyclic_shift(c, d));
  };

  Chart center = image(Angle(base_phi), t0);
  std::vector<std::vector<double>> jac(n, std::vector<double>(n, 0.0));
  for (int col = 0; col < n; ++col) {
    double phi_p = base_phi, phi_m = base_phi;
    std::vector<double> tp = t0, tm = t0;
    if (col == 0) {
      phi_p += step;
      phi_m -= step;
    } else {
      tp[col - 1] += step;
      tm[col - 1] -= step;
    }
    Chart plus = image(Angle(phi_p), tp);
    Chart minus = image(Angle(phi_m), tm);
    // Circle coordinate through a local lift centered at the image point.
    jac[0][col] =
        (angle_sub(plus.base, center.base) - angle_sub(minus.base, center.base)) /
        (2.0 * step);
    for (int row = 1; row < n; ++row) {
      jac[row][col] = (plus.simplex.coords()[row - 1] -
                       minus.simplex.coords()[row - 1]) /
                      (2.0 * step);
    }
  }
  return determinant_sign(std::move(jac));
}

TwistType twist_type(int n, int k) {
  if (n < 1 || k < 1 || n % k != 0) {
    throw std::invalid_argument("twist_type: k must divide n");
  }
  int d = n / k;
  return (n % 2 == 0 && d % 2 == 1) ? TwistType::Twisted : TwistType::Trivial;
}

Configuration canonical_representative(const Configuration& c, int k) {
  const int n = static_cast<int>(c.size());
  if (k < 1 || n % k != 0) {
    throw std::invalid_argument("canonical_representative: k must divide n");
  }
  if (!in_base_component(c)) {
    throw std::invalid_argument(
        "canonical_representative: configuration not in the base component");
  }
  const int d = n / k;
  Configuration best = c;
  for (int j = 1; j < k; ++j) {
    Configuration cand = cyclic_shift(c, static_cast<long>(j) * d);
    if (std::lexicographical_compare(cand.points().begin(), cand.points().end(),
                                     best.points().begin(),
                                     best.points().end())) {
      best = cand;
    }
  }
  return best;
}

}  // namespace s1map
