#pragma once

#include <vector>

#include "s1map/angle.hpp"

namespace s1map {

/// A point of the open ordered simplex: 0 < t_1 < ... < t_{n-1} < 1.
/// Empty for n = 1 (the simplex is a single point).
class SimplexPoint {
 public:
  SimplexPoint() = default;
  explicit SimplexPoint(std::vector<double> coords);

  const std::vector<double>& coords() const { return coords_; }
  std::size_t dimension() const { return coords_.size(); }

  friend bool operator==(const SimplexPoint& a, const SimplexPoint& b) {
    return a.coords_ == b.coords_;
  }

 private:
  std::vector<double> coords_;
};

/// An ordered tuple of pairwise distinct circle points.
class Configuration {
 public:
  explicit Configuration(std::vector<Angle> points);

  const std::vector<Angle>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  Angle operator[](std::size_t i) const { return points_[i]; }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<Angle> points_;
};

/// True iff the tuple is positively cyclically ordered, i.e. lies in the
/// connected component of the uniform configuration (0, 1/n, ..., (n-1)/n).
bool in_base_component(const Configuration& c);

struct Chart {
  Angle base;           // first coordinate
  SimplexPoint simplex; // offsets of the remaining coordinates
};

/// Chart on the base component: (x_0, ..., x_{n-1}) maps to
/// (x_0, (x_1 - x_0 mod 1, ..., x_{n-1} - x_0 mod 1)), the offsets strictly
/// increasing in (0, 1). Throws when the input is outside the component.
Chart chart_coordinates(const Configuration& c);

/// Inverse of chart_coordinates: x_a = base + t_a (mod 1).
Configuration from_chart(Angle base, const SimplexPoint& t);
Configuration from_chart(const Chart& chart);

/// Cyclic coordinate shift: power = 1 sends (x_0, ..., x_{n-1}) to
/// (x_1, ..., x_{n-1}, x_0). Any integer power is accepted.
Configuration cyclic_shift(const Configuration& c, long power);

/// Sign of the Jacobian determinant of the d-step cyclic shift expressed in
/// chart coordinates, computed by central finite differences at an interior
/// point (the circle factor goes through a local lift). Requires d | n.
int shift_jacobian_sign(int n, int d);

enum class TwistType { Trivial, Twisted };

/// Topological type of the quotient of the base component by the order-k
/// cyclic subgroup of coordinate shifts: Twisted iff n is even and n/k odd.
TwistType twist_type(int n, int k);

/// Lexicographically least tuple in the orbit of c under the order-k cyclic
/// shift subgroup (shifts by multiples of n/k). Idempotent, k | n required.
Configuration canonical_representative(const Configuration& c, int k);

}  // namespace s1map
