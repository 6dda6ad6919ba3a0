#pragma once

#include <compare>

namespace s1map {

/// Reduce a finite real number of turns to its representative in [0, 1).
/// Throws std::invalid_argument on NaN or infinity.
double normalize_turns(double r);

/// A point of the circle R/Z measured in turns (full circle = 1). The stored
/// representative always lies in [0, 1); normalization is idempotent.
class Angle {
 public:
  Angle() = default;
  explicit Angle(double turns);

  double turns() const { return value_; }

  friend bool operator==(Angle a, Angle b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(Angle a, Angle b) {
    // Order of the canonical representatives; used for sorting and
    // lexicographic tie-breaks, not a circle-invariant order.
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  double value_ = 0.0;
};

/// Signed difference a - b as the unique representative in (-1/2, 1/2].
double angle_sub(Angle a, Angle b);

/// Distance on the circle, |angle_sub(a, b)|, in [0, 1/2].
double circle_dist(Angle a, Angle b);

/// True iff walking positively from a meets b strictly before c.
/// The three points must be pairwise distinct.
bool cyclic_order(Angle a, Angle b, Angle c);

/// An open arc traversed in the positive direction from start to end.
/// start == end is rejected: a full circle minus a point is not an Arc and
/// must be represented explicitly by the caller.
class Arc {
 public:
  Arc(Angle start, Angle end);

  Angle start() const { return start_; }
  Angle end() const { return end_; }

  /// Length in turns, in (0, 1).
  double length() const;

  /// Strict interior membership, decided by cyclic order.
  bool contains(Angle x) const;

 private:
  Angle start_, end_;
};

}  // namespace s1map
