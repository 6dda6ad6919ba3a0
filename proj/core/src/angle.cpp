#include "s1map/angle.hpp"

#include <cmath>
#include <stdexcept>

namespace s1map {

double normalize_turns(double r) {
  if (!std::isfinite(r)) {
    throw std::invalid_argument("normalize_turns: non-finite input");
  }
  double v = r - std::floor(r);
  if (v >= 1.0) v -= 1.0;  // r just below an integer rounds up to 1.0
  if (v < 0.0) v = 0.0;
  return v;
}

Angle::Angle(double turns) : value_(normalize_turns(turns)) {}

double angle_sub(Angle a, Angle b) {
  double d = a.turns() - b.turns();  // in (-1, 1)
  if (d <= -0.5) d += 1.0;
  if (d > 0.5) d -= 1.0;
  return d;
}

double circle_dist(Angle a, Angle b) { return std::fabs(angle_sub(a, b)); }

bool cyclic_order(Angle a, Angle b, Angle c) {
  if (a == b || b == c || a == c) {
    throw std::invalid_argument("cyclic_order: coincident inputs");
  }
  double u = normalize_turns(b.turns() - a.turns());
  double v = normalize_turns(c.turns() - a.turns());
  return u < v;
}

Arc::Arc(Angle start, Angle end) : start_(start), end_(end) {
  if (start == end) {
    throw std::invalid_argument("Arc: start and end coincide");
  }
}

double Arc::length() const {
  return normalize_turns(end_.turns() - start_.turns());
}

bool Arc::contains(Angle x) const {
  if (x == start_ || x == end_) return false;
  double u = normalize_turns(x.turns() - start_.turns());
  return u < length();
}

}  // namespace s1map
