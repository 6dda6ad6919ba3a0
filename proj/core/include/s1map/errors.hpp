#pragma once

#include <stdexcept>

namespace s1map {

/// A critical point with |second derivative| below the Morse threshold was
/// found; the analysis is rejected rather than silently degraded.
class NonMorseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single global compatible field requires an even number of exceptional
/// levels; thrown when the count is odd.
class ParityObstruction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative numeric procedure (quadrature, scalar solve, ODE stepper)
/// failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace s1map
