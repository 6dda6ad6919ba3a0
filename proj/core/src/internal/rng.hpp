#pragma once

#include <cstdint>
#include <random>

namespace s1map::internal {

// Deterministic uniform doubles independent of the standard library's
// distribution implementations, so fixed seeds reproduce everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // in [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t bits() { return eng_(); }

  int index(int n) { return static_cast<int>(bits() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace s1map::internal
