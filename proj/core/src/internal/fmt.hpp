#pragma once

#include <cstdio>
#include <string>

namespace s1map::internal {

// All floats in serialized output carry 17 significant digits so that
// round-trips are exact and reports are byte-reproducible.
inline void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

inline std::string g17(double v) {
  std::string s;
  append_g17(s, v);
  return s;
}

}  // namespace s1map::internal
