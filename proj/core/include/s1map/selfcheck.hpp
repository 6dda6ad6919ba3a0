#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace s1map::selfcheck {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst observed deviation (or violation count)
  double tolerance = 0.0;  // pass iff measured <= tolerance
  std::string detail;
};

struct Options {
  std::uint64_t seed = 20260810ULL;
  std::optional<double> tolerance_override;  // replaces every tolerance
  int grid = 2048;
};

/// Runs the full property suite (13 criteria) and returns one result per
/// criterion, in order. Deterministic for a fixed seed.
std::vector<CriterionResult> run_all(const Options& options = {});

/// One human-readable line per criterion: "[PASS] ..." / "[FAIL] ...".
std::string format_line(const CriterionResult& r);

/// JSON report of the whole run (17 significant digits, byte-stable).
std::string report_json(const std::vector<CriterionResult>& results,
                        const Options& options);

}  // namespace s1map::selfcheck
