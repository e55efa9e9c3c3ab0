#pragma once

// The ten acceptance criteria, runnable from the CLI selftest and from ctest.

#include <functional>
#include <string>
#include <vector>

namespace wgqed::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;     // measured values against their bounds
  double seconds = 0.0;
  double time_limit = 0.0;
};

/// Runs criteria in order (all when `only` is empty). `on_result` fires as
/// each one finishes. `jobs` is forwarded to the sweep.
std::vector<CriterionResult> run_all(const std::vector<int>& only = {}, unsigned jobs = 0,
                                     const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 3 norm conservation (0.41 s): ..." style line.
std::string format_line(const CriterionResult& r);

}  // namespace wgqed::acceptance
