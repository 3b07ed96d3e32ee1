#pragma once

#include <string>
#include <vector>

namespace mch::cli {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

inline constexpr int kCriterionCount = 9;

/// Runs acceptance criterion `id` (1..9), timing included in the verdict.
CriterionResult run_criterion(int id);

/// "PASS [3] title (1.23 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace mch::cli
