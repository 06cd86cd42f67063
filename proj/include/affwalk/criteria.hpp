#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace affwalk {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct CriteriaOptions {
  std::uint64_t seed = 20240601;
  unsigned workers = 1;
};

inline constexpr int kCriterionCount = 12;

/// Runs acceptance criterion `id` (1..12) at its stated sample budget and
/// tolerances. A criterion passes only if every assertion holds and it
/// finishes within its runtime budget.
CriterionResult run_criterion(int id, const CriteriaOptions& opts = {});

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const CriteriaOptions& opts = {});

/// "criterion N: PASS|FAIL [name] detail" without the trailing newline.
std::string format_criterion(const CriterionResult& r);

/// One line per result, then a summary line.
std::string format_acceptance(const std::vector<CriterionResult>& results);

}  // namespace affwalk
