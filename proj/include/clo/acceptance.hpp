#pragma once

// The acceptance criteria as runnable checks.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace clo {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double ms = 0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  std::size_t propertyCases = 10000;
  std::set<int> only;  // empty: all criteria
};

inline constexpr int kCriterionCount = 10;

std::string criterion_name(int id);

/// Runs the selected criteria in order; `progress` sees each result as it completes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            const std::function<void(const CriterionResult&)>& progress = {});

}  // namespace clo
