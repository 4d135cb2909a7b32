#pragma once

// The `clo` command-line front end. Exit codes: 0 for a definite result,
// 2 for Unknown (or a budget-limited candidate), 1 for errors and failed checks.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "clo/engine.hpp"
#include "clo/finite.hpp"

namespace clo::cli {

struct Config {
  Rank rankBudget = 6;
  int depthBudget = 3;
  std::optional<std::uint64_t> indexCapOverride;
  OracleCaps oracleCaps;
  std::optional<std::size_t> memoLimit;
  bool json = false;
};

/// Reads a JSON config file: {"rankBudget", "depthBudget", "indexCapOverride",
/// "oracleCaps": {"maxSize", "maxRank"}, "memoLimit", "outputFormat": "text"|"json"}.
Config load_config(const std::string& path);

/// Runs one invocation; args excludes the program name. CLO_CONFIG names a
/// config file applied before the command-line flags.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace clo::cli
