#pragma once

// Named experiments. Each one turns a RunConfig into report rows and
// threshold checks; nothing in the report depends on timing or thread count.

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "brw/mcstats.hpp"

namespace brw {

inline constexpr std::uint64_t kDefaultSeed = 271828;

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"oracles",    "contour",   "variance",      "clt", "covariance",
                                                 "truncation", "badpoints", "fourth-moment", "all"};
  return names;
}

/// Zero or empty fields mean "experiment default" until resolve_defaults runs.
struct RunConfig {
  std::string experiment;
  std::size_t dim = 0;
  std::vector<Index> n_grid;
  std::int64_t k = -1;
  bool past_auto = true;
  Index past = 0;
  std::size_t replicas = 0;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "csv";
  bool check = false;
  int threads = 0;  ///< 0: BRW_THREADS or the OpenMP default
};

/// Default replica count of an experiment; --replicas scales every part by replicas / base.
std::size_t base_replicas(std::string_view experiment);

/// Fills experiment defaults; throws UsageError for unknown experiments or
/// flags the experiment does not take.
RunConfig resolve_defaults(RunConfig cfg);

struct ReportRow {
  std::string name;
  std::size_t d = 0;
  Index n = 0;
  std::int64_t k = 0;
  std::string M = "na";
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::string stat;
  double value = 0.0;
  double stderr_ = std::numeric_limits<double>::quiet_NaN();
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  ///< "<=", "<", ">=", ">", "=="
};

struct ExperimentReport {
  std::string experiment;
  RunConfig config;  ///< resolved
  std::vector<ReportRow> rows;
  std::vector<CheckResult> checks;

  bool all_passed() const noexcept;
  /// Throws ContractError if no check has this name.
  const CheckResult& check(std::string_view name) const;
};

/// Runs a resolved (or unresolved) config.
ExperimentReport run_experiment(const RunConfig& cfg);

}  // namespace brw
