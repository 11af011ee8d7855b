#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pon/metrics.hpp"
#include "pon/policies.hpp"
#include "pon/types.hpp"

namespace pon {

/// "paper-base": 10 ONUs in slices {0..4}, {5..7}, {8, 9}; ONUs 0, 3, 6, 9
/// carry lambda = 10, the rest lambda = 1; all slice weights 1.0.
/// "paper-sliceweight": the same with the slice of ONUs 8 and 9 at 1.2.
PonConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// Stable seed for one replication: splitmix64 folded over base seed, FNV-1a
/// of the policy name, the bit pattern of delta_t, and the run index.
std::uint64_t replication_seed(std::uint64_t base_seed, std::string_view policy, double delta_t, std::uint64_t run);

struct RunSummary {
  std::string policy;
  double delta_t = 0.0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  LatencyStats latency;
};

struct SweepOptions {
  std::vector<PolicySpec> policies;
  std::vector<double> deltas;
  std::size_t runs = 1;
  std::size_t cycles = 10'000;
  std::uint64_t base_seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  /// When set, every replication's trace is written under
  /// <dir>/<policy>/dt_<delta>/run_<r>/.
  std::optional<std::filesystem::path> trace_dir;
};

struct SweepRow {
  std::string policy;
  double delta_t = 0.0;
  std::size_t runs = 0;
  double mean_latency = 0.0;
  /// Sample standard deviation over runs divided by sqrt(runs); empty for one run.
  std::optional<double> std_error;
};

struct SweepResult {
  std::vector<RunSummary> runs;
  std::vector<SweepRow> summary;
};

/// Runs every (policy, delta_t, replication) combination. Replications run
/// concurrently; results are merged in a fixed order.
SweepResult sweep_delta(const PonConfig& base, const SweepOptions& options);

std::vector<SweepRow> summarize(const std::vector<RunSummary>& runs);

void write_sweep_summary_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_runs_csv(std::ostream& out, const std::vector<RunSummary>& runs);

std::filesystem::path replication_dir(const std::filesystem::path& root, std::string_view policy, double delta_t,
                                      std::size_t run);

}  // namespace pon
