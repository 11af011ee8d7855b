#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "pon/simulator.hpp"

namespace pon {

struct RegretPoint {
  std::size_t horizon = 0;
  /// Loss of the played allocations minus loss of the best fixed allocation
  /// for the same prefix of demands.
  double regret = 0.0;
  double online_loss = 0.0;
  double hindsight_loss = 0.0;
};

/// Prefix lengths round(10^(k/2)) up to `cycles`, always ending at `cycles`.
std::vector<std::size_t> log_horizon_grid(std::size_t cycles);

std::vector<RegretPoint> regret_curve(const SimulationTrace& trace, const PonConfig& config,
                                      std::span<const std::size_t> horizons);
std::vector<RegretPoint> regret_curve(const SimulationTrace& trace, const PonConfig& config);

struct LatencyStats {
  double mean = 0.0;
  std::vector<double> per_onu_mean;  // NaN for ONUs with no completed packet
  std::vector<std::size_t> per_onu_count;
  /// Population standard deviation of per_onu_mean over ONUs with traffic.
  double sigma_u = 0.0;
  std::size_t completed = 0;
  std::size_t censored = 0;
};

/// Sojourn time (arrival to departure) of completed packets, in cycles.
/// Packets still queued at the end are only counted in `censored`.
/// Throws NoCompletedTraffic when nothing finished.
LatencyStats latency_stats(const SimulationTrace& trace);
LatencyStats latency_stats(std::span<const Packet> packets, std::size_t num_onus, std::size_t censored = 0);

AllocationVector allocation_snapshot(const SimulationTrace& trace, std::size_t t);

void write_regret_csv(std::ostream& out, std::span<const RegretPoint> curve);
void write_latency_csv(std::ostream& out, const LatencyStats& stats);
void write_latency_per_onu_csv(std::ostream& out, const LatencyStats& stats);

}  // namespace pon
