#include "pon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "pon/hindsight.hpp"
#include "pon/objective.hpp"
#include "pon/trace_io.hpp"

namespace pon {

std::vector<std::size_t> log_horizon_grid(std::size_t cycles) {
  std::vector<std::size_t> grid;
  for (int k = 0;; ++k) {
    const auto h = static_cast<std::size_t>(std::llround(std::pow(10.0, 0.5 * k)));
    if (h >= cycles) break;
    if (grid.empty() || grid.back() != h) grid.push_back(h);
  }
  if (cycles > 0) grid.push_back(cycles);
  return grid;
}

std::vector<RegretPoint> regret_curve(const SimulationTrace& trace, const PonConfig& config,
                                      std::span<const std::size_t> horizons) {
  if (trace.cycles.empty()) throw Error(ErrorCode::InvalidParameter, "regret needs a non-empty trace");
  std::vector<DemandVector> demands;
  std::vector<double> online_prefix{0.0};
  demands.reserve(trace.cycles.size());
  for (const auto& rec : trace.cycles) {
    demands.push_back(rec.demand);
    online_prefix.push_back(online_prefix.back() + loss(rec.allocation, ObjectiveInstance::make(rec.demand, config)));
  }
  std::vector<RegretPoint> curve;
  for (std::size_t h : horizons) {
    if (h == 0 || h > demands.size())
      throw Error(ErrorCode::IndexOutOfRange, "regret horizon " + std::to_string(h) + " outside the trace");
    const std::span<const DemandVector> prefix(demands.data(), h);
    const auto best = solve_hindsight(prefix, config);
    RegretPoint point;
    point.horizon = h;
    point.online_loss = online_prefix[h];
    point.hindsight_loss = best.loss;
    point.regret = point.online_loss - point.hindsight_loss;
    curve.push_back(point);
  }
  return curve;
}

std::vector<RegretPoint> regret_curve(const SimulationTrace& trace, const PonConfig& config) {
  const auto grid = log_horizon_grid(trace.cycles.size());
  return regret_curve(trace, config, grid);
}

LatencyStats latency_stats(std::span<const Packet> packets, std::size_t num_onus, std::size_t censored) {
  if (packets.empty()) throw Error(ErrorCode::NoCompletedTraffic, "no packet completed service");
  LatencyStats s;
  s.per_onu_count.assign(num_onus, 0);
  std::vector<double> sums(num_onus, 0.0);
  double total = 0.0;
  for (const auto& p : packets) {
    const double l = p.latency();
    sums.at(p.onu) += l;
    ++s.per_onu_count[p.onu];
    total += l;
  }
  s.completed = packets.size();
  s.censored = censored;
  s.mean = total / static_cast<double>(packets.size());
  s.per_onu_mean.assign(num_onus, std::numeric_limits<double>::quiet_NaN());
  double mean_of_means = 0.0;
  std::size_t active = 0;
  for (std::size_t i = 0; i < num_onus; ++i) {
    if (s.per_onu_count[i] == 0) continue;
    s.per_onu_mean[i] = sums[i] / static_cast<double>(s.per_onu_count[i]);
    mean_of_means += s.per_onu_mean[i];
    ++active;
  }
  mean_of_means /= static_cast<double>(active);
  double var = 0.0;
  for (std::size_t i = 0; i < num_onus; ++i)
    if (s.per_onu_count[i] > 0) var += (s.per_onu_mean[i] - mean_of_means) * (s.per_onu_mean[i] - mean_of_means);
  s.sigma_u = std::sqrt(var / static_cast<double>(active));
  return s;
}

LatencyStats latency_stats(const SimulationTrace& trace) {
  std::size_t censored = 0;
  for (auto c : trace.censored) censored += c;
  return latency_stats(trace.packets, trace.config.num_onus, censored);
}

AllocationVector allocation_snapshot(const SimulationTrace& trace, std::size_t t) {
  if (t >= trace.cycles.size())
    throw Error(ErrorCode::IndexOutOfRange, "cycle " + std::to_string(t) + " is beyond a trace of " +
                                                std::to_string(trace.cycles.size()) + " cycles");
  return trace.cycles[t].allocation;
}

void write_regret_csv(std::ostream& out, std::span<const RegretPoint> curve) {
  out << "horizon,regret,regret_per_cycle,online_loss,hindsight_loss\n";
  for (const auto& p : curve)
    out << p.horizon << ',' << format_real(p.regret) << ',' << format_real(p.regret / static_cast<double>(p.horizon))
        << ',' << format_real(p.online_loss) << ',' << format_real(p.hindsight_loss) << '\n';
}

void write_latency_csv(std::ostream& out, const LatencyStats& stats) {
  out << "mean_latency,sigma_u,completed,censored\n";
  out << format_real(stats.mean) << ',' << format_real(stats.sigma_u) << ',' << stats.completed << ','
      << stats.censored << '\n';
}

void write_latency_per_onu_csv(std::ostream& out, const LatencyStats& stats) {
  out << "onu,mean_latency,completed\n";
  for (std::size_t i = 0; i < stats.per_onu_mean.size(); ++i) {
    out << i << ',';
    if (stats.per_onu_count[i] > 0) out << format_real(stats.per_onu_mean[i]);
    out << ',' << stats.per_onu_count[i] << '\n';
  }
}

}  // namespace pon
