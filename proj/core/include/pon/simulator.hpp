#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pon/policies.hpp"
#include "pon/types.hpp"

namespace pon {

/// All randomness in a run comes from one of these, seeded once.
using Rng = std::mt19937_64;

struct Packet {
  std::size_t onu = 0;
  double arrival_time = 0.0;
  double size = 0.0;
  std::optional<double> departure_time;
  /// False for traffic that arrived after the last REPORT snapshot and has not
  /// yet passed a window; such packets are invisible to REPORT.
  bool reported = true;

  double latency() const { return departure_time.value() - arrival_time; }
};

struct QueueState {
  std::deque<Packet> packets;
  double backlog = 0.0;

  void push(Packet p);
  /// Queued traffic that has arrived by `time`.
  double backlog_at(double time) const;
  /// As backlog_at, counting only packets a REPORT snapshot can see.
  double reported_backlog_at(double time) const;
};

struct Arrivals {
  std::vector<Packet> reported;
  std::vector<Packet> hidden;
};

struct ArrivalSpec {
  std::size_t onu = 0;
  double lambda = 0.0;
  double delta_t = 0.0;
  double cycle_length = 1.0;
  double packet_size = 0.01;
};

/// One cycle of traffic for one ONU. Reported: Pois(lambda) packets uniform in
/// [start, start + C - delta_t). Hidden: Pois(lambda * delta_t / C) packets
/// uniform in the last delta_t of the cycle. Both lists are sorted by time.
Arrivals generate_arrivals(Rng& rng, const ArrivalSpec& spec, std::size_t cycle);

/// Window start offsets relative to the cycle start: ONUs in index order, each
/// window followed by its guard.
std::vector<double> window_offsets(const AllocationVector& x, const PonConfig& config);

struct ServeResult {
  std::vector<Packet> served;
  double served_amount = 0.0;
};

/// FIFO service at unit rate inside [window_start, window_start + window_len).
/// A packet goes out only if it has arrived by its transmission start and fits
/// entirely in what remains of the window; the queue is modified in place.
ServeResult serve_window(QueueState& queue, double window_start, double window_len);

struct CycleRecord {
  AllocationVector allocation;
  /// Queue at each ONU's window start.
  DemandVector demand;
  /// What a REPORT snapshot saw at the same instant.
  DemandVector report;
  std::vector<double> served;
  std::vector<double> arrived;
  std::vector<double> backlog_end;
  std::vector<double> window_start;
};

struct SimulationTrace {
  PonConfig config;
  std::string policy;
  std::uint64_t seed = 0;
  std::vector<CycleRecord> cycles;
  /// Completed packets in service order.
  std::vector<Packet> packets;
  /// Packets still queued when the run ended, per ONU.
  std::vector<std::size_t> censored;
};

SimulationTrace run_simulation(const PonConfig& config, Policy& policy, std::size_t cycles, std::uint64_t seed);
SimulationTrace run_simulation(const PonConfig& config, const PolicySpec& spec, std::size_t cycles,
                               std::uint64_t seed);

struct TraceCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Verifies conservation, causality, FIFO order and window capacity on a trace.
TraceCheck check_trace(const SimulationTrace& trace, double tol = 1e-12);

}  // namespace pon
