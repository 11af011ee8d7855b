#include "pon/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pon {

namespace {

// Slack for "packet fits in the window" comparisons; windows are sums of
// cycle fractions and accumulate rounding.
constexpr double kFitEps = 1e-12;

}  // namespace

void QueueState::push(Packet p) {
  backlog += p.size;
  packets.push_back(std::move(p));
}

double QueueState::backlog_at(double time) const {
  double sum = 0.0;
  for (const auto& p : packets) {
    if (p.arrival_time > time) break;
    sum += p.size;
  }
  return sum;
}

double QueueState::reported_backlog_at(double time) const {
  double sum = 0.0;
  for (const auto& p : packets) {
    if (p.arrival_time > time) break;
    if (p.reported) sum += p.size;
  }
  return sum;
}

Arrivals generate_arrivals(Rng& rng, const ArrivalSpec& spec, std::size_t cycle) {
  Arrivals out;
  if (spec.lambda <= 0.0) return out;
  const double start = static_cast<double>(cycle) * spec.cycle_length;
  const double visible_len = spec.cycle_length - spec.delta_t;

  auto draw = [&](double mean, double seg_start, double seg_len, bool reported, std::vector<Packet>& sink) {
    if (mean <= 0.0) return;
    std::poisson_distribution<long> count_dist(mean);
    const long count = count_dist(rng);
    std::uniform_real_distribution<double> offset(0.0, 1.0);
    sink.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) {
      Packet p;
      p.onu = spec.onu;
      p.arrival_time = seg_start + offset(rng) * seg_len;
      p.size = spec.packet_size;
      p.reported = reported;
      sink.push_back(p);
    }
    std::sort(sink.begin(), sink.end(),
              [](const Packet& a, const Packet& b) { return a.arrival_time < b.arrival_time; });
  };

  draw(spec.lambda, start, visible_len, true, out.reported);
  draw(spec.lambda * spec.delta_t / spec.cycle_length, start + visible_len, spec.delta_t, false, out.hidden);
  return out;
}

std::vector<double> window_offsets(const AllocationVector& x, const PonConfig& config) {
  std::vector<double> starts(x.size());
  double cursor = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    starts[i] = cursor;
    cursor += x[i] + config.guards[i];
  }
  return starts;
}

ServeResult serve_window(QueueState& queue, double window_start, double window_len) {
  ServeResult result;
  const double window_end = window_start + window_len;
  double cursor = window_start;
  while (!queue.packets.empty()) {
    Packet& head = queue.packets.front();
    const double tx_start = std::max(cursor, head.arrival_time);
    const double departure = tx_start + head.size;
    if (departure > window_end + kFitEps) break;
    head.departure_time = departure;
    cursor = departure;
    queue.backlog -= head.size;
    result.served_amount += head.size;
    result.served.push_back(std::move(head));
    queue.packets.pop_front();
  }
  if (queue.packets.empty()) queue.backlog = 0.0;
  return result;
}

SimulationTrace run_simulation(const PonConfig& config, Policy& policy, std::size_t cycles, std::uint64_t seed) {
  const std::size_t n = config.num_onus;
  const double cap = capacity(config);
  Rng rng(seed);
  std::vector<QueueState> queues(n);

  SimulationTrace trace;
  trace.config = config;
  trace.policy = policy.name();
  trace.seed = seed;
  trace.cycles.reserve(cycles);

  for (std::size_t t = 0; t < cycles; ++t) {
    CycleRecord rec;
    rec.allocation = policy.decide();
    if (!is_feasible(rec.allocation, cap))
      throw Error(ErrorCode::InfeasiblePoint, "policy " + policy.name() + " returned an infeasible allocation");

    rec.arrived.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      ArrivalSpec spec{i, config.lambdas[i], config.delta_t, config.cycle_length, config.unit_time};
      auto arrivals = generate_arrivals(rng, spec, t);
      for (auto& p : arrivals.reported) {
        rec.arrived[i] += p.size;
        queues[i].push(std::move(p));
      }
      for (auto& p : arrivals.hidden) {
        rec.arrived[i] += p.size;
        queues[i].push(std::move(p));
      }
    }

    const double cycle_start = static_cast<double>(t) * config.cycle_length;
    rec.window_start = window_offsets(rec.allocation, config);
    rec.demand = DemandVector(n);
    rec.report = DemandVector(n);
    rec.served.assign(n, 0.0);
    rec.backlog_end.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double ws = cycle_start + rec.window_start[i];
      rec.window_start[i] = ws;
      QueueState& q = queues[i];
      rec.demand[i] = q.backlog_at(ws);
      rec.report[i] = q.reported_backlog_at(ws);
      auto served = serve_window(q, ws, rec.allocation[i]);
      rec.served[i] = served.served_amount;
      for (auto& p : served.served) trace.packets.push_back(std::move(p));
      // Whatever was waiting at this window start is reported from now on.
      for (auto& p : q.packets) {
        if (p.arrival_time > ws) break;
        p.reported = true;
      }
    }
    for (std::size_t i = 0; i < n; ++i) rec.backlog_end[i] = queues[i].backlog;

    policy.observe(rec.allocation, rec.demand, rec.report);
    trace.cycles.push_back(std::move(rec));
  }

  trace.censored.resize(n);
  for (std::size_t i = 0; i < n; ++i) trace.censored[i] = queues[i].packets.size();
  return trace;
}

SimulationTrace run_simulation(const PonConfig& config, const PolicySpec& spec, std::size_t cycles,
                               std::uint64_t seed) {
  Policy policy(spec, config);
  return run_simulation(config, policy, cycles, seed);
}

TraceCheck check_trace(const SimulationTrace& trace, double tol) {
  TraceCheck check;
  auto fail = [&](std::string msg) {
    check.ok = false;
    if (check.violations.size() < 20) check.violations.push_back(std::move(msg));
  };
  const auto& config = trace.config;
  const std::size_t n = config.num_onus;
  const double cap = capacity(config);

  std::vector<double> backlog(n, 0.0);
  for (std::size_t t = 0; t < trace.cycles.size(); ++t) {
    const auto& rec = trace.cycles[t];
    if (!is_feasible(rec.allocation, cap)) fail("cycle " + std::to_string(t) + ": infeasible allocation");
    for (std::size_t i = 0; i < n; ++i) {
      const double expected = backlog[i] + rec.arrived[i] - rec.served[i];
      if (std::abs(expected - rec.backlog_end[i]) > tol)
        fail("cycle " + std::to_string(t) + " ONU " + std::to_string(i) + ": backlog not conserved");
      if (rec.served[i] > rec.allocation[i] + tol)
        fail("cycle " + std::to_string(t) + " ONU " + std::to_string(i) + ": served more than the window");
      if (rec.report[i] > rec.demand[i] + tol)
        fail("cycle " + std::to_string(t) + " ONU " + std::to_string(i) + ": report exceeds demand");
      backlog[i] = rec.backlog_end[i];
    }
  }

  std::vector<double> last_arrival(n, -1.0);
  std::vector<double> last_departure(n, -1.0);
  for (const auto& p : trace.packets) {
    if (!p.departure_time) {
      fail("completed packet without departure time");
      continue;
    }
    if (*p.departure_time < p.arrival_time + p.size - tol) fail("packet departs before it could be sent");
    if (p.arrival_time < last_arrival[p.onu]) fail("FIFO order broken at ONU " + std::to_string(p.onu));
    if (*p.departure_time < last_departure[p.onu]) fail("departures out of order at ONU " + std::to_string(p.onu));
    last_arrival[p.onu] = p.arrival_time;
    last_departure[p.onu] = *p.departure_time;
  }
  return check;
}

}  // namespace pon
