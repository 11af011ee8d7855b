#include "pon/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <ostream>
#include <thread>

#include "pon/simulator.hpp"
#include "pon/trace_io.hpp"

namespace pon {

PonConfig preset(std::string_view name) {
  PonConfig c;
  c.num_onus = 10;
  c.cycle_length = 1.0;
  c.guards.assign(10, 0.0);
  c.slice_of = {0, 0, 0, 0, 0, 1, 1, 1, 2, 2};
  c.slice_weights = {1.0, 1.0, 1.0};
  c.lambdas = {10, 1, 1, 10, 1, 1, 10, 1, 1, 10};
  c.unit_time = 0.01;
  c.delta_t = 0.0;
  if (name == "paper-base") return validate_config(c);
  if (name == "paper-sliceweight") {
    c.slice_weights[2] = 1.2;
    return validate_config(c);
  }
  throw Error(ErrorCode::UnknownPreset, "unknown preset '" + std::string(name) +
                                            "'; valid presets: paper-base, paper-sliceweight");
}

std::vector<std::string> preset_names() { return {"paper-base", "paper-sliceweight"}; }

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string delta_label(double delta_t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", delta_t);
  return buf;
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t base_seed, std::string_view policy, double delta_t, std::uint64_t run) {
  const double normalized = delta_t == 0.0 ? 0.0 : delta_t;  // -0.0 and 0.0 share a seed
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ fnv1a(policy));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(normalized));
  h = splitmix64(h ^ run);
  return h;
}

std::filesystem::path replication_dir(const std::filesystem::path& root, std::string_view policy, double delta_t,
                                      std::size_t run) {
  std::string safe(policy);
  std::replace(safe.begin(), safe.end(), ':', '_');
  return root / safe / ("dt_" + delta_label(delta_t)) / ("run_" + std::to_string(run));
}

SweepResult sweep_delta(const PonConfig& base, const SweepOptions& options) {
  if (options.deltas.empty()) throw Error(ErrorCode::InvalidParameter, "delta list is empty");
  if (options.policies.empty()) throw Error(ErrorCode::InvalidParameter, "policy list is empty");
  if (options.runs == 0) throw Error(ErrorCode::InvalidParameter, "runs must be at least 1");
  if (options.cycles == 0) throw Error(ErrorCode::InvalidParameter, "cycles must be at least 1");

  struct Job {
    PolicySpec spec;
    std::string name;
    PonConfig config;
    double delta_t;
    std::size_t run;
  };
  std::vector<Job> jobs;
  for (const auto& spec : options.policies) {
    for (double dt : options.deltas) {
      PonConfig config = base;
      config.delta_t = dt;
      config = validate_config(config);
      for (std::size_t r = 0; r < options.runs; ++r) jobs.push_back({spec, policy_name(spec), config, dt, r});
    }
  }

  std::vector<RunSummary> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
      try {
        const auto& job = jobs[k];
        const auto seed = replication_seed(options.base_seed, job.name, job.delta_t, job.run);
        const auto trace = run_simulation(job.config, job.spec, options.cycles, seed);
        if (options.trace_dir) {
          const auto dir = replication_dir(*options.trace_dir, job.name, job.delta_t, job.run);
          std::filesystem::create_directories(dir);
          write_trace(dir, trace);
        }
        results[k] = {job.name, job.delta_t, job.run, seed, latency_stats(trace)};
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepResult out;
  out.runs = std::move(results);
  out.summary = summarize(out.runs);
  return out;
}

std::vector<SweepRow> summarize(const std::vector<RunSummary>& runs) {
  std::vector<SweepRow> rows;
  std::map<std::pair<std::string, double>, std::size_t> index;
  std::vector<std::vector<double>> samples;
  for (const auto& r : runs) {
    auto key = std::pair{r.policy, r.delta_t};
    auto [it, inserted] = index.try_emplace(key, rows.size());
    if (inserted) {
      rows.push_back({r.policy, r.delta_t, 0, 0.0, std::nullopt});
      samples.emplace_back();
    }
    samples[it->second].push_back(r.latency.mean);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& xs = samples[k];
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    rows[k].runs = xs.size();
    rows[k].mean_latency = mean;
    if (xs.size() > 1) {
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      rows[k].std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
  }
  return rows;
}

void write_sweep_summary_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "policy,delta_t,runs,mean_latency,std_error\n";
  for (const auto& r : rows) {
    out << r.policy << ',' << format_real(r.delta_t) << ',' << r.runs << ',' << format_real(r.mean_latency) << ',';
    if (r.std_error) out << format_real(*r.std_error);
    out << '\n';
  }
}

void write_sweep_runs_csv(std::ostream& out, const std::vector<RunSummary>& runs) {
  out << "policy,delta_t,run,seed,mean_latency,sigma_u,completed,censored\n";
  for (const auto& r : runs)
    out << r.policy << ',' << format_real(r.delta_t) << ',' << r.run << ',' << r.seed << ','
        << format_real(r.latency.mean) << ',' << format_real(r.latency.sigma_u) << ',' << r.latency.completed << ','
        << r.latency.censored << '\n';
}

}  // namespace pon
