// pon-sim: run single simulations or seeded delta-t sweeps and write CSVs.
//
//   pon-sim run   --preset paper-base --policy oco --cycles 10000 --seed 1 --out out/run
//   pon-sim sweep --preset paper-base --policy oco --policy maxwin:0.2 --policy avgpred:100
//                 --delta-list 0,0.25,0.5,0.75,1 --runs 50 --out out/sweep
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime or I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pon/config_io.hpp"
#include "pon/experiment.hpp"
#include "pon/metrics.hpp"
#include "pon/trace_io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
  std::string config_path;
  std::string preset_name;
  std::optional<double> delta_t;
  std::size_t cycles = 10'000;
  std::uint64_t seed = 1;
  std::string out;
};

void add_common(CLI::App& cmd, CommonOptions& opt) {
  auto* config = cmd.add_option("--config", opt.config_path, "PON config file");
  auto* preset = cmd.add_option("--preset", opt.preset_name, "Built-in network: paper-base, paper-sliceweight");
  config->excludes(preset);
  cmd.add_option("--cycles", opt.cycles, "Cycles per simulation")->capture_default_str();
  cmd.add_option("--seed", opt.seed, "Seed (base seed for sweeps)")->capture_default_str();
  cmd.add_option("--out", opt.out, "Output directory")->required();
}

pon::PonConfig load(const CommonOptions& opt) {
  if (!opt.config_path.empty()) return pon::load_config(opt.config_path);
  return pon::preset(opt.preset_name.empty() ? "paper-base" : opt.preset_name);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw pon::Error(pon::ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

fs::path prepare_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out))
    throw pon::Error(pon::ErrorCode::IoError, "cannot create output directory " + out +
                                                  (ec ? ": " + ec.message() : std::string()));
  return out;
}

std::vector<double> parse_delta_list(const std::string& text) {
  std::vector<double> deltas;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw pon::Error(pon::ErrorCode::InvalidParameter, "bad delta-t value '" + item + "'");
    deltas.push_back(v);
  }
  if (deltas.empty()) throw pon::Error(pon::ErrorCode::InvalidParameter, "--delta-list is empty");
  return deltas;
}

int run_command(const CommonOptions& common, const std::string& policy_text, std::optional<std::size_t> snapshot) {
  auto config = load(common);
  if (common.delta_t) config.delta_t = *common.delta_t;
  config = pon::validate_config(config);
  const auto spec = pon::parse_policy(policy_text);
  if (common.cycles == 0) throw pon::Error(pon::ErrorCode::InvalidParameter, "--cycles must be at least 1");
  const auto dir = prepare_out_dir(common.out);

  const auto trace = pon::run_simulation(config, spec, common.cycles, common.seed);
  pon::write_trace(dir, trace);
  {
    auto out = open_output(dir / "config.txt");
    pon::write_config(out, config);
  }

  const auto stats = pon::latency_stats(trace);
  {
    auto out = open_output(dir / "latency.csv");
    pon::write_latency_csv(out, stats);
  }
  {
    auto out = open_output(dir / "latency_per_onu.csv");
    pon::write_latency_per_onu_csv(out, stats);
  }
  {
    const auto curve = pon::regret_curve(trace, config);
    auto out = open_output(dir / "regret.csv");
    pon::write_regret_csv(out, curve);
  }
  {
    const std::size_t t = snapshot.value_or(common.cycles - 1);
    const auto x = pon::allocation_snapshot(trace, t);
    auto out = open_output(dir / "allocation.csv");
    out << "cycle,onu,allocation\n";
    for (std::size_t i = 0; i < x.size(); ++i) out << t << ',' << i << ',' << pon::format_real(x[i]) << '\n';
  }

  std::printf("%s: %zu cycles, %zu packets completed, mean latency %.6g, sigma_U %.6g -> %s\n",
              trace.policy.c_str(), common.cycles, stats.completed, stats.mean, stats.sigma_u,
              dir.string().c_str());
  return 0;
}

int sweep_command(const CommonOptions& common, std::vector<std::string> policy_texts, const std::string& delta_list,
                  std::size_t runs, unsigned threads, bool keep_traces) {
  const auto config = pon::validate_config(load(common));
  pon::SweepOptions opt;
  if (policy_texts.empty()) policy_texts = {"oco", "maxwin:0.2", "avgpred:100"};
  for (const auto& p : policy_texts) opt.policies.push_back(pon::parse_policy(p));
  opt.deltas = parse_delta_list(delta_list);
  if (runs == 0) throw pon::Error(pon::ErrorCode::InvalidParameter, "--runs must be at least 1");
  opt.runs = runs;
  opt.cycles = common.cycles;
  opt.base_seed = common.seed;
  opt.threads = threads;
  for (double dt : opt.deltas) {
    auto probe = config;
    probe.delta_t = dt;
    pon::validate_config(probe);
  }
  const auto dir = prepare_out_dir(common.out);
  if (keep_traces) opt.trace_dir = dir / "traces";

  const auto result = pon::sweep_delta(config, opt);
  {
    auto out = open_output(dir / "summary.csv");
    pon::write_sweep_summary_csv(out, result.summary);
  }
  {
    auto out = open_output(dir / "runs.csv");
    pon::write_sweep_runs_csv(out, result.runs);
  }
  for (const auto& row : result.summary) {
    std::printf("%-14s dt=%-5g mean latency %.6g", row.policy.c_str(), row.delta_t, row.mean_latency);
    if (row.std_error) std::printf(" +- %.3g", *row.std_error);
    std::printf("\n");
  }
  return 0;
}

bool is_config_error(pon::ErrorCode code) {
  switch (code) {
    case pon::ErrorCode::CapacityExhausted:
    case pon::ErrorCode::SlicePartitionBroken:
    case pon::ErrorCode::NonPositiveWeight:
    case pon::ErrorCode::InvalidParameter:
    case pon::ErrorCode::UnknownPreset:
    case pon::ErrorCode::UnknownPolicy:
    case pon::ErrorCode::ParseError:
    case pon::ErrorCode::IndexOutOfRange:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PON upstream bandwidth allocation simulator"};
  app.require_subcommand(1);

  CommonOptions run_opt;
  std::string policy = "oco";
  std::optional<std::size_t> snapshot;
  auto* run = app.add_subcommand("run", "Simulate one policy and write trace and metric CSVs");
  add_common(*run, run_opt);
  run->add_option("--policy", policy, "oco[:eta0], oco-lin[:eta0], maxwin[:m] or avgpred[:h]")->capture_default_str();
  run->add_option("--delta-t", run_opt.delta_t, "Override the config's unreported-traffic lag");
  run->add_option("--snapshot", snapshot, "Cycle index for allocation.csv (default: last cycle)");

  CommonOptions sweep_opt;
  std::vector<std::string> policies;
  std::string delta_list;
  std::size_t runs = 1;
  unsigned threads = 0;
  bool keep_traces = false;
  auto* sweep = app.add_subcommand("sweep", "Replicated runs over a list of delta-t values");
  add_common(*sweep, sweep_opt);
  sweep->add_option("--policy", policies, "Policy to include; repeatable (default: oco, maxwin:0.2, avgpred:100)");
  sweep->add_option("--delta-list", delta_list, "Comma-separated delta-t values")->required();
  sweep->add_option("--runs", runs, "Replications per (policy, delta-t)")->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
  sweep->add_flag("--keep-traces", keep_traces, "Also write every replication's trace under <out>/traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return run_command(run_opt, policy, snapshot);
    return sweep_command(sweep_opt, policies, delta_list, runs, threads, keep_traces);
  } catch (const pon::Error& e) {
    std::fprintf(stderr, "pon-sim: %s\n", e.what());
    return is_config_error(e.code()) ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pon-sim: %s\n", e.what());
    return kExitRuntime;
  }
}
