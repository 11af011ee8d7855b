#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "pon/experiment.hpp"
#include "pon/trace_io.hpp"

using namespace pon;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ponoco_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("presets") {
  const auto base = preset("paper-base");
  CHECK(base.num_onus == 10);
  CHECK(capacity(base) == doctest::Approx(1.0));
  double load = 0;
  for (double l : base.lambdas) load += l * base.unit_time;
  CHECK(load == doctest::Approx(0.46));
  for (std::size_t i : {0, 3, 6, 9}) CHECK(base.lambdas[i] == 10.0);
  CHECK(base.slice_of[9] == 2);
  CHECK(base.weight_of(9) == 1.0);

  const auto weighted = preset("paper-sliceweight");
  CHECK(weighted.weight_of(8) == doctest::Approx(1.2));
  CHECK(weighted.weight_of(9) == doctest::Approx(1.2));
  CHECK(weighted.weight_of(0) == 1.0);

  try {
    preset("nope");
    FAIL("expected UnknownPreset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownPreset);
  }
  for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name));
}

TEST_CASE("replication seeds are distinct and stable") {
  std::set<std::uint64_t> seen;
  for (const char* p : {"oco", "maxwin:0.2", "avgpred:10"})
    for (double dt : {0.0, 0.25, 0.5})
      for (std::uint64_t r = 0; r < 20; ++r) seen.insert(replication_seed(1, p, dt, r));
  CHECK(seen.size() == 3 * 3 * 20);
  CHECK(replication_seed(1, "oco", 0.5, 3) == replication_seed(1, "oco", 0.5, 3));
  CHECK(replication_seed(1, "oco", 0.5, 3) != replication_seed(2, "oco", 0.5, 3));
  CHECK(replication_seed(1, "oco", 0.0, 0) == replication_seed(1, "oco", -0.0, 0));
}

TEST_CASE("replication directory layout") {
  CHECK(replication_dir("out", "maxwin:0.2", 0.25, 4) == fs::path("out/maxwin_0.2/dt_0.25/run_4"));
}

TEST_CASE("sweep argument checks") {
  SweepOptions opt;
  opt.policies = {OcoParams{}};
  opt.cycles = 10;
  CHECK_THROWS_AS(sweep_delta(preset("paper-base"), opt), Error);
  opt.deltas = {0.0};
  opt.runs = 0;
  CHECK_THROWS_AS(sweep_delta(preset("paper-base"), opt), Error);
  opt.runs = 1;
  opt.policies.clear();
  CHECK_THROWS_AS(sweep_delta(preset("paper-base"), opt), Error);
  opt.policies = {OcoParams{}};
  opt.deltas = {2.0};
  CHECK_THROWS_AS(sweep_delta(preset("paper-base"), opt), ConfigError);
}

TEST_CASE("a single run has no standard error") {
  SweepOptions opt;
  opt.policies = {MaxwinParams{}};
  opt.deltas = {0.5};
  opt.runs = 1;
  opt.cycles = 100;
  const auto r = sweep_delta(preset("paper-base"), opt);
  REQUIRE(r.summary.size() == 1);
  CHECK_FALSE(r.summary[0].std_error.has_value());
  std::ostringstream os;
  write_sweep_summary_csv(os, r.summary);
  CHECK(os.str().find("maxwin:0.2,0.5,1,") != std::string::npos);
  CHECK(os.str().back() == '\n');
  CHECK(os.str()[os.str().size() - 2] == ',');
}

TEST_CASE("sweep summaries can be rebuilt from the stored traces") {
  const auto dir = fresh_dir("sweep");
  SweepOptions opt;
  opt.policies = {OcoParams{}, AvgpredParams{10}};
  opt.deltas = {0.0, 0.5};
  opt.runs = 3;
  opt.cycles = 200;
  opt.threads = 3;
  opt.trace_dir = dir;
  const auto result = sweep_delta(preset("paper-base"), opt);
  CHECK(result.runs.size() == 12);
  CHECK(result.summary.size() == 4);

  std::vector<RunSummary> rebuilt;
  for (const auto& run : result.runs) {
    std::ifstream in(replication_dir(dir, run.policy, run.delta_t, run.run) / "packets.csv");
    REQUIRE(in);
    std::vector<Packet> packets;
    for (const auto& row : read_packets_csv(in)) {
      Packet p;
      p.onu = row.onu;
      p.arrival_time = row.arrival;
      p.departure_time = row.departure;
      packets.push_back(p);
    }
    RunSummary s = run;
    s.latency = latency_stats(packets, 10);
    CHECK(s.latency.mean == doctest::Approx(run.latency.mean).epsilon(1e-12));
    rebuilt.push_back(s);
  }
  const auto again = summarize(rebuilt);
  REQUIRE(again.size() == result.summary.size());
  for (std::size_t k = 0; k < again.size(); ++k) {
    CHECK(again[k].policy == result.summary[k].policy);
    CHECK(again[k].mean_latency == doctest::Approx(result.summary[k].mean_latency).epsilon(1e-12));
    REQUIRE(again[k].std_error.has_value());
    CHECK(*again[k].std_error == doctest::Approx(*result.summary[k].std_error).epsilon(1e-9));
  }
  fs::remove_all(dir);
}

TEST_CASE("sweep results do not depend on the thread count") {
  SweepOptions opt;
  opt.policies = {OcoParams{}, MaxwinParams{}};
  opt.deltas = {0.25};
  opt.runs = 4;
  opt.cycles = 150;
  opt.threads = 1;
  const auto serial = sweep_delta(preset("paper-base"), opt);
  opt.threads = 4;
  const auto parallel = sweep_delta(preset("paper-base"), opt);
  REQUIRE(serial.runs.size() == parallel.runs.size());
  for (std::size_t k = 0; k < serial.runs.size(); ++k) {
    CHECK(serial.runs[k].seed == parallel.runs[k].seed);
    CHECK(serial.runs[k].latency.mean == parallel.runs[k].latency.mean);
  }
}

TEST_CASE("trace files round-trip exactly") {
  auto c = preset("paper-base");
  c.delta_t = 0.5;
  const auto trace = run_simulation(c, OcoParams{}, 50, 21);
  std::stringstream cycles;
  write_cycles_csv(cycles, trace);
  const auto rows = read_cycles_csv(cycles);
  REQUIRE(rows.size() == 50);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    CHECK(rows[t].t == t);
    CHECK(rows[t].allocation == trace.cycles[t].allocation);
    CHECK(rows[t].demand == trace.cycles[t].demand);
    CHECK(rows[t].report == trace.cycles[t].report);
    CHECK(rows[t].served == trace.cycles[t].served);
  }
  std::stringstream packets;
  write_packets_csv(packets, trace);
  const auto prow = read_packets_csv(packets);
  REQUIRE(prow.size() == trace.packets.size());
  for (std::size_t k = 0; k < prow.size(); ++k) {
    CHECK(prow[k].arrival == trace.packets[k].arrival_time);
    CHECK(prow[k].departure == *trace.packets[k].departure_time);
  }
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("malformed trace files are rejected") {
  std::istringstream bad_header("x,y\n");
  CHECK_THROWS_AS(read_packets_csv(bad_header), Error);
  std::istringstream short_row("onu,arrival,departure\n1,2\n");
  CHECK_THROWS_AS(read_packets_csv(short_row), Error);
}

TEST_CASE("write_trace reports unwritable directories") {
  const auto trace = run_simulation(preset("paper-base"), MaxwinParams{}, 5, 1);
  try {
    write_trace("/proc/ponoco-no-such-dir", trace);
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}
