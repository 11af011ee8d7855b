#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pon/experiment.hpp"
#include "pon/hindsight.hpp"
#include "pon/policies.hpp"
#include "pon/projection.hpp"
#include "pon/simulator.hpp"

namespace {

std::vector<double> random_point(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.2, 0.5);
  std::vector<double> y(n);
  for (double& v : y) v = u(rng);
  return y;
}

void BM_ProjectCappedSimplex(benchmark::State& state) {
  const auto y = random_point(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(pon::project_capped_simplex(y, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProjectCappedSimplex)->RangeMultiplier(4)->Range(4, 4096)->Complexity(benchmark::oNLogN);

void BM_OcoStep(benchmark::State& state) {
  const auto config = pon::preset("paper-base");
  pon::PolicyState s;
  s.previous_allocation = pon::uniform_allocation(config);
  s.demand_history = {pon::DemandVector(random_point(10, 2))};
  for (auto& v : s.demand_history[0]) v = std::abs(v);
  s.report_history = s.demand_history;
  s.step_index = 1;
  for (auto _ : state) benchmark::DoNotOptimize(pon::oco_step(s, pon::OcoParams{}, config));
}
BENCHMARK(BM_OcoStep);

void BM_SimulateCycles(benchmark::State& state, pon::PolicySpec spec) {
  auto config = pon::preset("paper-base");
  config.delta_t = 0.5;
  const auto cycles = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pon::run_simulation(config, spec, cycles, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_SimulateCycles, oco, pon::PolicySpec{pon::OcoParams{}})->Arg(1000);
BENCHMARK_CAPTURE(BM_SimulateCycles, maxwin, pon::PolicySpec{pon::MaxwinParams{}})->Arg(1000);
BENCHMARK_CAPTURE(BM_SimulateCycles, avgpred_1000, pon::PolicySpec{pon::AvgpredParams{1000}})->Arg(1000);

void BM_Hindsight(benchmark::State& state) {
  const auto config = pon::preset("paper-base");
  const auto trace = pon::run_simulation(config, pon::OcoParams{}, static_cast<std::size_t>(state.range(0)), 3);
  std::vector<pon::DemandVector> demands;
  for (const auto& rec : trace.cycles) demands.push_back(rec.demand);
  for (auto _ : state) benchmark::DoNotOptimize(pon::hindsight_optimum(demands, config));
}
BENCHMARK(BM_Hindsight)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
