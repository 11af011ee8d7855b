#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pon/experiment.hpp"
#include "pon/hindsight.hpp"
#include "pon/policies.hpp"
#include "pon/projection.hpp"

using namespace pon;

namespace {

PonConfig flat_config(std::size_t n, double cap = 1.0) {
  PonConfig c;
  c.num_onus = n;
  c.cycle_length = cap;
  c.guards.assign(n, 0.0);
  c.slice_of.assign(n, 0);
  c.slice_weights = {1.0};
  c.lambdas.assign(n, 1.0);
  return validate_config(c);
}

PolicyState state_after(const AllocationVector& prev, const DemandVector& b) {
  PolicyState s;
  s.previous_allocation = prev;
  s.demand_history = {b};
  s.report_history = {b};
  s.step_index = 1;
  return s;
}

}  // namespace

TEST_CASE("OCO starts from the uniform split") {
  const auto c = flat_config(4);
  PolicyState empty;
  const auto x = oco_step(empty, OcoParams{}, c);
  for (double v : x) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("OCO step on an interior point") {
  const auto c = flat_config(2);
  const AllocationVector prev{0.2, 0.2};
  const DemandVector b{0.5, 0.1};
  const auto inst = ObjectiveInstance::make(b, c);

  const auto g = subgradient(prev, inst);
  CHECK(g[0] == doctest::Approx(-0.5 / 1.2));
  CHECK(g[1] == 0.0);

  const auto x = oco_step(state_after(prev, b), OcoParams{0.1, StepSchedule::InverseSqrt}, c);
  CHECK(x[0] == doctest::Approx(0.2 + 0.1 * 0.5 / 1.2).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(x[0] == doctest::Approx(0.241666666666).epsilon(1e-9));
  // Already feasible, so the projection leaves the raw step untouched.
  const auto raw = std::vector<double>{x[0], x[1]};
  CHECK(project_capped_simplex(raw, 1.0) == x);
}

TEST_CASE("OCO step that overshoots the capacity") {
  const auto c = flat_config(2);
  const AllocationVector prev{0.9, 0.9};
  const DemandVector b{5, 5};
  const auto g = subgradient(prev, ObjectiveInstance::make(b, c));
  CHECK(prev[0] - 1.0 * g[0] == doctest::Approx(0.9 + 5.0 / 1.9));
  const auto x = oco_step(state_after(prev, b), OcoParams{1.0, StepSchedule::InverseSqrt}, c);
  CHECK(x[0] == doctest::Approx(0.5));
  CHECK(x[1] == doctest::Approx(0.5));
}

TEST_CASE("step schedules") {
  CHECK(step_size({0.1, StepSchedule::InverseSqrt}, 1) == doctest::Approx(0.1));
  CHECK(step_size({0.1, StepSchedule::InverseSqrt}, 4) == doctest::Approx(0.05));
  CHECK(step_size({0.1, StepSchedule::InverseLinear}, 4) == doctest::Approx(0.025));
}

TEST_CASE("MAXWIN examples") {
  auto x = maxwin_decide({0.3, 0.1}, 0.2, 0.9);
  CHECK(x[0] == doctest::Approx(0.2));
  CHECK(x[1] == doctest::Approx(0.1));
  x = maxwin_decide(DemandVector(10, 0.5), 0.2, 0.9);
  for (double v : x) CHECK(v == doctest::Approx(0.09));
  x = maxwin_decide({0, 0}, 0.2, 1.0);
  CHECK(x[0] == 0.0);
  CHECK(x[1] == 0.0);
}

TEST_CASE("MAXWIN never grants more than min(m, report)") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    DemandVector r(n);
    for (double& v : r) v = u(rng);
    const auto x = maxwin_decide(r, 0.2, 0.9);
    CHECK(is_feasible(x, 0.9));
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] <= std::min(0.2, r[i]) + 1e-15);
  }
}

TEST_CASE("AVGPRED examples") {
  std::vector<DemandVector> h{{0.1}, {0.2}, {0.3}};
  CHECK(avgpred_decide(h, 3, 1.0)[0] == doctest::Approx(0.2));
  CHECK(avgpred_decide(h, 2, 1.0)[0] == doctest::Approx(0.25));

  std::vector<DemandVector> four{{0.1}, {0.2}, {0.3}, {0.4}};
  CHECK(avgpred_decide(four, 10, 1.0)[0] == doctest::Approx(0.25));

  std::vector<DemandVector> big{{1.2, 0.6}};
  const auto x = avgpred_decide(big, 5, 0.9);
  CHECK(x[0] == doctest::Approx(0.6));
  CHECK(x[1] == doctest::Approx(0.3));

  CHECK(avgpred_decide({}, 3, 1.0).empty());
}

TEST_CASE("policy names round-trip through the parser") {
  for (const char* name : {"oco", "oco:0.1", "oco-lin", "oco-lin:2", "maxwin:0.2", "maxwin:0.4", "avgpred:10",
                           "avgpred:1000"})
    CHECK(policy_name(parse_policy(name)) == name);
  CHECK(policy_name(parse_policy("maxwin")) == "maxwin:0.2");
  for (const char* bad : {"", "ocoo", "maxwin:", "maxwin:-1", "avgpred:0", "avgpred:x", "fifo"}) {
    try {
      parse_policy(bad);
      FAIL("accepted " << std::string(bad));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownPolicy);
      CHECK(std::string(e.what()).find("oco") != std::string::npos);
    }
  }
}

TEST_CASE("every policy output is feasible on random histories") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  const std::vector<PolicySpec> specs{OcoParams{}, OcoParams{5.0, StepSchedule::InverseLinear}, MaxwinParams{},
                                      MaxwinParams{0.4}, AvgpredParams{3}, AvgpredParams{100}};
  for (int trial = 0; trial < 100; ++trial) {
    auto c = preset("paper-base");
    c.guards.assign(10, 0.005 * static_cast<double>(rng() % 3));
    for (const auto& spec : specs) {
      Policy policy(spec, c);
      for (int t = 0; t < 30; ++t) {
        const auto x = policy.decide();
        REQUIRE(is_feasible(x, capacity(c)));
        // AVGPRED keeps a running sum, so it only matches to rounding.
        const auto direct = policy_decide(policy.state(), spec, c);
        for (std::size_t i = 0; i < 10; ++i) CHECK(x[i] == doctest::Approx(direct[i]).epsilon(1e-12));
        DemandVector b(10), r(10);
        for (std::size_t i = 0; i < 10; ++i) {
          b[i] = u(rng);
          r[i] = b[i] * 0.5;
        }
        policy.observe(x, b, r);
      }
    }
  }
}

TEST_CASE("incremental AVGPRED agrees with the direct average") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  const auto c = preset("paper-base");
  Policy policy(AvgpredParams{7}, c);
  for (int t = 0; t < 200; ++t) {
    const auto fast = policy.decide();
    const auto direct = t == 0 ? uniform_allocation(c) : avgpred_decide(policy.state().demand_history, 7, 1.0);
    for (std::size_t i = 0; i < 10; ++i) CHECK(fast[i] == doctest::Approx(direct[i]).epsilon(1e-12));
    DemandVector b(10);
    for (double& v : b) v = u(rng);
    policy.observe(fast, b, b);
  }
  CHECK(policy.state().step_index == 200);
  CHECK(policy.state().demand_history.size() == 200);
}

TEST_CASE("OCO is deterministic") {
  const auto c = preset("paper-base");
  DemandVector b(10);
  for (std::size_t i = 0; i < 10; ++i) b[i] = 0.03 * static_cast<double>(i);
  const auto s = state_after(uniform_allocation(c), b);
  const auto x1 = oco_step(s, OcoParams{}, c);
  const auto x2 = oco_step(s, OcoParams{}, c);
  CHECK(x1 == x2);
}

TEST_CASE("OCO converges on stationary demand") {
  // Optimum of 1.2 log(x0+1) + log(x1+1) + 0.8 log(x2+1) with sum 1 is
  // x_i + 1 = w_i / 0.75; every x_i stays below its demand.
  const auto c = flat_config(3);
  const DemandVector b{1.2, 1.0, 0.8};
  const std::vector<DemandVector> one{b};
  const auto best = solve_hindsight(one, c, {1e-14});
  CHECK(best.x[0] == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(best.x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(best.x[2] == doctest::Approx(1.0 / 15.0).epsilon(1e-9));

  const auto inst = ObjectiveInstance::make(b, c);
  Policy policy(OcoParams{0.1, StepSchedule::InverseSqrt}, c);
  double previous_gap = 0.0;
  bool monotone = true;
  for (std::size_t t = 0; t < 10'000; ++t) {
    const auto x = policy.decide();
    const double gap = loss(x, inst) - best.loss;
    CHECK(gap >= -1e-12);
    if (t > 100 && gap > previous_gap + 1e-15) monotone = false;
    previous_gap = gap;
    policy.observe(x, b, b);
  }
  CHECK(monotone);
  CHECK(previous_gap < 1e-3);
}
