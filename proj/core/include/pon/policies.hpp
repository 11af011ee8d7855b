#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pon/objective.hpp"
#include "pon/types.hpp"

namespace pon {

enum class StepSchedule { InverseSqrt, InverseLinear };

struct OcoParams {
  double eta0 = 1.0;
  StepSchedule schedule = StepSchedule::InverseSqrt;
};

struct MaxwinParams {
  double max_window = 0.2;
};

struct AvgpredParams {
  std::size_t horizon = 100;
};

using PolicySpec = std::variant<OcoParams, MaxwinParams, AvgpredParams>;

/// Parses "oco", "maxwin[:m]" or "avgpred[:h]". Throws UnknownPolicy.
PolicySpec parse_policy(std::string_view text);
std::string policy_name(const PolicySpec& spec);

/// What a policy has seen so far. Histories are aligned by cycle and
/// step_index always equals their length.
struct PolicyState {
  AllocationVector previous_allocation;
  std::vector<DemandVector> demand_history;
  std::vector<DemandVector> report_history;
  std::size_t step_index = 0;
};

/// Step size used for the update that follows `t` observed cycles (t >= 1).
double step_size(const OcoParams& params, std::size_t t);

/// One projected-gradient move: Pi_X(x - eta * grad loss(x)).
AllocationVector pgd_update(const AllocationVector& x, const ObjectiveInstance& inst, double eta);

/// Online allocation: a projected-gradient step on the loss of the last observed
/// cycle. Returns the uniform split before any observation.
AllocationVector oco_step(const PolicyState& state, const OcoParams& params, const PonConfig& config);

/// Grants min(m, reported backlog) per ONU, rescaled radially onto the capacity.
AllocationVector maxwin_decide(const DemandVector& reports, double max_window, double cap);

/// Grants the mean actual demand over the last h cycles (or fewer, if fewer
/// exist), rescaled radially onto the capacity. Zero vector on empty history.
AllocationVector avgpred_decide(std::span<const DemandVector> history, std::size_t horizon, double cap);

/// Dispatches to the concrete policy. The first cycle of every policy uses the
/// uniform split.
AllocationVector policy_decide(const PolicyState& state, const PolicySpec& spec, const PonConfig& config);

/// A policy plus its state, as driven by the simulator. AVGPRED keeps a running
/// window sum so that long horizons stay O(N) per cycle.
class Policy {
 public:
  Policy(PolicySpec spec, const PonConfig& config);

  AllocationVector decide() const;
  void observe(const AllocationVector& allocation, const DemandVector& actual, const DemandVector& report);

  const PolicyState& state() const noexcept { return state_; }
  const PolicySpec& spec() const noexcept { return spec_; }
  std::string name() const { return policy_name(spec_); }

 private:
  PolicySpec spec_;
  PonConfig config_;
  PolicyState state_;
  std::vector<double> window_sum_;
};

}  // namespace pon
