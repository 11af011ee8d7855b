#include "pon/policies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "pon/projection.hpp"

namespace pon {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void unknown_policy(std::string_view text) {
  throw Error(ErrorCode::UnknownPolicy, "unknown policy '" + std::string(text) +
                                            "'; valid names: oco[:eta0], oco-lin[:eta0], maxwin[:m], avgpred[:h]");
}

}  // namespace

PolicySpec parse_policy(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (colon != std::string_view::npos && arg.empty()) unknown_policy(text);
  auto number = [&](auto& out) {
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), out);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) unknown_policy(text);
  };
  if (head == "oco" || head == "oco-lin") {
    OcoParams p;
    if (head == "oco-lin") p.schedule = StepSchedule::InverseLinear;
    if (colon != std::string_view::npos) number(p.eta0);
    if (!(p.eta0 > 0.0)) unknown_policy(text);
    return p;
  }
  if (head == "maxwin") {
    MaxwinParams p;
    if (colon != std::string_view::npos) number(p.max_window);
    if (!(p.max_window > 0.0)) unknown_policy(text);
    return p;
  }
  if (head == "avgpred") {
    AvgpredParams p;
    if (colon != std::string_view::npos) number(p.horizon);
    if (p.horizon == 0) unknown_policy(text);
    return p;
  }
  unknown_policy(text);
}

std::string policy_name(const PolicySpec& spec) {
  return std::visit(Overloaded{
                        [](const OcoParams& p) {
                          std::string name = p.schedule == StepSchedule::InverseSqrt ? "oco" : "oco-lin";
                          if (p.eta0 != OcoParams{}.eta0) {
                            char buf[48];
                            std::snprintf(buf, sizeof buf, ":%g", p.eta0);
                            name += buf;
                          }
                          return name;
                        },
                        [](const MaxwinParams& p) {
                          char buf[48];
                          std::snprintf(buf, sizeof buf, "maxwin:%g", p.max_window);
                          return std::string(buf);
                        },
                        [](const AvgpredParams& p) { return "avgpred:" + std::to_string(p.horizon); },
                    },
                    spec);
}

double step_size(const OcoParams& params, std::size_t t) {
  const double n = static_cast<double>(std::max<std::size_t>(t, 1));
  return params.schedule == StepSchedule::InverseSqrt ? params.eta0 / std::sqrt(n) : params.eta0 / n;
}

AllocationVector pgd_update(const AllocationVector& x, const ObjectiveInstance& inst, double eta) {
  const auto grad = subgradient(x, inst);
  std::vector<double> moved(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) moved[i] = x[i] - eta * grad[i];
  return project_capped_simplex(moved, inst.cap);
}

AllocationVector oco_step(const PolicyState& state, const OcoParams& params, const PonConfig& config) {
  if (state.demand_history.empty()) return uniform_allocation(config);
  const auto inst = ObjectiveInstance::make(state.demand_history.back(), config);
  return pgd_update(state.previous_allocation, inst, step_size(params, state.step_index));
}

AllocationVector maxwin_decide(const DemandVector& reports, double max_window, double cap) {
  std::vector<double> raw(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) raw[i] = std::min(max_window, reports[i]);
  return radial_rescale(raw, cap);
}

AllocationVector avgpred_decide(std::span<const DemandVector> history, std::size_t horizon, double cap) {
  if (history.empty()) return {};
  const std::size_t n = history.front().size();
  const std::size_t used = std::min(horizon, history.size());
  std::vector<double> raw(n, 0.0);
  for (std::size_t k = history.size() - used; k < history.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) raw[i] += history[k][i];
  for (double& v : raw) v /= static_cast<double>(used);
  return radial_rescale(raw, cap);
}

AllocationVector policy_decide(const PolicyState& state, const PolicySpec& spec, const PonConfig& config) {
  if (state.step_index == 0) return uniform_allocation(config);
  const double cap = capacity(config);
  return std::visit(Overloaded{
                        [&](const OcoParams& p) { return oco_step(state, p, config); },
                        [&](const MaxwinParams& p) {
                          return maxwin_decide(state.report_history.back(), p.max_window, cap);
                        },
                        [&](const AvgpredParams& p) {
                          return avgpred_decide(state.demand_history, p.horizon, cap);
                        },
                    },
                    spec);
}

Policy::Policy(PolicySpec spec, const PonConfig& config)
    : spec_(spec), config_(config), window_sum_(config.num_onus, 0.0) {
  state_.previous_allocation = uniform_allocation(config_);
}

AllocationVector Policy::decide() const {
  if (const auto* p = std::get_if<AvgpredParams>(&spec_); p && state_.step_index > 0) {
    const double used = static_cast<double>(std::min(p->horizon, state_.demand_history.size()));
    std::vector<double> raw(window_sum_.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = std::max(window_sum_[i] / used, 0.0);
    return radial_rescale(raw, capacity(config_));
  }
  return policy_decide(state_, spec_, config_);
}

void Policy::observe(const AllocationVector& allocation, const DemandVector& actual, const DemandVector& report) {
  state_.previous_allocation = allocation;
  state_.demand_history.push_back(actual);
  state_.report_history.push_back(report);
  ++state_.step_index;
  if (const auto* p = std::get_if<AvgpredParams>(&spec_)) {
    for (std::size_t i = 0; i < window_sum_.size(); ++i) window_sum_[i] += actual[i];
    if (state_.demand_history.size() > p->horizon) {
      const auto& dropped = state_.demand_history[state_.demand_history.size() - 1 - p->horizon];
      for (std::size_t i = 0; i < window_sum_.size(); ++i) window_sum_[i] -= dropped[i];
    }
  }
}

}  // namespace pon
