#include "pon/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pon {

ObjectiveInstance ObjectiveInstance::make(const DemandVector& demand, const PonConfig& config) {
  return {demand, effective_weights(demand, config), capacity(config)};
}

namespace {

void require_feasible(const AllocationVector& x, const ObjectiveInstance& inst) {
  if (x.size() != inst.demand.size())
    throw Error(ErrorCode::InvalidParameter, "allocation and demand sizes differ");
  if (!is_feasible(x, inst.cap, kFeasibilityTol))
    throw Error(ErrorCode::InfeasiblePoint, "allocation is outside the feasible set");
}

}  // namespace

double utility(const AllocationVector& x, const ObjectiveInstance& inst) {
  require_feasible(x, inst);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = inst.weights[i];
    if (w == 0.0) continue;
    total += w * std::log1p(std::min(x[i], inst.demand[i]));
  }
  return total;
}

double loss(const AllocationVector& x, const ObjectiveInstance& inst) { return -utility(x, inst); }

std::vector<double> subgradient(const AllocationVector& x, const ObjectiveInstance& inst) {
  std::vector<double> g(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < inst.demand[i]) g[i] = -inst.weights[i] / (x[i] + 1.0);
  return g;
}

bool check_proportional_fairness(const AllocationVector& x_star, const EffectiveWeights& w,
                                 const std::vector<AllocationVector>& candidates, double tol) {
  for (std::size_t i = 0; i < x_star.size(); ++i)
    if (!(x_star[i] > 0.0))
      throw Error(ErrorCode::ZeroReferenceComponent,
                  "reference allocation component " + std::to_string(i) + " is not positive");
  for (const auto& x : candidates) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * (x[i] - x_star[i]) / x_star[i];
    if (sum > tol) return false;
  }
  return true;
}

}  // namespace pon
