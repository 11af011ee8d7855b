#pragma once

#include <vector>

#include "pon/types.hpp"

namespace pon {

/// One cycle's utility: demand b_t, the matching effective weights, and the
/// window capacity the allocation must respect.
struct ObjectiveInstance {
  DemandVector demand;
  EffectiveWeights weights;
  double cap = 0.0;

  static ObjectiveInstance make(const DemandVector& demand, const PonConfig& config);
};

inline constexpr double kFeasibilityTol = 1e-9;

/// sum_i w_i * min(log(x_i + 1), log(b_i + 1)). Throws InfeasiblePoint if x
/// leaves the capped simplex by more than kFeasibilityTol.
double utility(const AllocationVector& x, const ObjectiveInstance& inst);

/// Convex loss, the negated utility.
double loss(const AllocationVector& x, const ObjectiveInstance& inst);

/// Subgradient of loss. Component i is -w_i/(x_i+1) below the buffer-emptying
/// point and 0 at or above it.
std::vector<double> subgradient(const AllocationVector& x, const ObjectiveInstance& inst);

/// Tests the weighted proportional-fairness condition
///   sum_i w_i (x_i - x*_i) / x*_i <= tol
/// for every candidate. x* must be strictly positive.
bool check_proportional_fairness(const AllocationVector& x_star, const EffectiveWeights& w,
                                 const std::vector<AllocationVector>& candidates,
                                 double tol = 1e-9);

}  // namespace pon
