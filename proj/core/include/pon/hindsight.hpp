#pragma once

#include <cstddef>
#include <span>

#include "pon/types.hpp"

namespace pon {

/// sum_t loss_t(x) over a demand sequence, each cycle weighted by the config's
/// slice weights.
double summed_loss(const AllocationVector& x, std::span<const DemandVector> demands, const PonConfig& config);

struct HindsightOptions {
  /// Allowed |sum(x) - cap| when the capacity constraint is active.
  double tol = 1e-9;
  std::size_t max_iterations = 1'000'000;
};

struct HindsightResult {
  AllocationVector x;
  double loss = 0.0;
  std::size_t iterations = 0;
};

/// Best fixed allocation for a demand sequence: argmin over the capped simplex
/// of the summed loss. The summed loss is separable across ONUs, so the
/// solver bisects on the capacity multiplier and reads each ONU's optimal
/// window off its piecewise-logarithmic marginal utility. Throws NoConvergence
/// when max_iterations elapse first.
HindsightResult solve_hindsight(std::span<const DemandVector> demands, const PonConfig& config,
                                const HindsightOptions& options = {});

AllocationVector hindsight_optimum(std::span<const DemandVector> demands, const PonConfig& config,
                                   double tol = 1e-9);

/// Exhaustive search over the grid {k * resolution} inside the feasible set,
/// for N <= 3. Ties resolve to the lexicographically smallest grid point.
AllocationVector brute_force_optimum(std::span<const DemandVector> demands, const PonConfig& config,
                                     double resolution);

}  // namespace pon
