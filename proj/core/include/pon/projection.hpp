#pragma once

#include <span>

#include "pon/types.hpp"

namespace pon {

/// Euclidean projection onto {x >= 0, sum(x) <= cap}.
AllocationVector project_capped_simplex(std::span<const double> y, double cap);

/// Scales y down onto the capacity face when it overflows; keeps every
/// pairwise ratio. y must be non-negative.
AllocationVector radial_rescale(std::span<const double> y, double cap);

}  // namespace pon
