#include "pon/projection.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace pon {

AllocationVector project_capped_simplex(std::span<const double> y, double cap) {
  if (!(cap > 0.0)) throw Error(ErrorCode::InvalidParameter, "projection capacity must be positive");
  AllocationVector out(y.size());
  double clipped_sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = std::max(y[i], 0.0);
    clipped_sum += out[i];
  }
  if (clipped_sum <= cap) return out;

  // Onto the face sum(x) = cap: find tau with sum(max(y - tau, 0)) = cap.
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    prefix += sorted[k];
    const double candidate = (prefix - cap) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
      tau = candidate;
      break;
    }
  }
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::max(y[i] - tau, 0.0);
  return out;
}

AllocationVector radial_rescale(std::span<const double> y, double cap) {
  if (!(cap > 0.0)) throw Error(ErrorCode::InvalidParameter, "rescale capacity must be positive");
  AllocationVector out(std::vector<double>(y.begin(), y.end()));
  double sum = 0.0;
  for (double v : y) {
    if (v < 0.0) throw Error(ErrorCode::InvalidParameter, "radial_rescale needs a non-negative vector");
    sum += v;
  }
  if (sum <= cap) return out;
  const double scale = cap / sum;
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace pon
