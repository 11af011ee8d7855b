#include "pon/hindsight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pon/objective.hpp"

namespace pon {

double summed_loss(const AllocationVector& x, std::span<const DemandVector> demands, const PonConfig& config) {
  double total = 0.0;
  for (const auto& b : demands) total += loss(x, ObjectiveInstance::make(b, config));
  return total;
}

namespace {

void require_demands(std::span<const DemandVector> demands, const PonConfig& config) {
  if (demands.empty()) throw Error(ErrorCode::InvalidParameter, "hindsight needs at least one cycle of demand");
  for (const auto& b : demands) {
    if (b.size() != config.num_onus) throw Error(ErrorCode::InvalidParameter, "demand vector has wrong size");
    for (double v : b)
      if (!(v >= 0.0)) throw Error(ErrorCode::InvalidParameter, "demand must be non-negative");
  }
}

// One ONU's summed utility phi(x) = sum_t w_t log(1 + min(x, b_t)). Its right
// derivative is W(x)/(x+1) with W(x) = sum of w_t over cycles with b_t > x,
// a step function that drops at every distinct demand value.
class OnuUtility {
 public:
  OnuUtility(std::vector<std::pair<double, double>> demand_weight) {
    std::sort(demand_weight.begin(), demand_weight.end());
    double total = 0.0;
    for (const auto& [b, w] : demand_weight) total += w;
    lower_.push_back(0.0);
    mass_.push_back(total);
    for (std::size_t k = 0; k < demand_weight.size();) {
      const double b = demand_weight[k].first;
      double dropped = 0.0;
      for (; k < demand_weight.size() && demand_weight[k].first == b; ++k) dropped += demand_weight[k].second;
      if (b <= 0.0) continue;
      total -= dropped;
      lower_.push_back(b);
      mass_.push_back(std::max(total, 0.0));
    }
  }

  double max_demand() const { return lower_.back(); }
  double marginal_at_zero() const { return mass_.front(); }

  /// Smallest x >= 0 at which the marginal utility falls to `price` (> 0).
  double window_at(double price) const {
    for (std::size_t k = 0; k < lower_.size(); ++k) {
      if (mass_[k] <= 0.0) return lower_[k];
      const double x = mass_[k] / price - 1.0;
      if (x <= lower_[k]) return lower_[k];
      if (k + 1 == lower_.size() || x < lower_[k + 1]) return x;
    }
    return lower_.back();
  }

 private:
  std::vector<double> lower_;  // start of each piece
  std::vector<double> mass_;   // W on that piece
};

}  // namespace

HindsightResult solve_hindsight(std::span<const DemandVector> demands, const PonConfig& config,
                                const HindsightOptions& options) {
  require_demands(demands, config);
  const std::size_t n = config.num_onus;
  const double cap = capacity(config);

  std::vector<OnuUtility> onus;
  onus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, double>> dw;
    dw.reserve(demands.size());
    const double p = config.weight_of(i);
    for (const auto& b : demands)
      if (b[i] > 0.0) dw.emplace_back(b[i], b[i] * p);
    onus.emplace_back(std::move(dw));
  }

  HindsightResult result;
  result.x = AllocationVector(n);

  // Unconstrained: every ONU takes its largest demand, the smallest maximizer.
  double full = 0.0;
  for (const auto& u : onus) full += u.max_demand();
  if (full <= cap) {
    for (std::size_t i = 0; i < n; ++i) result.x[i] = onus[i].max_demand();
    result.loss = summed_loss(result.x, demands, config);
    return result;
  }

  auto allocate = [&](double price) {
    AllocationVector x(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += (x[i] = onus[i].window_at(price));
    return std::pair{x, sum};
  };

  // sum(window_at(price)) is continuous and non-increasing in price.
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& u : onus) hi = std::max(hi, u.marginal_at_zero());
  AllocationVector best = allocate(hi).first;
  std::size_t it = 0;
  bool converged = false;
  for (; it < options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) {
      converged = true;
      break;
    }
    auto [x, sum] = allocate(mid);
    if (sum > cap) {
      lo = mid;
    } else {
      hi = mid;
      best = std::move(x);
      if (cap - sum <= options.tol) {
        converged = true;
        break;
      }
    }
  }
  if (!converged)
    throw Error(ErrorCode::NoConvergence, "hindsight solver hit its iteration cap before the capacity "
                                          "constraint was met within tolerance");
  result.x = std::move(best);
  result.iterations = it;
  result.loss = summed_loss(result.x, demands, config);
  return result;
}

AllocationVector hindsight_optimum(std::span<const DemandVector> demands, const PonConfig& config, double tol) {
  HindsightOptions options;
  options.tol = tol;
  return solve_hindsight(demands, config, options).x;
}

AllocationVector brute_force_optimum(std::span<const DemandVector> demands, const PonConfig& config,
                                     double resolution) {
  const std::size_t n = config.num_onus;
  if (n > 3) throw Error(ErrorCode::DimensionTooLarge, "grid search supports at most 3 ONUs");
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidParameter, "resolution must be positive");
  require_demands(demands, config);
  const double cap = capacity(config);
  const auto steps = static_cast<std::size_t>(std::floor(cap / resolution + 1e-9));

  // Utility of each ONU at every grid value, evaluated term by term.
  std::vector<std::vector<double>> table(n, std::vector<double>(steps + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double p = config.weight_of(i);
    for (std::size_t k = 0; k <= steps; ++k) {
      const double x = static_cast<double>(k) * resolution;
      double u = 0.0;
      for (const auto& b : demands) u += b[i] * p * std::min(std::log(x + 1.0), std::log(b[i] + 1.0));
      table[i][k] = u;
    }
  }

  AllocationVector best(n);
  if (n == 1) {
    std::size_t arg = 0;
    for (std::size_t k = 1; k <= steps; ++k)
      if (table[0][k] > table[0][arg]) arg = k;
    best[0] = static_cast<double>(arg) * resolution;
    return best;
  }

  // For the last coordinate only the best value up to each budget matters:
  // prefix_arg[m] is the first k <= m attaining max_{j<=m} table[last][j].
  const auto& last = table[n - 1];
  std::vector<std::size_t> prefix_arg(steps + 1, 0);
  for (std::size_t m = 1; m <= steps; ++m)
    prefix_arg[m] = last[m] > last[prefix_arg[m - 1]] ? m : prefix_arg[m - 1];

  double best_value = -std::numeric_limits<double>::infinity();
  std::size_t best_k[3] = {0, 0, 0};
  if (n == 2) {
    for (std::size_t k0 = 0; k0 <= steps; ++k0) {
      const std::size_t k1 = prefix_arg[steps - k0];
      const double v = table[0][k0] + last[k1];
      if (v > best_value) {
        best_value = v;
        best_k[0] = k0;
        best_k[1] = k1;
      }
    }
  } else {
    for (std::size_t k0 = 0; k0 <= steps; ++k0)
      for (std::size_t k1 = 0; k0 + k1 <= steps; ++k1) {
        const std::size_t k2 = prefix_arg[steps - k0 - k1];
        const double v = table[0][k0] + table[1][k1] + last[k2];
        if (v > best_value) {
          best_value = v;
          best_k[0] = k0;
          best_k[1] = k1;
          best_k[2] = k2;
        }
      }
  }
  for (std::size_t i = 0; i < n; ++i) best[i] = static_cast<double>(best_k[i]) * resolution;
  return best;
}

}  // namespace pon
