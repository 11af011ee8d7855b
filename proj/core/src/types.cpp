#include "pon/types.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace pon {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CapacityExhausted: return "CapacityExhausted";
    case ErrorCode::SlicePartitionBroken: return "SlicePartitionBroken";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorCode::ZeroReferenceComponent: return "ZeroReferenceComponent";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NoCompletedTraffic: return "NoCompletedTraffic";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::UnknownPolicy: return "UnknownPolicy";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream os;
  os << "invalid PON config:";
  for (const auto& issue : issues) os << "\n  " << to_string(issue.code) << ": " << issue.message;
  return os.str();
}

ErrorCode first_code(const std::vector<ConfigIssue>& issues) {
  return issues.empty() ? ErrorCode::InvalidParameter : issues.front().code;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(first_code(issues), join_issues(issues)), issues_(std::move(issues)) {}

std::vector<ConfigIssue> check_config(const PonConfig& config) {
  std::vector<ConfigIssue> issues;
  auto add = [&](ErrorCode code, std::string msg) { issues.push_back({code, std::move(msg)}); };
  const std::size_t n = config.num_onus;

  if (n == 0) add(ErrorCode::InvalidParameter, "num_onus must be positive");
  if (!(config.cycle_length > 0.0) || !std::isfinite(config.cycle_length))
    add(ErrorCode::InvalidParameter, "cycle_length must be a positive finite number");
  if (!(config.unit_time > 0.0) || !std::isfinite(config.unit_time))
    add(ErrorCode::InvalidParameter, "unit_time must be positive");
  if (!(config.delta_t >= 0.0) || !std::isfinite(config.delta_t))
    add(ErrorCode::InvalidParameter, "delta_t must be non-negative");
  if (config.delta_t > config.cycle_length)
    add(ErrorCode::InvalidParameter, "delta_t must not exceed the cycle length");

  if (config.guards.size() != n) {
    add(ErrorCode::InvalidParameter, "guards has " + std::to_string(config.guards.size()) +
                                         " entries, expected " + std::to_string(n));
  } else {
    bool negative = false;
    for (double d : config.guards) negative |= !(d >= 0.0);
    if (negative) add(ErrorCode::InvalidParameter, "guard windows must be non-negative");
    const double guard_sum = std::accumulate(config.guards.begin(), config.guards.end(), 0.0);
    if (!(config.cycle_length - guard_sum > 0.0))
      add(ErrorCode::CapacityExhausted, "sum of guards (" + std::to_string(guard_sum) +
                                            ") leaves no capacity in a cycle of length " +
                                            std::to_string(config.cycle_length));
  }

  if (config.lambdas.size() != n) {
    add(ErrorCode::InvalidParameter, "lambdas has " + std::to_string(config.lambdas.size()) +
                                         " entries, expected " + std::to_string(n));
  } else {
    for (std::size_t i = 0; i < n; ++i)
      if (!(config.lambdas[i] >= 0.0) || !std::isfinite(config.lambdas[i]))
        add(ErrorCode::InvalidParameter, "lambda of ONU " + std::to_string(i) + " must be >= 0");
  }

  if (config.slice_of.size() != n) {
    add(ErrorCode::SlicePartitionBroken, "slice_of assigns " +
                                             std::to_string(config.slice_of.size()) +
                                             " ONUs, expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < config.slice_of.size(); ++i) {
    if (config.slice_of[i] >= config.slice_weights.size())
      add(ErrorCode::SlicePartitionBroken, "ONU " + std::to_string(i) + " refers to slice " +
                                               std::to_string(config.slice_of[i]) +
                                               " which has no weight");
  }
  for (std::size_t j = 0; j < config.slice_weights.size(); ++j) {
    const double p = config.slice_weights[j];
    if (!(p > 0.0) || !std::isfinite(p))
      add(ErrorCode::NonPositiveWeight, "slice " + std::to_string(j) + " has weight " +
                                            std::to_string(p) + "; weights must be positive");
  }
  return issues;
}

PonConfig validate_config(PonConfig config) {
  auto issues = check_config(config);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return config;
}

double capacity(const PonConfig& config) {
  return config.cycle_length - std::accumulate(config.guards.begin(), config.guards.end(), 0.0);
}

EffectiveWeights effective_weights(const DemandVector& demand, const PonConfig& config) {
  EffectiveWeights w(demand.size());
  for (std::size_t i = 0; i < demand.size(); ++i) w[i] = demand[i] * config.weight_of(i);
  return w;
}

AllocationVector uniform_allocation(const PonConfig& config) {
  return AllocationVector(config.num_onus, capacity(config) / static_cast<double>(config.num_onus));
}

bool is_feasible(const AllocationVector& x, double cap, double tol) {
  double sum = 0.0;
  for (double v : x) {
    if (!(v >= 0.0)) return false;
    sum += v;
  }
  return sum <= cap + tol;
}

}  // namespace pon
