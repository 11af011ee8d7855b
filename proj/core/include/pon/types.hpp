#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pon {

/// Failure categories raised by the library. Every thrown pon::Error carries one.
enum class ErrorCode {
  CapacityExhausted,
  SlicePartitionBroken,
  NonPositiveWeight,
  InvalidParameter,
  InfeasiblePoint,
  ZeroReferenceComponent,
  NoConvergence,
  DimensionTooLarge,
  NoCompletedTraffic,
  IndexOutOfRange,
  UnknownPreset,
  UnknownPolicy,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A vector of per-ONU reals tagged with its meaning, so that an allocation
/// cannot be passed where a demand is expected.
template <class Tag>
class OnuVector {
 public:
  OnuVector() = default;
  explicit OnuVector(std::size_t n, double fill = 0.0) : values_(n, fill) {}
  explicit OnuVector(std::vector<double> values) : values_(std::move(values)) {}
  OnuVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  std::span<const double> view() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  friend bool operator==(const OnuVector&, const OnuVector&) = default;

 private:
  std::vector<double> values_;
};

struct AllocationTag {};
struct DemandTag {};
struct WeightTag {};

/// Window size granted to each ONU for one cycle, in cycle-time units.
using AllocationVector = OnuVector<AllocationTag>;
/// Traffic queued at each ONU when its window opens, in cycle-time units.
using DemandVector = OnuVector<DemandTag>;
/// Per-ONU utility weight: queued demand times the weight of the ONU's slice.
using EffectiveWeights = OnuVector<WeightTag>;

struct PonConfig {
  std::size_t num_onus = 0;
  double cycle_length = 1.0;
  std::vector<double> guards;
  /// slice_of[i] is the slice index of ONU i.
  std::vector<std::size_t> slice_of;
  std::vector<double> slice_weights;
  /// Mean packet arrivals per ONU per cycle.
  std::vector<double> lambdas;
  /// Transmission time of one packet.
  double unit_time = 0.01;
  /// Lag during which traffic arrives that no REPORT snapshot has seen.
  double delta_t = 0.0;

  double weight_of(std::size_t onu) const { return slice_weights.at(slice_of.at(onu)); }
};

struct ConfigIssue {
  ErrorCode code;
  std::string message;
};

/// Empty when the config is valid.
std::vector<ConfigIssue> check_config(const PonConfig& config);

/// Returns the config unchanged if valid; otherwise throws ConfigError listing
/// every violated invariant.
PonConfig validate_config(PonConfig config);

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);

  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Usable window time per cycle: C minus the sum of guard windows.
double capacity(const PonConfig& config);

EffectiveWeights effective_weights(const DemandVector& demand, const PonConfig& config);

/// Uniform split of the capacity; the starting point for every policy.
AllocationVector uniform_allocation(const PonConfig& config);

/// True when x >= 0 componentwise and sum(x) <= cap + tol.
bool is_feasible(const AllocationVector& x, double cap, double tol = 1e-9);

}  // namespace pon
