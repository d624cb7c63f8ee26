#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace bonusruin {

/// Result record shared by every ruin-probability estimator.
struct RuinEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t n_paths = 0;
  std::uint64_t n_ruined = 0;
  std::uint64_t seed = 0;
  std::optional<double> horizon;  ///< empty for infinite-horizon (IS) estimators
  bool low_information = false;   ///< no ruined paths observed
};

/// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> values);

/// Estimate from per-path weights (0 for survival); mean, SE = sd / sqrt(n), 95% CI.
RuinEstimate estimate_from_weights(std::span<const double> weights, std::uint64_t seed,
                                   std::optional<double> horizon);

/// Estimate from a ruin count; SE = sqrt(p (1 - p) / n).
RuinEstimate estimate_from_count(std::uint64_t n_ruined, std::uint64_t n_paths, std::uint64_t seed,
                                 std::optional<double> horizon);

}  // namespace bonusruin
