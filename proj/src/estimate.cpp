#include "bonusruin/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bonusruin/errors.hpp"

namespace bonusruin {

namespace {

constexpr double kZ95 = 1.959963984540054;

void fill_interval(RuinEstimate& r) {
  r.ci_lo = std::max(0.0, r.estimate - kZ95 * r.std_error);
  r.ci_hi = std::min(1.0, r.estimate + kZ95 * r.std_error);
  r.ci_lo = std::min(r.ci_lo, r.estimate);
  r.ci_hi = std::max(r.ci_hi, r.estimate);
}

}  // namespace

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

RuinEstimate estimate_from_weights(std::span<const double> weights, std::uint64_t seed,
                                   std::optional<double> horizon) {
  if (weights.empty()) fail(ErrorKind::invalid_parameter, "estimator needs at least one path");
  RuinEstimate r;
  r.n_paths = weights.size();
  r.seed = seed;
  r.horizon = horizon;
  const double n = static_cast<double>(weights.size());
  r.estimate = compensated_sum(weights) / n;
  std::vector<double> squares(weights.size());
  std::transform(weights.begin(), weights.end(), squares.begin(), [&](double w) {
    const double d = w - r.estimate;
    return d * d;
  });
  r.n_ruined = static_cast<std::uint64_t>(
      std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
  const double var = weights.size() > 1 ? compensated_sum(squares) / (n - 1.0) : 0.0;
  r.std_error = std::sqrt(var / n);
  r.low_information = r.n_ruined == 0;
  r.estimate = std::clamp(r.estimate, 0.0, 1.0);
  fill_interval(r);
  return r;
}

RuinEstimate estimate_from_count(std::uint64_t n_ruined, std::uint64_t n_paths, std::uint64_t seed,
                                 std::optional<double> horizon) {
  if (n_paths == 0) fail(ErrorKind::invalid_parameter, "estimator needs at least one path");
  RuinEstimate r;
  r.n_paths = n_paths;
  r.n_ruined = n_ruined;
  r.seed = seed;
  r.horizon = horizon;
  const double n = static_cast<double>(n_paths);
  r.estimate = static_cast<double>(n_ruined) / n;
  r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
  r.low_information = n_ruined == 0;
  fill_interval(r);
  return r;
}

}  // namespace bonusruin
