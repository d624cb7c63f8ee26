#pragma once

// Exponential change of measure at the adjustment coefficient and the two
// importance-sampling estimators built on it.
//
// Under the tilt the embedded chain moves with P_ij = f_ij[kappa] v_j / v_i,
// claims are Exp(beta - kappa) and a gap from state i is Exp(lambda_i + kappa)
// truncated to (0, xi] or (xi, inf) according to the destination state.

#include <cstdint>

#include "bonusruin/analytics.hpp"
#include "bonusruin/estimate.hpp"
#include "bonusruin/rng.hpp"

namespace bonusruin {

struct TiltedModel {
  double theta = 0.0;
  double xi = 0.0;
  double claim_rate = 0.0;       ///< beta - theta
  double short_gap_rate = 0.0;   ///< lambda1 + theta
  double long_gap_rate = 0.0;    ///< lambda2 + theta
  double q = 0.0, p = 0.0;              ///< row of the short-gap state
  double q_tilde = 0.0, p_tilde = 0.0;  ///< row of the long-gap state
  EigenPair eigen;

  double gap_rate(StateLabel from) const noexcept {
    return from == StateLabel::short_gap ? short_gap_rate : long_gap_rate;
  }
  /// Probability of moving to the short-gap state.
  double to_short(StateLabel from) const noexcept {
    return from == StateLabel::short_gap ? q : q_tilde;
  }
};

TiltedModel build_tilted_model(const ModelParams& params, double theta);

/// Exp(rate) restricted to (0, xi] (below) or (xi, inf) (above), by inversion of one uniform.
double sample_tilted_gap(double rate, double xi, Side side, PathRng& rng);

struct RuinSample {
  double weight = 0.0;
  double overshoot = 0.0;
  std::uint64_t steps = 0;
  StateLabel terminal_state = StateLabel::long_gap;
};

inline constexpr std::uint64_t kDefaultStepCap = 10'000'000;

enum class RuinCheck {
  every_claim,         ///< true ruin: first claim with S > x
  regeneration_only,   ///< macro ruin: first claim with S > x that closes a long gap
};

/// One path under the tilted model from the long-gap state until the check fires.
/// Weight e^{-kappa S_T} v2 / v_{J_T}. Throws diverged_path past the step cap.
RuinSample sample_tilted_path(const TiltedModel& model, double x, RuinCheck check, PathRng& rng,
                              std::uint64_t step_cap = kDefaultStepCap);

struct ImportanceOptions {
  unsigned threads = 0;
  std::uint64_t step_cap = kDefaultStepCap;
};

/// Ruin checked only at regeneration epochs: a lower bound psi*(x) <= psi(x).
RuinEstimate macro_is_ruin(const ModelParams& params, double x, std::uint64_t n, std::uint64_t seed,
                           const ImportanceOptions& options = {});

/// Unbiased estimator of psi(x) with ruin checked at every claim.
RuinEstimate map_is_ruin(const ModelParams& params, double x, std::uint64_t n, std::uint64_t seed,
                         const ImportanceOptions& options = {});

/// Same estimators on a prebuilt tilt; the tilt must sit at the adjustment coefficient.
RuinEstimate macro_is_ruin(const TiltedModel& model, double x, std::uint64_t n, std::uint64_t seed,
                           const ImportanceOptions& options = {});
RuinEstimate map_is_ruin(const TiltedModel& model, double x, std::uint64_t n, std::uint64_t seed,
                         const ImportanceOptions& options = {});

}  // namespace bonusruin
