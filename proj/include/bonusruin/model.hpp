#pragma once

// Parameterization of the two-level bonus risk process and its closed-form
// building blocks.
//
// Inter-claim gaps alternate between two exponential laws: after a gap of
// length <= xi the next gap is drawn from Exp(lambda1) (short-gap state),
// after a gap > xi it is drawn from Exp(lambda2) (long-gap state). Premium
// income accrues at rate 1, so the claim surplus over one gap is Y - gap.

#include <utility>
#include <variant>

namespace bonusruin {

struct ExponentialClaims {
  double beta = 1.0;  ///< rate; mean 1/beta
};

/// Lomax law with tail (1 + y/sigma)^-alpha, mean sigma/(alpha - 1).
struct ParetoClaims {
  double alpha = 2.0;
  double sigma = 1.0;
};

using ClaimDistribution = std::variant<ExponentialClaims, ParetoClaims>;

bool is_exponential(const ClaimDistribution& claims) noexcept;
double claim_mean(const ClaimDistribution& claims);
/// P(Y > y); equals 1 for y <= 0.
double claim_tail(const ClaimDistribution& claims, double y);
double claim_density(const ClaimDistribution& claims, double y);
/// Inverse survival function: the claim with P(Y > claim) = u, u in (0, 1).
double claim_from_survival(const ClaimDistribution& claims, double u);

enum class StateLabel : int {
  short_gap = 1,  ///< previous gap <= xi; next gap ~ Exp(lambda1)
  long_gap = 2,   ///< previous gap > xi; next gap ~ Exp(lambda2)
};

/// Gap-vs-window classification; ties count as short.
constexpr StateLabel classify_gap(double gap, double xi) noexcept {
  return gap <= xi ? StateLabel::short_gap : StateLabel::long_gap;
}

constexpr int index_of(StateLabel s) noexcept { return static_cast<int>(s) - 1; }

struct ModelParams {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double xi = 1.0;
  ClaimDistribution claims = ExponentialClaims{};

  /// Rate of the gap that follows a gap classified as `s`.
  double gap_rate(StateLabel s) const noexcept {
    return s == StateLabel::short_gap ? lambda1 : lambda2;
  }

  /// Throws Error(invalid_parameter) when any invariant is violated.
  void validate() const;
};

ModelParams make_exponential_model(double lambda1, double lambda2, double xi, double beta);
ModelParams make_pareto_model(double lambda1, double lambda2, double xi, double alpha,
                              double sigma);

enum class Side { below, above };

/// Restricted Laplace transform of tau ~ Exp(rate):
/// E[exp(-theta tau); tau <= xi] (below) or E[exp(-theta tau); tau > xi] (above).
/// Not conditional: below + above = rate / (rate + theta).
double restricted_laplace(double rate, double theta, double xi, Side side);

/// E[tau | tau <= xi] or E[tau | tau > xi] for tau ~ Exp(rate).
double truncated_mean(double rate, double xi, Side side);

/// E[exp(theta Y)].
double claim_mgf(const ClaimDistribution& claims, double theta);

/// P(gap <= xi) for a gap drawn in state `from`.
double prob_short(const ModelParams& params, StateLabel from);

/// E[X1], the mean claim-surplus increment over one regeneration cycle.
double mean_cycle_increment(const ModelParams& params);

/// Negative iff the net profit condition holds. For exponential claims this is
/// the closed form (1/beta - 1/lambda1)(1 - e^{-lambda2 xi}) + (1/beta - 1/lambda2)e^{-lambda1 xi},
/// which equals P(tau > xi) * E[X1]; otherwise E[X1] itself.
double npc_margin(const ModelParams& params);

inline bool npc_holds(const ModelParams& params) { return npc_margin(params) < 0.0; }

struct SteadyState {
  double pi1 = 0.0;
  double pi2 = 0.0;
};

/// Stationary law of the short/long gap chain; pi2 is 1 - pi1.
SteadyState steady_state(const ModelParams& params);

/// The 2x2 state transition matrix [[q, p], [q~, p~]].
struct TransitionMatrix {
  double p11 = 0.0, p12 = 0.0, p21 = 0.0, p22 = 0.0;
};
TransitionMatrix transition_matrix(const ModelParams& params);

/// mu = -E[X1].
double drift_mu(const ModelParams& params);

}  // namespace bonusruin
