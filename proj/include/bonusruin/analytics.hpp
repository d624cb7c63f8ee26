#pragma once

// Cycle m.g.f., adjustment coefficient, asymptotic constants and the kernel
// of the embedded Markov additive process.

#include <optional>

#include "bonusruin/model.hpp"

namespace bonusruin {

/// Matrix m.g.f. of the one-claim kernel: f_ij = E_i[exp(theta dS); J1 = j].
struct KernelMatrix {
  double f11 = 0.0, f12 = 0.0, f21 = 0.0, f22 = 0.0;
  double theta = 0.0;

  double at(StateLabel from, StateLabel to) const noexcept;
};

/// Principal eigenvalue with a positive right eigenvector of unit Euclidean norm.
struct EigenPair {
  double eigenvalue = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;

  double component(StateLabel s) const noexcept { return s == StateLabel::short_gap ? v1 : v2; }
};

/// phi(theta) = E[exp(theta X1)] for a cycle that starts in the long-gap state.
double mgf_x1(const ModelParams& params, double theta);

/// The exponential-claims closed form as printed (common-denominator grouping).
/// Diagnostic only; algebraically equal to mgf_x1.
double mgf_x1_printed_form(const ModelParams& params, double theta);

enum class MgfForm { general, printed };

/// Upper edge of the phi domain: min(beta, root of 1 - f11(theta)) minus a 1e-9 guard.
double mgf_domain_edge(const ModelParams& params);

/// Positive root kappa of phi(kappa) = 1.
double solve_kappa(const ModelParams& params, MgfForm form = MgfForm::general);

/// Closed-form upper constant
///   beta/(beta - kappa) * (beta e^{-l1 xi} - kappa e^{-l2 xi}) / (beta e^{-l1 xi} - kappa).
double cramer_upper_constant(const ModelParams& params, double kappa);

/// Same constant via the geometric series over the number of claims in a cycle,
///   P(tau~ > xi) M + P(tau~ <= xi) P(tau > xi) M^2 / (1 - P(tau <= xi) M),  M = E[e^{kappa Y}].
double cramer_upper_constant_series(const ModelParams& params, double kappa);

/// Classical compound-Poisson ruin probability with exponential claims.
double classical_ruin(double lambda, double beta, double u);

/// C with P(X1 > x) ~ C P(Y > x): expected number of claims per cycle.
double heavy_tail_constant(const ModelParams& params);

struct HeavyTailAsymptotic {
  double value = 0.0;
  bool clamped = false;  ///< raw asymptotic exceeded 1 and was clamped
};

/// (C/mu) * integral_x^inf P(Y > u) du for Pareto claims.
HeavyTailAsymptotic heavy_tail_asymptotic(const ModelParams& params, double x);

/// D(alpha) with P(X1 > x) ~ D(alpha) P(Y > x) for S(alpha) claims.
double s_alpha_constant(const ModelParams& params, double alpha);

KernelMatrix map_kernel_mgf(const ModelParams& params, double theta);

EigenPair principal_eigenpair(const KernelMatrix& kernel);

/// Right eigenvector of the kernel at kappa from the closed-form ratio
/// v1/v2 = f12 / (1 - f11); eigenvalue reported as 1.
EigenPair adjustment_eigenvector(const ModelParams& params, double kappa);

enum class AsymptoticKind { cramer, heavy_tail };

struct AsymptoticReport {
  AsymptoticKind kind = AsymptoticKind::cramer;
  double mu = 0.0;
  bool npc_holds = false;
  bool mgf_domain_ok = false;
  std::optional<double> kappa;
  std::optional<double> k_tilde;
  std::optional<double> phi_prime_at_kappa;  ///< m = E[X1 e^{kappa X1}], finite difference
  std::optional<double> tail_constant;       ///< heavy-tail C
};

/// Collects the regime-appropriate constants; never throws for valid params.
AsymptoticReport asymptotic_report(const ModelParams& params);

}  // namespace bonusruin
