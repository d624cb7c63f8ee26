#include "bonusruin/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bonusruin/errors.hpp"

namespace bonusruin {

namespace {

constexpr double kDomainGuard = 1e-9;

double beta_of(const ModelParams& params, const char* what) {
  const auto* e = std::get_if<ExponentialClaims>(&params.claims);
  if (e == nullptr) {
    fail(ErrorKind::wrong_regime,
         std::string(what) + ": no m.g.f.: use heavy-tail asymptotics");
  }
  return e->beta;
}

void require_gap_domain(const ModelParams& params, double theta) {
  const double lower = -std::min(params.lambda1, params.lambda2);
  if (!(theta > lower)) {
    std::ostringstream os;
    os << "phi(theta) requires theta > -min(lambda1, lambda2) = " << lower << " (theta=" << theta
       << ")";
    fail(ErrorKind::mgf_domain, os.str());
  }
}

// 1 - f11(theta). For exponential claims the product b(theta) * lambda1/(lambda1+theta)
// is 1 - theta(beta-lambda1-theta)/((lambda1+theta)(beta-theta)), which keeps the
// difference accurate when f11 is within rounding of 1.
double short_loop_gap(const ModelParams& params, double theta) {
  const double l1 = params.lambda1;
  const double tail = std::exp(-(l1 + theta) * params.xi);
  if (const auto* e = std::get_if<ExponentialClaims>(&params.claims)) {
    const double beta = e->beta;
    if (!(theta < beta)) return -std::numeric_limits<double>::infinity();
    const double a = l1 * beta / ((l1 + theta) * (beta - theta));
    return theta * (beta - l1 - theta) / ((l1 + theta) * (beta - theta)) + a * tail;
  }
  return 1.0 - claim_mgf(params.claims, theta) *
                   restricted_laplace(l1, theta, params.xi, Side::below);
}

// 1 - f11(theta) changes sign exactly once on (0, beta): f11 is log-convex,
// below 1 at 0 and unbounded as theta -> beta.
double short_loop_edge(const ModelParams& params, double beta) {
  double lo = 0.0;
  double hi = beta;
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (short_loop_gap(params, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

double KernelMatrix::at(StateLabel from, StateLabel to) const noexcept {
  if (from == StateLabel::short_gap) return to == StateLabel::short_gap ? f11 : f12;
  return to == StateLabel::short_gap ? f21 : f22;
}

KernelMatrix map_kernel_mgf(const ModelParams& params, double theta) {
  params.validate();
  require_gap_domain(params, theta);
  const double m = claim_mgf(params.claims, theta);
  KernelMatrix k;
  k.theta = theta;
  k.f11 = m * restricted_laplace(params.lambda1, theta, params.xi, Side::below);
  k.f12 = m * restricted_laplace(params.lambda1, theta, params.xi, Side::above);
  k.f21 = m * restricted_laplace(params.lambda2, theta, params.xi, Side::below);
  k.f22 = m * restricted_laplace(params.lambda2, theta, params.xi, Side::above);
  return k;
}

double mgf_x1(const ModelParams& params, double theta) {
  const KernelMatrix k = map_kernel_mgf(params, theta);
  const double loop = short_loop_gap(params, theta);
  if (!(loop > 0.0)) {
    std::ostringstream os;
    os << "phi(theta) requires 1 - E[e^{theta Y}] E[e^{-theta tau}; tau <= xi] > 0 (got " << loop
       << " at theta=" << theta << ")";
    fail(ErrorKind::mgf_domain, os.str());
  }
  // Long-gap start: close the cycle at once, or enter the short loop and leave
  // it through a long gap.
  return k.f22 + k.f21 * k.f12 / loop;
}

double mgf_x1_printed_form(const ModelParams& params, double theta) {
  beta_of(params, "printed phi form");
  params.validate();
  require_gap_domain(params, theta);
  const double b = claim_mgf(params.claims, theta);
  const double l1 = params.lambda1;
  const double l2 = params.lambda2;
  const double xi = params.xi;
  const double numerator =
      l1 * l2 * (std::exp(-l1 * xi) - std::exp(-l2 * xi)) * b * b * std::exp(-theta * xi) /
          ((l1 + theta) * (l2 + theta)) +
      l2 / (l2 + theta) * b * std::exp(-(l2 + theta) * xi);
  const double denominator = 1.0 - l1 / (l1 + theta) * -std::expm1(-(l1 + theta) * xi) * b;
  if (!(denominator > 0.0)) {
    fail(ErrorKind::mgf_domain, "printed phi form: denominator is not positive");
  }
  return numerator / denominator;
}

double mgf_domain_edge(const ModelParams& params) {
  const double beta = beta_of(params, "mgf domain");
  params.validate();
  return std::min(beta, short_loop_edge(params, beta)) - kDomainGuard;
}

double solve_kappa(const ModelParams& params, MgfForm form) {
  params.validate();
  beta_of(params, "solve_kappa");
  if (!npc_holds(params)) {
    fail(ErrorKind::no_adjustment_coefficient,
         "net profit condition fails: no adjustment coefficient exists");
  }
  auto phi = [&](double theta) {
    return form == MgfForm::general ? mgf_x1(params, theta) : mgf_x1_printed_form(params, theta);
  };
  // phi grows without bound at the short-loop edge and at beta, so points past
  // the edge count as above the root.
  const double beta = beta_of(params, "solve_kappa");
  const double edge = std::min(beta, short_loop_edge(params, beta));
  auto above = [&](double theta) {
    if (!(theta < edge) || !(short_loop_gap(params, theta) > 0.0)) return true;
    return phi(theta) >= 1.0;
  };

  // phi is convex with phi(0) = 1 and phi'(0) < 0, so phi < 1 on (0, kappa).
  double lo = 0.0;
  double hi = -1.0;
  double gap = 0.5 * edge;
  for (int k = 0; k < 1100 && gap > 0.0; ++k) {
    const double theta = edge - gap;
    if (above(theta)) {
      hi = theta;
      break;
    }
    lo = theta;
    gap *= 0.5;
  }
  if (hi < 0.0) {
    fail(ErrorKind::domain_exhausted, "phi(theta) - 1 not bracketed before the domain edge");
  }
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (above(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double miss_lo = std::abs(phi(lo) - 1.0);
  if (hi < edge && short_loop_gap(params, hi) > 0.0) {
    const double miss_hi = std::abs(phi(hi) - 1.0);
    return miss_hi < miss_lo ? hi : lo;
  }
  // The bracket closed on the edge itself. phi is below 1 at lo and unbounded at
  // the edge, so the root sits between them, within rounding of theta.
  return lo;
}

double cramer_upper_constant(const ModelParams& params, double kappa) {
  const double beta = beta_of(params, "cramer_upper_constant");
  params.validate();
  if (!(kappa > 0.0 && kappa < beta)) {
    fail(ErrorKind::bound_undefined, "upper constant requires 0 < kappa < beta");
  }
  const double long_from_short = std::exp(-params.lambda1 * params.xi);
  const double long_from_long = std::exp(-params.lambda2 * params.xi);
  const double denominator = beta * long_from_short - kappa;
  if (!(denominator > 0.0)) {
    std::ostringstream os;
    os << "upper constant undefined: beta e^{-lambda1 xi} - kappa = " << denominator << " <= 0";
    fail(ErrorKind::bound_undefined, os.str());
  }
  return beta / (beta - kappa) * (beta * long_from_short - kappa * long_from_long) / denominator;
}

double cramer_upper_constant_series(const ModelParams& params, double kappa) {
  params.validate();
  const double m = claim_mgf(params.claims, kappa);
  const double p = std::exp(-params.lambda1 * params.xi);
  const double q = 1.0 - p;
  const double p_tilde = std::exp(-params.lambda2 * params.xi);
  const double ratio = q * m;
  if (!(ratio < 1.0)) {
    fail(ErrorKind::bound_undefined, "claim-count series diverges: P(tau <= xi) E[e^{kappa Y}] >= 1");
  }
  return p_tilde * m + (1.0 - p_tilde) * p * m * m / (1.0 - ratio);
}

double classical_ruin(double lambda, double beta, double u) {
  if (!(lambda > 0.0 && beta > 0.0)) {
    fail(ErrorKind::invalid_parameter, "classical ruin requires positive rates");
  }
  if (!(lambda < beta)) {
    fail(ErrorKind::invalid_parameter, "classical ruin requires lambda < beta (otherwise ruin is certain)");
  }
  if (!(u >= 0.0)) fail(ErrorKind::invalid_parameter, "reserve must be nonnegative");
  return lambda / beta * std::exp(-(beta - lambda) * u);
}

double heavy_tail_constant(const ModelParams& params) {
  params.validate();
  const double q = prob_short(params, StateLabel::short_gap);
  const double q_tilde = prob_short(params, StateLabel::long_gap);
  return 1.0 - q_tilde + q_tilde * (2.0 - q) / (1.0 - q);
}

HeavyTailAsymptotic heavy_tail_asymptotic(const ModelParams& params, double x) {
  params.validate();
  const auto* pareto = std::get_if<ParetoClaims>(&params.claims);
  if (pareto == nullptr) {
    fail(ErrorKind::wrong_regime, "heavy-tail asymptotic needs Pareto claims; use the Cramer path");
  }
  if (!npc_holds(params)) {
    fail(ErrorKind::wrong_regime, "heavy-tail asymptotic requires the net profit condition");
  }
  if (!(x >= 0.0)) fail(ErrorKind::invalid_parameter, "reserve must be nonnegative");
  const double c = heavy_tail_constant(params);
  const double mu = drift_mu(params);
  const double integrated_tail =
      pareto->sigma / (pareto->alpha - 1.0) * std::pow(1.0 + x / pareto->sigma, 1.0 - pareto->alpha);
  HeavyTailAsymptotic out;
  out.value = c / mu * integrated_tail;
  if (out.value > 1.0) {
    out.value = 1.0;
    out.clamped = true;
  }
  return out;
}

double s_alpha_constant(const ModelParams& params, double alpha) {
  params.validate();
  if (!(alpha >= 0.0)) fail(ErrorKind::invalid_parameter, "alpha must be nonnegative");
  double m = 0.0;
  try {
    m = claim_mgf(params.claims, alpha);
  } catch (const Error& e) {
    fail(ErrorKind::constant_undefined, std::string("D(alpha) undefined: ") + e.what());
  }
  const double q = prob_short(params, StateLabel::short_gap);
  const double p = 1.0 - q;
  const double q_tilde = prob_short(params, StateLabel::long_gap);
  const double below = restricted_laplace(params.lambda1, alpha, params.xi, Side::below) / q;
  const double above = restricted_laplace(params.lambda1, alpha, params.xi, Side::above) / p;
  const double loop = q * m * below;
  if (!(loop < 1.0)) {
    fail(ErrorKind::constant_undefined,
         "D(alpha) undefined: geometric moment E[N B^{N-1}] diverges");
  }
  // E[N z^{N-1}] for N ~ Geo(p) on {1, 2, ...} is p / (1 - (1 - p) z)^2.
  const double geometric_moment = p / ((1.0 - loop) * (1.0 - loop));
  return restricted_laplace(params.lambda2, alpha, params.xi, Side::above) +
         q_tilde * (geometric_moment * below + above);
}

EigenPair principal_eigenpair(const KernelMatrix& k) {
  const double a = k.f11, b = k.f12, c = k.f21, d = k.f22;
  const double half_trace = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const double root = std::sqrt(half_gap * half_gap + b * c);
  EigenPair e;
  e.eigenvalue = half_trace + root;
  double v1 = 0.0;
  double v2 = 0.0;
  if (b != 0.0) {
    // (lambda - a) written without cancellation.
    v1 = b;
    v2 = root - half_gap;
    if (half_gap > 0.0) v2 = b * c / (root + half_gap);
  } else if (c != 0.0) {
    v1 = root + half_gap;
    if (half_gap < 0.0) v1 = b * c / (root - half_gap);
    v2 = c;
  } else if (a >= d) {
    v1 = 1.0;  // diagonal kernel: ties resolve toward the first component
  } else {
    v2 = 1.0;
  }
  const double norm = std::hypot(v1, v2);
  e.v1 = std::abs(v1) / norm;
  e.v2 = std::abs(v2) / norm;
  return e;
}

EigenPair adjustment_eigenvector(const ModelParams& params, double kappa) {
  const double phi = mgf_x1(params, kappa);
  if (!(std::abs(phi - 1.0) <= 1e-8)) {
    std::ostringstream os;
    os << "kappa=" << kappa << " is not an adjustment coefficient (phi - 1 = " << phi - 1.0 << ")";
    fail(ErrorKind::inconsistent_kappa, os.str());
  }
  const KernelMatrix k = map_kernel_mgf(params, kappa);
  const double v1 = k.f12;
  const double v2 = 1.0 - k.f11;
  const double norm = std::hypot(v1, v2);
  return EigenPair{1.0, v1 / norm, v2 / norm};
}

AsymptoticReport asymptotic_report(const ModelParams& params) {
  params.validate();
  AsymptoticReport r;
  r.mu = drift_mu(params);
  r.npc_holds = npc_holds(params);
  if (!is_exponential(params.claims)) {
    r.kind = AsymptoticKind::heavy_tail;
    r.tail_constant = heavy_tail_constant(params);
    return r;
  }
  r.kind = AsymptoticKind::cramer;
  r.mgf_domain_ok = true;
  if (!r.npc_holds) return r;
  try {
    const double kappa = solve_kappa(params);
    r.kappa = kappa;
    const double edge = mgf_domain_edge(params);
    const double h = std::min(1e-6 * std::max(1.0, kappa), 0.5 * (edge - kappa));
    r.phi_prime_at_kappa = (mgf_x1(params, kappa + h) - mgf_x1(params, kappa - h)) / (2.0 * h);
    r.k_tilde = cramer_upper_constant(params, kappa);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::domain_exhausted || e.kind() == ErrorKind::mgf_domain) {
      r.mgf_domain_ok = false;
    }
  }
  return r;
}

}  // namespace bonusruin
