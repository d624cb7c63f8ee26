#include "bonusruin/model.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "bonusruin/errors.hpp"

namespace bonusruin {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid_parameter";
    case ErrorKind::degenerate_parameter: return "degenerate_parameter";
    case ErrorKind::mgf_domain: return "mgf_domain";
    case ErrorKind::no_adjustment_coefficient: return "no_adjustment_coefficient";
    case ErrorKind::domain_exhausted: return "domain_exhausted";
    case ErrorKind::bound_undefined: return "bound_undefined";
    case ErrorKind::wrong_regime: return "wrong_regime";
    case ErrorKind::constant_undefined: return "constant_undefined";
    case ErrorKind::inconsistent_kappa: return "inconsistent_kappa";
    case ErrorKind::invalid_tilt: return "invalid_tilt";
    case ErrorKind::diverged_path: return "diverged_path";
    case ErrorKind::oracle_diverged: return "oracle_diverged";
  }
  return "unknown";
}

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_positive(double v, const char* name) {
  if (!positive_finite(v)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << v << ")";
    fail(ErrorKind::invalid_parameter, os.str());
  }
}

}  // namespace

bool is_exponential(const ClaimDistribution& claims) noexcept {
  return std::holds_alternative<ExponentialClaims>(claims);
}

double claim_mean(const ClaimDistribution& claims) {
  if (const auto* e = std::get_if<ExponentialClaims>(&claims)) return 1.0 / e->beta;
  const auto& p = std::get<ParetoClaims>(claims);
  if (!(p.alpha > 1.0)) fail(ErrorKind::invalid_parameter, "Pareto mean requires alpha > 1");
  return p.sigma / (p.alpha - 1.0);
}

double claim_tail(const ClaimDistribution& claims, double y) {
  if (y <= 0.0) return 1.0;
  if (const auto* e = std::get_if<ExponentialClaims>(&claims)) return std::exp(-e->beta * y);
  const auto& p = std::get<ParetoClaims>(claims);
  return std::pow(1.0 + y / p.sigma, -p.alpha);
}

double claim_density(const ClaimDistribution& claims, double y) {
  if (y < 0.0) return 0.0;
  if (const auto* e = std::get_if<ExponentialClaims>(&claims)) {
    return e->beta * std::exp(-e->beta * y);
  }
  const auto& p = std::get<ParetoClaims>(claims);
  return p.alpha / p.sigma * std::pow(1.0 + y / p.sigma, -p.alpha - 1.0);
}

double claim_from_survival(const ClaimDistribution& claims, double u) {
  if (const auto* e = std::get_if<ExponentialClaims>(&claims)) return -std::log(u) / e->beta;
  const auto& p = std::get<ParetoClaims>(claims);
  return p.sigma * std::expm1(-std::log(u) / p.alpha);
}

void ModelParams::validate() const {
  require_positive(lambda1, "lambda1");
  require_positive(lambda2, "lambda2");
  require_positive(xi, "xi");
  if (const auto* e = std::get_if<ExponentialClaims>(&claims)) {
    require_positive(e->beta, "beta");
  } else {
    const auto& p = std::get<ParetoClaims>(claims);
    require_positive(p.sigma, "sigma");
    if (!(std::isfinite(p.alpha) && p.alpha > 1.0)) {
      fail(ErrorKind::invalid_parameter, "Pareto alpha must exceed 1 for a finite claim mean");
    }
  }
}

ModelParams make_exponential_model(double lambda1, double lambda2, double xi, double beta) {
  ModelParams m{lambda1, lambda2, xi, ExponentialClaims{beta}};
  m.validate();
  return m;
}

ModelParams make_pareto_model(double lambda1, double lambda2, double xi, double alpha,
                              double sigma) {
  ModelParams m{lambda1, lambda2, xi, ParetoClaims{alpha, sigma}};
  m.validate();
  return m;
}

double restricted_laplace(double rate, double theta, double xi, Side side) {
  require_positive(rate, "rate");
  if (!(xi >= 0.0)) fail(ErrorKind::invalid_parameter, "xi must be nonnegative");
  const double s = rate + theta;
  if (s == 0.0) {
    fail(ErrorKind::degenerate_parameter, "restricted Laplace transform undefined at rate + theta = 0");
  }
  if (side == Side::above) {
    if (s < 0.0) {
      fail(ErrorKind::mgf_domain, "E[exp(-theta tau); tau > xi] diverges for theta <= -rate");
    }
    return rate / s * std::exp(-s * xi);
  }
  // 1 - e^{-s xi} written with expm1 so small s*xi keeps full precision.
  return rate / s * -std::expm1(-s * xi);
}

double truncated_mean(double rate, double xi, Side side) {
  require_positive(rate, "rate");
  require_positive(xi, "xi");
  if (side == Side::above) return xi + 1.0 / rate;
  // (1/l - (xi + 1/l) e^{-l xi}) / (1 - e^{-l xi}) == 1/l - xi / (e^{l xi} - 1)
  return 1.0 / rate - xi / std::expm1(rate * xi);
}

double claim_mgf(const ClaimDistribution& claims, double theta) {
  if (const auto* e = std::get_if<ExponentialClaims>(&claims)) {
    if (!(theta < e->beta)) {
      std::ostringstream os;
      os << "claim m.g.f. requires theta < beta (theta=" << theta << ", beta=" << e->beta << ")";
      fail(ErrorKind::mgf_domain, os.str());
    }
    return e->beta / (e->beta - theta);
  }
  if (theta > 0.0) {
    fail(ErrorKind::mgf_domain, "Pareto claims have no m.g.f. for theta > 0");
  }
  if (theta == 0.0) return 1.0;
  boost::math::quadrature::exp_sinh<double> integrator;
  auto integrand = [&](double y) { return std::exp(theta * y) * claim_density(claims, y); };
  return integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
}

double prob_short(const ModelParams& params, StateLabel from) {
  return -std::expm1(-params.gap_rate(from) * params.xi);
}

double mean_cycle_increment(const ModelParams& params) {
  // Cycle starts after a long gap: one gap from the long state; if it is short,
  // N - 1 further short gaps then one long gap, N ~ Geo(P(tau > xi)).
  const double ey = claim_mean(params.claims);
  const double q_tilde = prob_short(params, StateLabel::long_gap);
  const double p = std::exp(-params.lambda1 * params.xi);
  const double expected_n_minus_1 = (1.0 - p) / p;
  const double short_leg = ey - truncated_mean(params.lambda1, params.xi, Side::below);
  const double long_leg = ey - truncated_mean(params.lambda1, params.xi, Side::above);
  return (ey - 1.0 / params.lambda2) + q_tilde * (long_leg + expected_n_minus_1 * short_leg);
}

double npc_margin(const ModelParams& params) {
  params.validate();
  if (const auto* e = std::get_if<ExponentialClaims>(&params.claims)) {
    const double inv_beta = 1.0 / e->beta;
    return (inv_beta - 1.0 / params.lambda1) * prob_short(params, StateLabel::long_gap) +
           (inv_beta - 1.0 / params.lambda2) * std::exp(-params.lambda1 * params.xi);
  }
  return mean_cycle_increment(params);
}

SteadyState steady_state(const ModelParams& params) {
  params.validate();
  const double q_tilde = prob_short(params, StateLabel::long_gap);
  const double p = std::exp(-params.lambda1 * params.xi);
  SteadyState s;
  s.pi1 = q_tilde / (q_tilde + p);
  s.pi2 = 1.0 - s.pi1;
  return s;
}

TransitionMatrix transition_matrix(const ModelParams& params) {
  params.validate();
  TransitionMatrix t;
  t.p11 = prob_short(params, StateLabel::short_gap);
  t.p12 = std::exp(-params.lambda1 * params.xi);
  t.p21 = prob_short(params, StateLabel::long_gap);
  t.p22 = std::exp(-params.lambda2 * params.xi);
  return t;
}

double drift_mu(const ModelParams& params) {
  params.validate();
  return -mean_cycle_increment(params);
}

}  // namespace bonusruin
