#include "bonusruin/importance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bonusruin/errors.hpp"
#include "bonusruin/parallel.hpp"

namespace bonusruin {

TiltedModel build_tilted_model(const ModelParams& params, double theta) {
  params.validate();
  const auto* claims = std::get_if<ExponentialClaims>(&params.claims);
  if (claims == nullptr) {
    fail(ErrorKind::wrong_regime, "exponential tilting needs exponential claims");
  }
  if (!(theta > 0.0 && theta < claims->beta)) {
    fail(ErrorKind::invalid_tilt, "tilt requires 0 < theta < beta");
  }
  const KernelMatrix k = map_kernel_mgf(params, theta);
  TiltedModel m;
  m.theta = theta;
  m.xi = params.xi;
  m.claim_rate = claims->beta - theta;
  m.short_gap_rate = params.lambda1 + theta;
  m.long_gap_rate = params.lambda2 + theta;
  m.q = k.f11;
  m.p = 1.0 - m.q;
  m.p_tilde = k.f22;
  m.q_tilde = 1.0 - m.p_tilde;
  if (!(m.q > 0.0 && m.q < 1.0 && m.p_tilde > 0.0 && m.p_tilde < 1.0)) {
    std::ostringstream os;
    os << "tilted transition probabilities outside (0, 1): q=" << m.q << ", p~=" << m.p_tilde;
    fail(ErrorKind::invalid_tilt, os.str());
  }
  m.eigen = principal_eigenpair(k);
  return m;
}

double sample_tilted_gap(double rate, double xi, Side side, PathRng& rng) {
  const double u = rng.uniform();
  if (side == Side::above) return xi - std::log(u) / rate;
  const double mass = -std::expm1(-rate * xi);
  return std::min(xi, -std::log1p(-u * mass) / rate);
}

RuinSample sample_tilted_path(const TiltedModel& model, double x, RuinCheck check, PathRng& rng,
                              std::uint64_t step_cap) {
  StateLabel state = StateLabel::long_gap;
  double claim_surplus = 0.0;
  for (std::uint64_t step = 1; step <= step_cap; ++step) {
    const bool to_short = rng.uniform() < model.to_short(state);
    const double gap = sample_tilted_gap(model.gap_rate(state), model.xi,
                                         to_short ? Side::below : Side::above, rng);
    const double claim = -std::log(rng.uniform()) / model.claim_rate;
    claim_surplus += claim - gap;
    state = to_short ? StateLabel::short_gap : StateLabel::long_gap;
    const bool checked = check == RuinCheck::every_claim || state == StateLabel::long_gap;
    if (checked && claim_surplus > x) {
      RuinSample s;
      s.overshoot = claim_surplus - x;
      s.steps = step;
      s.terminal_state = state;
      const double ratio =
          state == StateLabel::long_gap ? 1.0 : model.eigen.v2 / model.eigen.v1;
      s.weight = std::exp(-model.theta * claim_surplus) * ratio;
      return s;
    }
  }
  std::ostringstream os;
  os << "tilted path exceeded " << step_cap << " steps without ruin; tilt is inconsistent";
  fail(ErrorKind::diverged_path, os.str());
}

namespace {

RuinEstimate run_is(const TiltedModel& model, double x, std::uint64_t n, std::uint64_t seed,
                    const ImportanceOptions& options, RuinCheck check) {
  if (n == 0) fail(ErrorKind::invalid_parameter, "number of paths must be at least 1");
  if (!(x >= 0.0 && std::isfinite(x))) {
    fail(ErrorKind::invalid_parameter, "reserve must be finite and nonnegative");
  }
  if (!(std::abs(model.eigen.eigenvalue - 1.0) <= 1e-8)) {
    fail(ErrorKind::invalid_tilt, "importance sampling needs the tilt at the adjustment coefficient");
  }
  std::vector<double> weights(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    PathRng rng(seed, i);
    weights[i] = sample_tilted_path(model, x, check, rng, options.step_cap).weight;
  });
  return estimate_from_weights(weights, seed, std::nullopt);
}

TiltedModel tilt_at_kappa(const ModelParams& params) {
  return build_tilted_model(params, solve_kappa(params));
}

}  // namespace

RuinEstimate macro_is_ruin(const TiltedModel& model, double x, std::uint64_t n, std::uint64_t seed,
                           const ImportanceOptions& options) {
  return run_is(model, x, n, seed, options, RuinCheck::regeneration_only);
}

RuinEstimate map_is_ruin(const TiltedModel& model, double x, std::uint64_t n, std::uint64_t seed,
                         const ImportanceOptions& options) {
  return run_is(model, x, n, seed, options, RuinCheck::every_claim);
}

RuinEstimate macro_is_ruin(const ModelParams& params, double x, std::uint64_t n, std::uint64_t seed,
                           const ImportanceOptions& options) {
  return macro_is_ruin(tilt_at_kappa(params), x, n, seed, options);
}

RuinEstimate map_is_ruin(const ModelParams& params, double x, std::uint64_t n, std::uint64_t seed,
                         const ImportanceOptions& options) {
  return map_is_ruin(tilt_at_kappa(params), x, n, seed, options);
}

}  // namespace bonusruin
