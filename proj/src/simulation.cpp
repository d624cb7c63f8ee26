#include "bonusruin/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "bonusruin/errors.hpp"
#include "bonusruin/parallel.hpp"

namespace bonusruin {

PathState PathState::start(double reserve, StateLabel initial_state) noexcept {
  PathState s;
  s.initial = reserve;
  s.surplus = reserve;
  s.state = initial_state;
  return s;
}

PathState step_path(const PathState& state, const ModelParams& params, PathRng& rng) {
  PathState next = state;
  const double gap = -std::log(rng.uniform()) / params.gap_rate(state.state);
  const double claim = claim_from_survival(params.claims, rng.uniform());
  next.clock = state.clock + gap;
  next.claims = state.claims + claim;
  next.surplus = (next.initial + next.clock) - next.claims;
  next.state = classify_gap(gap, params.xi);
  next.steps = state.steps + 1;
  next.rng_cursor = rng.cursor();
  return next;
}

namespace {

void check_run(std::uint64_t n, const CrudeOptions& options) {
  if (n == 0) fail(ErrorKind::invalid_parameter, "number of paths must be at least 1");
  if (!(options.horizon > 0.0)) fail(ErrorKind::invalid_parameter, "horizon must be positive");
  if (!(options.escape_margin > 0.0)) {
    fail(ErrorKind::invalid_parameter, "escape margin must be positive");
  }
}

std::vector<double> sorted_levels(std::span<const double> levels) {
  if (levels.empty()) fail(ErrorKind::invalid_parameter, "reserve grid must be nonempty");
  std::vector<double> out(levels.begin(), levels.end());
  for (double x : out) {
    if (!(x >= 0.0 && std::isfinite(x))) {
      fail(ErrorKind::invalid_parameter, "reserve levels must be finite and nonnegative");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double path_maximum(const ModelParams& params, const std::vector<double>& levels,
                    std::uint64_t seed, std::uint64_t path, const CrudeOptions& options) {
  PathRng rng(seed, path);
  PathState s = PathState::start(0.0, options.initial_state);
  double max_surplus = -std::numeric_limits<double>::infinity();
  std::size_t open_level = 0;  // first level not yet ruined
  const bool use_escape = std::isfinite(options.escape_margin);
  for (;;) {
    const PathState next = step_path(s, params, rng);
    if (next.clock > options.horizon) break;
    s = next;
    const double claim_surplus = s.claim_surplus();
    if (claim_surplus > max_surplus) {
      max_surplus = claim_surplus;
      while (open_level < levels.size() && levels[open_level] < max_surplus) ++open_level;
      if (open_level == levels.size()) break;
    }
    if (use_escape && levels[open_level] - claim_surplus >= options.escape_margin) break;
  }
  return max_surplus;
}

std::vector<RuinEstimate> summarize(std::span<const double> maxima, std::span<const double> xs,
                                    std::uint64_t seed, double horizon) {
  std::vector<RuinEstimate> out;
  out.reserve(xs.size());
  for (double x : xs) {
    const auto ruined = static_cast<std::uint64_t>(
        std::count_if(maxima.begin(), maxima.end(), [x](double m) { return m > x; }));
    out.push_back(estimate_from_count(ruined, maxima.size(), seed, horizon));
  }
  return out;
}

}  // namespace

std::vector<double> simulate_path_maxima(const ModelParams& params, std::span<const double> levels,
                                         std::uint64_t n, std::uint64_t seed,
                                         const CrudeOptions& options) {
  params.validate();
  check_run(n, options);
  const std::vector<double> sorted = sorted_levels(levels);
  std::vector<double> maxima(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    maxima[i] = path_maximum(params, sorted, seed, i, options);
  });
  return maxima;
}

RuinEstimate crude_mc_ruin(const ModelParams& params, double x, std::uint64_t n,
                           std::uint64_t seed, const CrudeOptions& options) {
  const double xs[] = {x};
  return crude_mc_ruin_grid(params, xs, n, seed, options).front();
}

std::vector<RuinEstimate> crude_mc_ruin_grid(const ModelParams& params, std::span<const double> xs,
                                             std::uint64_t n, std::uint64_t seed,
                                             const CrudeOptions& options) {
  const std::vector<double> maxima = simulate_path_maxima(params, xs, n, seed, options);
  return summarize(maxima, xs, seed, options.horizon);
}

std::pair<double, double> SweepResult::paired_difference(std::size_t x_index, std::size_t xi_a,
                                                         std::size_t xi_b) const {
  const double x = xs.at(x_index);
  const auto& a = maxima.at(xi_a);
  const auto& b = maxima.at(xi_b);
  const std::size_t n = a.size();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(b[i] > x) - static_cast<double>(a[i] > x);
    sum += d;
    sum_sq += d * d;
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = n > 1 ? (sum_sq - nn * mean * mean) / (nn - 1.0) : 0.0;
  return {mean, std::sqrt(std::max(var, 0.0) / nn)};
}

SweepResult xi_sweep(const ModelParams& base, std::span<const double> xs, std::span<const double> xis,
                     std::uint64_t n, std::uint64_t seed, const CrudeOptions& options) {
  if (xs.empty() || xis.empty()) fail(ErrorKind::invalid_parameter, "sweep grids must be nonempty");
  SweepResult result;
  result.xs.assign(xs.begin(), xs.end());
  result.xis.assign(xis.begin(), xis.end());
  for (double xi : xis) {
    ModelParams p = base;
    p.xi = xi;
    // Same seed for every xi: path i replays identical uniforms.
    result.maxima.push_back(simulate_path_maxima(p, xs, n, seed, options));
  }
  for (double x : result.xs) {
    for (std::size_t k = 0; k < result.xis.size(); ++k) {
      const double one[] = {x};
      result.rows.push_back(
          SweepRow{x, result.xis[k], summarize(result.maxima[k], one, seed, options.horizon).front()});
    }
  }
  return result;
}

}  // namespace bonusruin
