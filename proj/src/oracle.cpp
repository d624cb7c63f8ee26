#include "bonusruin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bonusruin/errors.hpp"
#include "bonusruin/estimate.hpp"
#include "bonusruin/rng.hpp"

namespace bonusruin {

namespace {

double interpolate(const std::vector<double>& values, double h, double x) {
  if (!(x >= 0.0)) fail(ErrorKind::invalid_parameter, "oracle queried below zero");
  const double pos = x / h;
  const auto last = values.size() - 1;
  if (pos >= static_cast<double>(last)) {
    if (pos > static_cast<double>(last) + 1e-9) {
      fail(ErrorKind::invalid_parameter, "oracle queried beyond its grid");
    }
    return values[last];
  }
  const auto i = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

// Extension of g_j beyond the grid end X, fitted on [X - L, X].
struct TailFit {
  bool power = false;
  double end = 0.0;    // X
  double value = 0.0;  // g(X)
  double rate = 0.0;   // exponential rate or power exponent
  double shift = 0.0;  // sigma for the power law

  double operator()(double z) const {
    if (power) return value * std::pow((shift + end) / (shift + z), rate);
    return value * std::exp(-rate * (z - end));
  }
};

TailFit fit_tail(const ModelParams& params, const std::vector<double>& g, double h) {
  TailFit fit;
  const std::size_t n = g.size() - 1;
  fit.end = static_cast<double>(n) * h;
  fit.value = g[n];
  const auto lag = std::max<std::size_t>(
      1, std::min(n / 2, static_cast<std::size_t>(std::lround(5.0 * claim_mean(params.claims) / h))));
  const double earlier = g[n - lag];
  const double span = static_cast<double>(lag) * h;
  if (const auto* pareto = std::get_if<ParetoClaims>(&params.claims)) {
    fit.power = true;
    fit.shift = pareto->sigma;
    fit.rate = std::log(earlier / fit.value) /
               std::log((fit.shift + fit.end) / (fit.shift + fit.end - span));
  } else {
    fit.rate = std::log(earlier / fit.value) / span;
  }
  if (!std::isfinite(fit.rate) || fit.rate < 0.0) fit.rate = 0.0;
  if (!(fit.value > 0.0)) fit.value = 0.0;
  return fit;
}

// e^{-lambda (a - x)}-free part: int_0^inf e^{-u} tail(a + u / lambda) du by composite Simpson.
double tail_integral(const TailFit& tail, double a, double lambda, const OracleOptions& o) {
  const int m = o.tail_quadrature_intervals + (o.tail_quadrature_intervals % 2);
  const double du = o.tail_quadrature_span / m;
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double u = k * du;
    const double w = (k == 0 || k == m) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * std::exp(-u) * tail(a + u / lambda);
  }
  return sum * du / 3.0;
}

struct Solver {
  const ModelParams& params;
  const OracleOptions& options;
  double h;
  std::size_t n;
  std::vector<double> b;       // claim density on the grid
  std::vector<double> fbar;    // claim tail on the grid
  std::vector<double> decay1;  // e^{-lambda1 m h}
  std::vector<double> decay2;

  Solver(const ModelParams& p, const OracleOptions& o, double step, std::size_t points)
      : params(p), options(o), h(step), n(points) {
    b.resize(n + 1);
    fbar.resize(n + 1);
    decay1.resize(n + 1);
    decay2.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const double z = static_cast<double>(k) * h;
      b[k] = claim_density(p.claims, z);
      fbar[k] = claim_tail(p.claims, z);
      decay1[k] = std::exp(-p.lambda1 * z);
      decay2[k] = std::exp(-p.lambda2 * z);
    }
  }

  std::vector<double> claim_step(const std::vector<double>& psi) const {
    std::vector<double> g(n + 1);
    g[0] = fbar[0];
    for (std::size_t k = 1; k <= n; ++k) {
      double s = 0.5 * (psi[k] * b[0] + psi[0] * b[k]);
      for (std::size_t m = 1; m < k; ++m) s += psi[k - m] * b[m];
      g[k] = h * s + fbar[k];
    }
    return g;
  }

  double g_at(const std::vector<double>& g, const TailFit& tail, double z) const {
    if (z <= tail.end) return interpolate(g, h, z);
    return tail(z);
  }

  // psi_i on the grid from g1 (next gap short) and g2 (next gap long).
  std::vector<double> gap_step(double lambda, const std::vector<double>& decay,
                               const std::vector<double>& g1, const TailFit& t1,
                               const std::vector<double>& g2, const TailFit& t2) const {
    const double xi = params.xi;
    const double x_end = static_cast<double>(n) * h;
    const auto s = static_cast<std::size_t>(std::floor(xi / h));
    const double rest = xi - static_cast<double>(s) * h;
    const double e_xi = std::exp(-lambda * xi);
    const double far = tail_integral(t2, x_end, lambda, options);
    auto grid_g = [&](const std::vector<double>& g, const TailFit& t, std::size_t idx) {
      return idx <= n ? g[idx] : t(static_cast<double>(idx) * h);
    };
    auto decay_at = [&](std::size_t m) {
      return m <= n ? decay[m] : std::exp(-lambda * static_cast<double>(m) * h);
    };

    std::vector<double> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const double x = static_cast<double>(k) * h;
      // gaps in (0, xi]
      double short_part = 0.0;
      for (std::size_t m = 0; s > 0 && m <= s; ++m) {
        const double w = (m == 0 || m == s) ? 0.5 : 1.0;
        short_part += w * decay_at(m) * grid_g(g1, t1, k + m);
      }
      short_part *= h;
      if (rest > 0.0) {
        const double g1_xi = g_at(g1, t1, x + xi);
        short_part += 0.5 * rest * (decay_at(s) * grid_g(g1, t1, k + s) + e_xi * g1_xi);
      }
      // gaps in (xi, inf)
      double long_part = 0.0;
      if (x + xi >= x_end) {
        long_part = e_xi * tail_integral(t2, x + xi, lambda, options) / lambda;
      } else {
        const std::size_t first = rest > 0.0 ? s + 1 : s;
        const std::size_t last = n - k;  // t = X - x
        const double g2_xi = g_at(g2, t2, x + xi);
        if (first <= last) {
          if (rest > 0.0) {
            const double width = static_cast<double>(first) * h - xi;
            long_part += 0.5 * width * (e_xi * g2_xi + decay_at(first) * g2[k + first]);
          }
          double inner = 0.0;
          for (std::size_t m = first; first < last && m <= last; ++m) {
            const double w = (m == first || m == last) ? 0.5 : 1.0;
            inner += w * decay_at(m) * g2[k + m];
          }
          long_part += h * inner;
        } else {
          const double width = x_end - x - xi;
          long_part += 0.5 * width * (e_xi * g2_xi + decay_at(last) * g2[n]);
        }
        long_part += decay_at(last) * far / lambda;
      }
      out[k] = lambda * (short_part + long_part);
    }
    return out;
  }
};

double sup_change(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

double GridFunction::psi1_at(double x) const { return interpolate(psi1, h, x); }
double GridFunction::psi2_at(double x) const { return interpolate(psi2, h, x); }

GridFunction solve_integral_equations(const ModelParams& params, double x_max, double h,
                                      double tol, const OracleOptions& options) {
  params.validate();
  if (!npc_holds(params)) {
    fail(ErrorKind::invalid_parameter, "integral equations need the net profit condition");
  }
  if (!(h > 0.0 && std::isfinite(h))) fail(ErrorKind::invalid_parameter, "grid step must be positive");
  if (!(x_max >= 2.0 * h && std::isfinite(x_max))) {
    fail(ErrorKind::invalid_parameter, "x_max must cover at least two grid steps");
  }
  if (!(tol > 0.0)) fail(ErrorKind::invalid_parameter, "tolerance must be positive");

  const auto n = static_cast<std::size_t>(std::ceil(x_max / h - 1e-9));
  Solver solver(params, options, h, n);

  GridFunction out;
  out.h = h;
  out.grid.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out.grid[k] = static_cast<double>(k) * h;
  out.psi1.assign(n + 1, 0.0);
  out.psi2.assign(n + 1, 0.0);

  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    const std::vector<double> g1 = solver.claim_step(out.psi1);
    const std::vector<double> g2 = solver.claim_step(out.psi2);
    const TailFit t1 = fit_tail(params, g1, h);
    const TailFit t2 = fit_tail(params, g2, h);
    std::vector<double> next1 = solver.gap_step(params.lambda1, solver.decay1, g1, t1, g2, t2);
    std::vector<double> next2 = solver.gap_step(params.lambda2, solver.decay2, g1, t1, g2, t2);
    out.residual = std::max(sup_change(next1, out.psi1), sup_change(next2, out.psi2));
    out.psi1 = std::move(next1);
    out.psi2 = std::move(next2);
    out.iterations = it;
    if (!std::isfinite(out.residual)) break;
    if (out.residual < tol) return out;
  }
  std::ostringstream os;
  os << "integral equations did not converge in " << options.max_iter
     << " sweeps (last change " << out.residual << ")";
  fail(ErrorKind::oracle_diverged, os.str());
}

double default_oracle_step(const ModelParams& params) { return 0.02 * claim_mean(params.claims); }

double default_oracle_x_max(const ModelParams& params, double x_query) {
  return x_query + 20.0 * claim_mean(params.claims);
}

OracleValue oracle_ruin(const ModelParams& params, double x, double tol, StateLabel initial) {
  params.validate();
  const double h = default_oracle_step(params);
  // an even number of fine steps so the coarse grid ends at the same point
  const double x_max = 2.0 * h * std::ceil(default_oracle_x_max(params, x) / (2.0 * h));
  const GridFunction fine = solve_integral_equations(params, x_max, h, tol);
  const GridFunction coarse = solve_integral_equations(params, x_max, 2.0 * h, tol);
  auto pick = [&](const GridFunction& f) {
    return initial == StateLabel::long_gap ? f.psi2_at(x) : f.psi1_at(x);
  };
  OracleValue v;
  v.psi = pick(fine);
  v.grid_error = std::abs(v.psi - pick(coarse));
  v.residual = fine.residual;
  return v;
}

namespace {

struct CycleGaps {
  std::uint64_t claims = 0;
  double gaps = 0.0;
};

// A cycle opens after a long gap: one Exp(lambda2) gap, then Exp(lambda1) gaps
// for as long as they stay within xi. The cycle closes at the claim after the
// first gap longer than xi.
CycleGaps sample_cycle_gaps(const ModelParams& params, PathRng& rng) {
  CycleGaps c;
  double gap = -std::log(rng.uniform()) / params.lambda2;
  c.claims = 1;
  c.gaps = gap;
  while (gap <= params.xi) {
    gap = -std::log(rng.uniform()) / params.lambda1;
    ++c.claims;
    c.gaps += gap;
  }
  return c;
}

double sample_x1(const ModelParams& params, PathRng& rng) {
  const CycleGaps c = sample_cycle_gaps(params, rng);
  double claims = 0.0;
  for (std::uint64_t k = 0; k < c.claims; ++k) claims += claim_from_survival(params.claims, rng.uniform());
  return claims - c.gaps;
}

void check_count(std::uint64_t n) {
  if (n == 0) fail(ErrorKind::invalid_parameter, "number of samples must be at least 1");
}

}  // namespace

MgfEstimate mc_mgf_x1(const ModelParams& params, double theta, std::uint64_t n, std::uint64_t seed) {
  params.validate();
  check_count(n);
  std::vector<double> values(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    PathRng rng(seed, i);
    values[i] = theta == 0.0 ? 1.0 : std::exp(theta * sample_x1(params, rng));
  }
  MgfEstimate e;
  const double nn = static_cast<double>(n);
  e.mean = compensated_sum(values) / nn;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - e.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= nn;
  m4 /= nn;
  e.std_error = n > 1 ? std::sqrt(m2 * nn / (nn - 1.0) / nn) : 0.0;
  e.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
  e.heavy_tail_warning = !std::isfinite(e.mean) || !std::isfinite(e.kurtosis) || e.kurtosis > 1e3;
  return e;
}

std::pair<double, double> mc_mean_x1(const ModelParams& params, std::uint64_t n, std::uint64_t seed) {
  params.validate();
  check_count(n);
  std::vector<double> values(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    PathRng rng(seed, i);
    values[i] = sample_x1(params, rng);
  }
  const double nn = static_cast<double>(n);
  const double mean = compensated_sum(values) / nn;
  double m2 = 0.0;
  for (double v : values) m2 += (v - mean) * (v - mean);
  const double se = n > 1 ? std::sqrt(m2 / (nn - 1.0) / nn) : 0.0;
  return {mean, se};
}

TailRatio mc_tail_ratio(const ModelParams& params, double x, std::uint64_t n, std::uint64_t seed,
                        TailMethod method) {
  params.validate();
  check_count(n);
  if (is_exponential(params.claims)) {
    fail(ErrorKind::wrong_regime, "tail ratio is defined for heavy-tailed claims");
  }
  if (!(x > 0.0 && std::isfinite(x))) fail(ErrorKind::invalid_parameter, "x must be positive");
  const double tail_x = claim_tail(params.claims, x);
  if (!(tail_x > 0.0)) fail(ErrorKind::invalid_parameter, "claim tail vanishes at x");

  std::vector<double> values(n);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    PathRng rng(seed, i);
    const CycleGaps c = sample_cycle_gaps(params, rng);
    if (method == TailMethod::crude) {
      double claims = 0.0;
      for (std::uint64_t k = 0; k < c.claims; ++k) {
        claims += claim_from_survival(params.claims, rng.uniform());
      }
      const bool hit = claims - c.gaps > x;
      hits += hit ? 1 : 0;
      values[i] = hit ? 1.0 / tail_x : 0.0;
    } else {
      // K P(Y_K > max(M, x + G - S) | first K - 1 claims), with M, S their max and sum
      double sum = 0.0;
      double max = 0.0;
      for (std::uint64_t k = 1; k < c.claims; ++k) {
        const double y = claim_from_survival(params.claims, rng.uniform());
        sum += y;
        max = std::max(max, y);
      }
      const double level = std::max(max, x + c.gaps - sum);
      values[i] = static_cast<double>(c.claims) * claim_tail(params.claims, level) / tail_x;
      hits += values[i] > 0.0 ? 1 : 0;
    }
  }
  TailRatio r;
  const double nn = static_cast<double>(n);
  r.ratio = compensated_sum(values) / nn;
  double m2 = 0.0;
  for (double v : values) m2 += (v - r.ratio) * (v - r.ratio);
  r.std_error = n > 1 ? std::sqrt(m2 / (nn - 1.0) / nn) : 0.0;
  r.hits = hits;
  r.low_information = hits == 0;
  return r;
}

}  // namespace bonusruin
