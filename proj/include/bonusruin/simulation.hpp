#pragma once

// Exact event-driven simulation of the surplus process and crude Monte Carlo
// estimation of finite-horizon ruin probabilities.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "bonusruin/estimate.hpp"
#include "bonusruin/model.hpp"
#include "bonusruin/rng.hpp"

namespace bonusruin {

/// Surplus process between claims. The surplus is always recomputed as
/// (initial + clock) - claims, so the bookkeeping identity holds exactly.
struct PathState {
  double initial = 0.0;
  double clock = 0.0;
  double claims = 0.0;
  double surplus = 0.0;
  StateLabel state = StateLabel::long_gap;
  std::uint64_t steps = 0;
  std::uint64_t rng_cursor = 0;

  static PathState start(double reserve, StateLabel initial_state) noexcept;

  /// Claim surplus S = claims - clock; ruin iff S > initial reserve.
  double claim_surplus() const noexcept { return claims - clock; }
};

/// One inter-claim gap plus one claim. Consumes exactly two uniforms (gap, then claim).
PathState step_path(const PathState& state, const ModelParams& params, PathRng& rng);

struct CrudeOptions {
  double horizon = 1e4;
  StateLabel initial_state = StateLabel::long_gap;
  /// Paths stop as survivors once the surplus sits this far above every
  /// still-unruined reserve level. Infinity disables the cut.
  double escape_margin = std::numeric_limits<double>::infinity();
  unsigned threads = 0;
};

/// Largest claim surplus reached at claim instants before the horizon, per path.
/// Ruin from reserve x happened on path i iff maxima[i] > x (checked only for x in `levels`).
std::vector<double> simulate_path_maxima(const ModelParams& params, std::span<const double> levels,
                                         std::uint64_t n, std::uint64_t seed,
                                         const CrudeOptions& options);

RuinEstimate crude_mc_ruin(const ModelParams& params, double x, std::uint64_t n,
                           std::uint64_t seed, const CrudeOptions& options = {});

/// One estimate per reserve level from a single set of paths.
std::vector<RuinEstimate> crude_mc_ruin_grid(const ModelParams& params, std::span<const double> xs,
                                             std::uint64_t n, std::uint64_t seed,
                                             const CrudeOptions& options = {});

struct SweepRow {
  double x = 0.0;
  double xi = 0.0;
  RuinEstimate estimate;
};

struct SweepResult {
  std::vector<double> xs;
  std::vector<double> xis;
  std::vector<SweepRow> rows;                   ///< x-major, then xi
  std::vector<std::vector<double>> maxima;      ///< maxima[xi index][path]

  const SweepRow& at(std::size_t x_index, std::size_t xi_index) const {
    return rows[x_index * xis.size() + xi_index];
  }

  /// Paired (common random numbers) difference est(xi_b) - est(xi_a) at level x
  /// with its standard error.
  std::pair<double, double> paired_difference(std::size_t x_index, std::size_t xi_a,
                                              std::size_t xi_b) const;
};

/// xi sweep with common random numbers: path i reuses the same uniform stream
/// for every xi, so only the state classification differs between columns.
SweepResult xi_sweep(const ModelParams& base, std::span<const double> xs, std::span<const double> xis,
                     std::uint64_t n, std::uint64_t seed, const CrudeOptions& options = {});

}  // namespace bonusruin
