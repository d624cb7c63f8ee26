#pragma once

// Independent checks: the integral equations for psi_1, psi_2 solved on a grid,
// and brute-force cycle sampling for the m.g.f. of X1 and its tail.

#include <cstdint>
#include <vector>

#include "bonusruin/model.hpp"

namespace bonusruin {

struct GridFunction {
  double h = 0.0;
  std::vector<double> grid;
  std::vector<double> psi1;  ///< first gap ~ Exp(lambda1)
  std::vector<double> psi2;  ///< first gap ~ Exp(lambda2)
  double residual = 0.0;     ///< sup-norm change of the last sweep
  std::size_t iterations = 0;

  /// Linear interpolation; x must lie in [0, grid.back()].
  double psi1_at(double x) const;
  double psi2_at(double x) const;
};

struct OracleOptions {
  std::size_t max_iter = 200000;
  double tail_quadrature_span = 40.0;  ///< in units of 1/lambda
  int tail_quadrature_intervals = 400;
};

GridFunction solve_integral_equations(const ModelParams& params, double x_max, double h,
                                      double tol, const OracleOptions& options = {});

/// Grid step 0.02 mean claims and upper end x + 20 mean claims.
double default_oracle_step(const ModelParams& params);
double default_oracle_x_max(const ModelParams& params, double x_query);

/// psi on the default grid together with a discretisation error estimate from a 2h solve.
struct OracleValue {
  double psi = 0.0;
  double grid_error = 0.0;
  double residual = 0.0;
};
OracleValue oracle_ruin(const ModelParams& params, double x, double tol = 1e-10,
                        StateLabel initial = StateLabel::long_gap);

struct MgfEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double kurtosis = 0.0;
  bool heavy_tail_warning = false;
};

/// Sample mean of e^{theta X1} over n directly simulated cycles.
MgfEstimate mc_mgf_x1(const ModelParams& params, double theta, std::uint64_t n, std::uint64_t seed);

enum class TailMethod { conditional, crude };

struct TailRatio {
  double ratio = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;  ///< crude method only
  bool low_information = false;
};

/// Estimate of P(X1 > x) / P(Y > x). The conditional method integrates out the
/// largest claim analytically; crude counts exceedances.
TailRatio mc_tail_ratio(const ModelParams& params, double x, std::uint64_t n, std::uint64_t seed,
                        TailMethod method = TailMethod::conditional);

/// Sample mean of X1 with its standard error.
std::pair<double, double> mc_mean_x1(const ModelParams& params, std::uint64_t n, std::uint64_t seed);

}  // namespace bonusruin
