#include <catch_amalgamated.hpp>

#include <cmath>

#include "bonusruin/analytics.hpp"
#include "bonusruin/errors.hpp"
#include "bonusruin/oracle.hpp"
#include "bonusruin/simulation.hpp"
#include "helpers.hpp"

using namespace bonusruin;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::invalid_parameter;
}

double max_gap_to_classical(const GridFunction& g, double lambda, double beta) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    worst = std::max(worst, std::abs(g.psi2[i] - classical_ruin(lambda, beta, g.grid[i])));
  }
  return worst;
}

}  // namespace

TEST_CASE("oracle reproduces the classical model under independence") {
  for (double xi : {0.3, 1.0, 4.0}) {
    const auto m = make_exponential_model(1.0, 1.0, xi, 3.0);
    const double h = default_oracle_step(m);
    const GridFunction g = solve_integral_equations(m, 10.0, h, 1e-10);
    CHECK(g.residual < 1e-10);
    CHECK(max_gap_to_classical(g, 1.0, 3.0) <= std::max(1e-10, 10.0 * h));
    CHECK(max_gap_to_classical(g, 1.0, 3.0) < 1e-4);
    for (std::size_t i = 0; i < g.grid.size(); ++i) {
      CHECK_THAT(g.psi1[i], WithinAbs(g.psi2[i], 1e-4));
    }
  }
}

TEST_CASE("a vanishing window gives the classical curve at the long-gap rate") {
  const auto m = make_exponential_model(1.0, 2.0, 1e-6, 3.0);
  const GridFunction g = solve_integral_equations(m, 10.0, default_oracle_step(m), 1e-10);
  CHECK(max_gap_to_classical(g, 2.0, 3.0) < 5e-4);
}

TEST_CASE("oracle curves are monotone probabilities") {
  const auto m = make_exponential_model(1.0, 2.0, 1.0, 3.0);
  const GridFunction g = solve_integral_equations(m, 12.0, default_oracle_step(m), 1e-10);
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    CHECK(g.psi1[i] >= 0.0);
    CHECK(g.psi2[i] <= 1.0);
    if (i > 0) {
      CHECK(g.psi1[i] <= g.psi1[i - 1]);
      CHECK(g.psi2[i] <= g.psi2[i - 1]);
    }
  }
  // a short previous gap means a slow next gap, hence less ruin
  CHECK(g.psi1_at(0.0) < g.psi2_at(0.0));
  CHECK(kind_of([&] { g.psi2_at(13.0); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("oracle agrees with crude simulation") {
  const auto m = make_exponential_model(1.0, 2.0, 1.0, 3.0);
  CrudeOptions o;
  o.horizon = 1e4;
  o.escape_margin = 40.0;
  const double xs[] = {0.0, 1.0, 2.0, 5.0};
  const auto crude = crude_mc_ruin_grid(m, xs, 300000, 19, o);
  for (std::size_t i = 0; i < 4; ++i) {
    const OracleValue v = oracle_ruin(m, xs[i]);
    CHECK(std::abs(v.psi - crude[i].estimate) < 3.0 * crude[i].std_error + v.grid_error);
  }
}

TEST_CASE("oracle is second order in the grid step") {
  const auto m = make_exponential_model(1.0, 2.0, 1.0, 3.0);
  double values[3];
  const double steps[] = {0.04, 0.02, 0.01};
  for (int k = 0; k < 3; ++k) {
    values[k] = solve_integral_equations(m, 8.0, steps[k], 1e-11).psi2_at(0.0);
  }
  const double ratio = (values[0] - values[1]) / (values[1] - values[2]);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
  const OracleValue v = oracle_ruin(m, 0.0);
  CHECK(v.grid_error > 0.0);
  CHECK(v.grid_error < 5e-4);
}

TEST_CASE("oracle failure modes") {
  const auto m = make_exponential_model(1.0, 2.0, 1.0, 3.0);
  OracleOptions few;
  few.max_iter = 5;
  CHECK(kind_of([&] { solve_integral_equations(m, 10.0, 0.02, 1e-10, few); }) ==
        ErrorKind::oracle_diverged);
  CHECK(kind_of([&] { solve_integral_equations(m, 10.0, 0.0, 1e-10); }) ==
        ErrorKind::invalid_parameter);
  const auto bad = make_exponential_model(2.0, 2.0, 1.0, 1.0);
  CHECK(kind_of([&] { solve_integral_equations(bad, 10.0, 0.02, 1e-10); }) ==
        ErrorKind::invalid_parameter);
}

TEST_CASE("simulated cycle m.g.f.") {
  const auto m = make_exponential_model(1.0, 2.0, 1.0, 3.0);
  const MgfEstimate zero = mc_mgf_x1(m, 0.0, 5000, 3);
  CHECK(zero.mean == 1.0);
  CHECK(zero.std_error == 0.0);

  const auto w = make_exponential_model(1.0, 2.0, testing::xi_for_kappa(1.1439), 3.0);
  const MgfEstimate at_kappa = mc_mgf_x1(w, solve_kappa(w), 1000000, 4);
  CHECK(std::abs(at_kappa.mean - 1.0) < 3.0 * at_kappa.std_error);
  // 4 kappa > beta: the fourth moment is infinite and the sample kurtosis shows it
  CHECK(at_kappa.heavy_tail_warning);
  CHECK_FALSE(mc_mgf_x1(m, 0.3, 100000, 5).heavy_tail_warning);
}

TEST_CASE("simulated tail ratio") {
  // independence: the number of claims in a cycle is geometric with mean e^{lambda xi}
  const auto ind = make_pareto_model(0.3, 0.3, 2.0, 2.0, 2.0);
  const TailRatio a = mc_tail_ratio(ind, 1e5, 400000, 1);
  CHECK(std::abs(a.ratio - std::exp(0.6)) < 3.0 * a.std_error);

  const auto m = make_pareto_model(0.15, 0.45, 3.0, 2.0, 2.0);
  const double c = heavy_tail_constant(m);
  const TailRatio far = mc_tail_ratio(m, 1e5, 400000, 2);
  CHECK(std::abs(far.ratio - c) < 3.0 * far.std_error);
  // at x = 500 the ratio still carries an O(1/x) bias of about 3%
  const TailRatio near = mc_tail_ratio(m, 500.0, 400000, 2);
  CHECK_THAT(near.ratio, WithinRel(c, 0.05));
  CHECK(near.ratio < c);

  const auto tiny = make_pareto_model(0.15, 0.45, 1e-6, 2.0, 2.0);
  CHECK_THAT(mc_tail_ratio(tiny, 1e5, 100000, 3).ratio, WithinAbs(1.0, 1e-3));

  const TailRatio crude = mc_tail_ratio(m, 1e4, 20000, 4, TailMethod::crude);
  CHECK(crude.hits == 0);
  CHECK(crude.low_information);

  CHECK(kind_of([] { mc_tail_ratio(make_exponential_model(1.0, 2.0, 1.0, 3.0), 10.0, 10, 1); }) ==
        ErrorKind::wrong_regime);
}
