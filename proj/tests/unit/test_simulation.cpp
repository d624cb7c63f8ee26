#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bonusruin/analytics.hpp"
#include "bonusruin/errors.hpp"
#include "bonusruin/simulation.hpp"

using namespace bonusruin;
using Catch::Matchers::WithinAbs;

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

}  // namespace

TEST_CASE("surplus bookkeeping is exact") {
  const auto m = make_exponential_model(1.0, 2.0, 1.0, 3.0);
  PathRng rng(99, 3);
  PathState s = PathState::start(2.5, StateLabel::long_gap);
  for (int i = 0; i < 10000; ++i) {
    const PathState prev = s;
    s = step_path(s, m, rng);
    CHECK(s.surplus == (s.initial + s.clock) - s.claims);
    CHECK(s.steps == prev.steps + 1);
    CHECK(s.clock > prev.clock);
    CHECK(s.claims > prev.claims);
    CHECK(s.rng_cursor == prev.rng_cursor + 2);
    CHECK(s.state == classify_gap(s.clock - prev.clock, m.xi));
  }
}

TEST_CASE("crude estimates do not depend on the thread count") {
  const auto m = make_exponential_model(1.0, 2.0, 1.0, 3.0);
  CrudeOptions one;
  one.threads = 1;
  one.horizon = 200.0;
  CrudeOptions four = one;
  four.threads = 4;
  const auto a = crude_mc_ruin(m, 1.0, 20000, 42, one);
  const auto b = crude_mc_ruin(m, 1.0, 20000, 42, four);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  CHECK(a.n_ruined == b.n_ruined);
  const auto c = crude_mc_ruin(m, 1.0, 20000, 43, one);
  CHECK(c.n_ruined != a.n_ruined);
}

TEST_CASE("independence matches the classical ruin function") {
  const auto m = make_exponential_model(0.3, 0.3, 1.0, 0.5);
  CrudeOptions o;
  o.horizon = 1e4;
  o.escape_margin = 100.0;  // leftover ruin mass below e^{-0.2 * 100}
  const auto e = crude_mc_ruin(m, 10.0, 100000, 7, o);
  const double exact = classical_ruin(0.3, 0.5, 10.0);
  CHECK_THAT(exact, WithinAbs(0.6 * std::exp(-2.0), 1e-15));
  CHECK(std::abs(e.estimate - exact) < 3.0 * e.std_error);
  CHECK(e.horizon.has_value());
  CHECK(*e.horizon == 1e4);
}

TEST_CASE("the escape cut changes nothing once paths have left every level") {
  const auto m = make_exponential_model(1.0, 2.0, 1.0, 3.0);
  CrudeOptions full;
  full.horizon = 300.0;
  CrudeOptions cut = full;
  cut.escape_margin = 40.0;
  const double xs[] = {0.0, 1.0, 2.0};
  const auto a = crude_mc_ruin_grid(m, xs, 20000, 5, full);
  const auto b = crude_mc_ruin_grid(m, xs, 20000, 5, cut);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a[i].n_ruined == b[i].n_ruined);
}

TEST_CASE("unreachable reserves give zero with a low-information flag") {
  const auto m = make_exponential_model(1.0, 2.0, 1.0, 3.0);
  CrudeOptions o;
  o.horizon = 100.0;
  const auto e = crude_mc_ruin(m, 1000.0, 2000, 1, o);
  CHECK(e.estimate == 0.0);
  CHECK(e.n_ruined == 0);
  CHECK(e.low_information);
  CHECK(e.ci_lo == 0.0);
}

TEST_CASE("invalid simulation inputs") {
  const auto m = make_exponential_model(1.0, 2.0, 1.0, 3.0);
  CHECK(kind_of([&] { crude_mc_ruin(m, 1.0, 0, 1); }) == ErrorKind::invalid_parameter);
  CHECK(kind_of([&] { crude_mc_ruin(m, -1.0, 10, 1); }) == ErrorKind::invalid_parameter);
  CrudeOptions o;
  o.horizon = 0.0;
  CHECK(kind_of([&] { crude_mc_ruin(m, 1.0, 10, 1, o); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("ruin probability falls in the reserve") {
  const auto m = make_exponential_model(0.15, 0.45, 3.0, 0.5);
  CrudeOptions o;
  o.horizon = 1e4;
  o.escape_margin = 300.0;
  const double xs[] = {0.0, 10.0, 20.0, 40.0};
  const auto e = crude_mc_ruin_grid(m, xs, 20000, 11, o);
  for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i].n_ruined <= e[i - 1].n_ruined);
}

TEST_CASE("CRN sweep orders ruin in xi") {
  // a longer window keeps more gaps on the slow rate lambda1 = 0.15
  const auto base = make_exponential_model(0.15, 0.45, 1.0, 0.5);
  CrudeOptions o;
  o.horizon = 1e4;
  o.escape_margin = 300.0;
  const double xs[] = {10.0, 30.0};
  const double xis[] = {0.5, 3.0, 20.0};
  const SweepResult r = xi_sweep(base, xs, xis, 20000, 3, o);
  REQUIRE(r.rows.size() == 6);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 1; k < 3; ++k) {
      const auto [diff, se] = r.paired_difference(i, k - 1, k);
      CHECK(diff < 3.0 * se);
      const double unpaired = std::hypot(r.at(i, k).estimate.std_error, r.at(i, k - 1).estimate.std_error);
      if (i == 0) CHECK(se < unpaired);
    }
  }
  const auto [diff, se] = r.paired_difference(0, 0, 2);
  CHECK(diff < -3.0 * se);
}

TEST_CASE("equal rates give a flat sweep") {
  const auto base = make_exponential_model(0.3, 0.3, 1.0, 0.5);
  CrudeOptions o;
  o.horizon = 2000.0;
  const double xs[] = {0.0, 5.0};
  const double xis[] = {0.1, 1.0, 10.0};
  const SweepResult r = xi_sweep(base, xs, xis, 5000, 8, o);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.at(i, 0).estimate.estimate == r.at(i, 1).estimate.estimate);
    CHECK(r.at(i, 1).estimate.estimate == r.at(i, 2).estimate.estimate);
  }
}
