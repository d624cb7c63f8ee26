#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bonusruin/analytics.hpp"
#include "bonusruin/model.hpp"

namespace testing {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

inline Moments moments(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  const double mean = static_cast<double>(s / v.size());
  long double ss = 0.0L;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = static_cast<double>(ss / (v.size() - 1));
  return {mean, std::sqrt(var / v.size())};
}

/// Random exponential-claim model for which the net profit condition holds.
inline bonusruin::ModelParams random_npc_model(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double beta = 0.2 + 5.0 * u(gen);
    const double l1 = beta * (0.05 + 1.5 * u(gen));
    const double l2 = beta * (0.05 + 1.5 * u(gen));
    const double xi = 0.01 + 10.0 * u(gen) / beta;
    auto m = bonusruin::make_exponential_model(l1, l2, xi, beta);
    if (bonusruin::npc_margin(m) < -1e-3) return m;
  }
}

// xi at which the adjustment coefficient for (beta=3, lambda1=1, lambda2=2) equals target.
inline double xi_for_kappa(double target) {
  double lo = 0.001, hi = 0.2;  // kappa increases with xi on this bracket
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bonusruin::solve_kappa(bonusruin::make_exponential_model(1.0, 2.0, mid, 3.0)) < target ? lo : hi) =
        mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace testing
