#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bounds.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "support/test_models.hpp"

using namespace tfwl;
using namespace tfwl::testing;

namespace {

// independent extended-precision reimplementation (the test oracle)
long double gamma_ld(long double C, int R, long double lambda, long double beta, int d) {
  const long double env = std::max<long double>(1.0L, beta * lambda);
  return expl(-2.0L * beta * C) - 5.0L * env * powl(2.0L * R, d) * expm1l(3.0L * beta * C);
}

long double n_ld(int R, int d) {
  const int Reff = std::max(R, 1);
  return powl(2.0L / -expm1l(-1.0L / Reff), d);
}

long double m_ld(long double C, long double lambda, long double beta) {
  return 10.0L * std::max<long double>(1.0L, lambda * beta) * expl(beta * C + 1.0L);
}

long double delta_ld(long double C, int R, long double lambda, long double beta, int d) {
  const int Reff = std::max(R, 1);
  return (1.0L / (2.0L * Reff)) *
         std::min<long double>(0.5L, gamma_ld(C, R, lambda, beta, d) / m_ld(C, lambda, beta));
}

bool rel_close(double a, long double b, double tol) {
  const long double diff = fabsl(static_cast<long double>(a) - b);
  const long double scale = std::max<long double>(fabsl(b), fabsl(a));
  if (scale == 0.0L) return diff == 0.0L;
  return diff <= tol * scale;
}

}  // namespace

TEST_CASE("gap bound collapses to one without interactions or temperature") {
  CHECK(gap_lower_bound(0.0, 1, 2.0, 5.0, 3) == 1.0);
  CHECK(gap_lower_bound(3.0, 1, 2.0, 0.0, 2) == 1.0);
}

TEST_CASE("gap bound reference value") {
  const double g = gap_lower_bound(2.0, 1, 1.0, 0.01, 1);
  CHECK(g == doctest::Approx(0.3424).epsilon(2e-4));
  CHECK(rel_close(g, gamma_ld(2.0L, 1, 1.0L, 0.01L, 1), 1e-12));
}

TEST_CASE("decay and propagation constants reference values") {
  SUBCASE("N in one and two dimensions") {
    auto c1 = finite_speed_constants(0.0, 1, 1.0, 1.0, 1);
    CHECK(c1.N == doctest::Approx(3.16395).epsilon(1e-5));
    auto c2 = finite_speed_constants(0.0, 1, 1.0, 1.0, 2);
    CHECK(c2.N == doctest::Approx(c1.N * c1.N).epsilon(1e-12));
  }
  SUBCASE("delta at zero coupling") {
    auto dc = decay_constants(0.0, 1, 1.0, 1.0, 1);
    CHECK(dc.delta == doctest::Approx(1.0 / (20.0 * std::exp(1.0))).epsilon(1e-13));
  }
  SUBCASE("M scale") {
    auto a = finite_speed_constants(0.0, 1, 1.0, 1.0, 1);
    CHECK(a.M == doctest::Approx(10.0 * std::exp(1.0)).epsilon(1e-13));
    auto b = finite_speed_constants(0.0, 1, 3.0, 1.0, 1);
    CHECK(b.M == doctest::Approx(30.0 * std::exp(1.0)).epsilon(1e-13));
    CHECK(a.epsilon == 0.5);
  }
}

TEST_CASE("double evaluation matches extended precision on a random grid") {
  Rng rng(77);
  int checked = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const double C = rng.uniform() * 3.0;
    const int R = 1 + rng.uniform_int(3);
    const double lambda = rng.uniform() * 2.0;
    const double beta = std::pow(10.0, rng.uniform(-4, 0));
    const int d = 1 + rng.uniform_int(3);
    const double g = gap_lower_bound(C, R, lambda, beta, d);
    const long double gl = gamma_ld(C, R, lambda, beta, d);
    // skip points too close to the root of gamma, where the subtraction
    // amplifies the last ulp beyond any fixed relative tolerance
    if (fabsl(gl) < 1e-6L * expl(3.0L * beta * C)) continue;
    ++checked;
    CHECK(rel_close(g, gl, 1e-12));
    auto f = finite_speed_constants(C, R, lambda, beta, d);
    CHECK(rel_close(f.N, n_ld(R, d), 1e-12));
    CHECK(rel_close(f.M, m_ld(C, lambda, beta), 1e-12));
    CHECK(f.epsilon == 1.0 / (2.0 * R));
    if (gl > 0.0L) {
      auto dc = decay_constants(C, R, lambda, beta, d);
      CHECK(rel_close(dc.delta, delta_ld(C, R, lambda, beta, d), 1e-12));
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("gamma decreases in beta and tends to one at high temperature") {
  const double C = 4.0, lambda = 1.0;
  double prev = gap_lower_bound(C, 1, lambda, 1e-6, 1);
  for (int k = 1; k < 100; ++k) {
    const double beta = 1e-6 + k * (1.0 - 1e-6) / 99;
    const double g = gap_lower_bound(C, 1, lambda, beta, 1);
    CHECK(g < prev);
    prev = g;
  }
  CHECK(gap_lower_bound(C, 1, lambda, 1e-9, 1) > 1.0 - 1e-6);
}

TEST_CASE("nonpositive gamma invalidates the decay constants") {
  // beta large enough that the bound is vacuous
  CHECK(gap_lower_bound(4.0, 1, 1.0, 0.5, 1) < 0.0);
  CHECK_THROWS_AS(decay_constants(4.0, 1, 1.0, 0.5, 1), InvalidInput);
}

TEST_CASE("field-only models keep a positive gap at every temperature") {
  Model m = make_single_site(0.3, 0.8, 5.0);
  BoundsReport r = bounds_report(m);
  CHECK(r.R == 0);
  CHECK(r.gamma == doctest::Approx(std::exp(-2.0 * 5.0 * 0.6)).epsilon(1e-13));
  CHECK(r.gap_positive);
  // R = 0 evaluates N, delta, epsilon with R <- 1
  CHECK(r.N_decay == doctest::Approx(2.0 / (1.0 - std::exp(-1.0))).epsilon(1e-12));
  CHECK(r.epsilon == 0.5);
}

TEST_CASE("decay bound structure") {
  Model m = make_chain(8, 1.0, 1.0, 0.004);
  BoundsReport r = bounds_report(m);
  REQUIRE(r.gap_positive);
  Observable s0 = sigma_obs(m, 0);
  SUBCASE("zero distance drops the exponential") {
    const double b = decay_bound(m, s0, s0);
    CHECK(b == doctest::Approx(1.0 + 4.0 * r.N_decay).epsilon(1e-12));
  }
  SUBCASE("single-site pair at distance D") {
    for (int dpos = 1; dpos < 7; ++dpos) {
      const double b = decay_bound(m, s0, sigma_obs(m, dpos));
      CHECK(b ==
            doctest::Approx((1.0 + 4.0 * r.N_decay) * std::exp(-r.delta * dpos)).epsilon(1e-12));
    }
  }
  SUBCASE("doubling the distance multiplies by the exponential factor") {
    const double b2 = decay_bound(m, s0, sigma_obs(m, 2));
    const double b4 = decay_bound(m, s0, sigma_obs(m, 4));
    CHECK(b4 == doctest::Approx(b2 * std::exp(-r.delta * 2)).epsilon(1e-12));
  }
  SUBCASE("translation invariance") {
    CHECK(decay_bound(m, sigma_obs(m, 1), sigma_obs(m, 4)) ==
          doctest::Approx(decay_bound(m, sigma_obs(m, 2), sigma_obs(m, 5))).epsilon(1e-14));
  }
  SUBCASE("effective support drives the distance") {
    // declared on {0,1} but constant in site 1
    Observable f =
        Observable::from_table(m.lattice(), {0, 1}, {1.0, -1.0, 1.0, -1.0}, "wide");
    CHECK(decay_bound(m, f, sigma_obs(m, 3)) ==
          doctest::Approx(decay_bound(m, s0, sigma_obs(m, 3))).epsilon(1e-14));
  }
}

TEST_CASE("decay bound rejects vacuous or degenerate inputs") {
  Model hot = make_chain(4, 1.0, 1.0, 0.5);  // gamma < 0 here
  CHECK_FALSE(bounds_report(hot).gap_positive);
  CHECK_THROWS_AS(decay_bound(hot, sigma_obs(hot, 0), sigma_obs(hot, 1)), InvalidInput);

  Model m = make_chain(4, 1.0, 1.0, 0.004);
  Observable c = Observable::from_table(m.lattice(), {0}, {3.0, 3.0}, "const");
  CHECK_THROWS_AS(decay_bound(m, c, sigma_obs(m, 1)), InvalidInput);
}

TEST_CASE("exact correlations obey the decay bound on small cold chains") {
  for (int n : {4, 6}) {
    Model m = make_chain(n, 1.0, 1.0, 0.004);
    REQUIRE(bounds_report(m).gap_positive);
    ThermalSolution sol = solve_thermal(m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double corr =
            thermal_truncated_correlation(sol, sigma_obs(m, i), sigma_obs(m, j));
        const double bound = decay_bound(m, sigma_obs(m, i), sigma_obs(m, j));
        CHECK(std::abs(corr) <= bound + 1e-12);
      }
  }
}
