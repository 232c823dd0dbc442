#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "rng.hpp"
#include "support/test_models.hpp"
#include "verify.hpp"
#include "worldline.hpp"

using namespace tfwl;
using namespace tfwl::testing;

namespace {

SiteWorldline make_site(std::vector<double> xi, std::vector<double> eta, int rho) {
  SiteWorldline w;
  for (double t : xi) w.events.push_back({t, true});
  for (double t : eta) w.events.push_back({t, false});
  std::sort(w.events.begin(), w.events.end(),
            [](const MarkedPoint& a, const MarkedPoint& b) { return a.time < b.time; });
  w.rho = static_cast<int8_t>(rho);
  return w;
}

}  // namespace

TEST_CASE("coloring an empty site is the constant rho") {
  auto arcs = color_site(make_site({}, {}, -1), 2.0);
  REQUIRE(arcs.size() == 1);
  CHECK(arcs[0].spin == -1);
  CHECK(arcs[0].length == 2.0);
}

TEST_CASE("a single labeled point colors the whole circle with its label") {
  const double beta = 1.0;
  auto arcs = color_site(make_site({0.3}, {}, -1), beta);
  REQUIRE(arcs.size() == 1);
  CHECK(arcs[0].spin == 1);  // independent of rho
  CHECK(arcs[0].length == doctest::Approx(beta).epsilon(1e-15));
}

TEST_CASE("two points color the two arcs by their right endpoints") {
  const double beta = 1.0;
  const double a = 0.2, b = 0.7;
  auto w = make_site({a}, {b}, 1);
  auto arcs = color_site(w, beta);
  REQUIRE(arcs.size() == 2);
  // value on [a, b) is the label of b (eta -> -1); on [b, a) the label of a
  CHECK(arcs[0].start == a);
  CHECK(arcs[0].spin == -1);
  CHECK(arcs[1].start == b);
  CHECK(arcs[1].spin == 1);

  CHECK(w.spin_at(0.5 * (a + b)) == -1);
  CHECK(w.spin_at(0.9) == 1);
  CHECK(w.spin_at(0.0) == 1);
  // right-continuity at a point: value jumps to the next arc
  CHECK(w.spin_at(a) == -1);
  CHECK(w.spin_at(b) == 1);
}

TEST_CASE("arcs always partition the circle") {
  Rng rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    const double beta = 0.25 + rng.uniform() * 3.0;
    SiteWorldline w;
    const int k = rng.uniform_int(6);
    for (int i = 0; i < k; ++i)
      w.events.push_back({rng.uniform() * beta, rng.bernoulli(0.5)});
    std::sort(w.events.begin(), w.events.end(),
              [](const MarkedPoint& a, const MarkedPoint& b) { return a.time < b.time; });
    bool distinct = true;
    for (size_t i = 0; i + 1 < w.events.size(); ++i)
      if (w.events[i].time == w.events[i + 1].time) distinct = false;
    if (!distinct) continue;
    w.rho = static_cast<int8_t>(rng.sign());
    auto arcs = color_site(w, beta);
    double total = 0.0;
    for (const auto& arc : arcs) {
      CHECK(arc.length > 0.0);
      total += arc.length;
    }
    CHECK(total == doctest::Approx(beta).epsilon(1e-12));
  }
}

TEST_CASE("sigma_at matches per-site coloring") {
  Model m = make_chain(3, 1.0, 1.0, 1.0);
  Config c = empty_config(m, 1);
  c.sites[1] = make_site({0.2}, {0.7}, 1);
  auto s = sigma_at(c, 0.5);
  CHECK(s[0] == 1);
  CHECK(s[1] == -1);
  CHECK(s[2] == 1);
  CHECK(sigma_at(c, 0.2)[1] == -1);  // right-continuous at the point itself
}

TEST_CASE("path energy of simple configurations") {
  SUBCASE("empty config, constant integrand") {
    Model m = make_chain(2, 1.0, 0.0, 0.8);  // H = -s0 s1, beta = 0.8
    Config c = empty_config(m, 1);
    CHECK(path_energy(m, c) == doctest::Approx(-0.8).epsilon(1e-14));
  }
  SUBCASE("single site with a flip pair") {
    const double beta = 1.3;
    ModelInput in;
    in.box = {1};
    in.beta = beta;
    in.fields = {0.0};
    in.terms.push_back({{{0}}, 0.3});
    Model m = Model::validate(in);
    Config c = empty_config(m, 1);
    const double a = 0.2 * beta, b = 0.6 * beta;  // sigma = -1 on [a, b)
    c.sites[0] = make_site({a}, {b}, 1);
    const double expected = 0.3 * (beta - 2 * (b - a));
    CHECK(path_energy(m, c) == doctest::Approx(expected).epsilon(1e-13));
  }
  SUBCASE("H == 0") {
    Model m = make_single_site(0.0, 1.0, 1.0);
    Config c = empty_config(m, -1);
    c.sites[0] = make_site({0.1, 0.4}, {0.8}, 1);
    CHECK(path_energy(m, c) == 0.0);
  }
}

TEST_CASE("move delta special cases") {
  Model m = make_single_site(0.3, 1.0, 1.0);
  SUBCASE("flip with points present is free") {
    Config c = empty_config(m, 1);
    c.sites[0] = make_site({0.25}, {}, 1);
    CHECK(move_delta(m, c, {MoveKind::Flip, 0, 0.0}) == 0.0);
  }
  SUBCASE("adding a like-colored point to an empty site is free") {
    Config c = empty_config(m, 1);
    CHECK(move_delta(m, c, {MoveKind::AddXi, 0, 0.4}) == 0.0);
  }
  SUBCASE("adding an opposite point recolors the whole circle") {
    Config c = empty_config(m, -1);
    // whole circle flips -1 -> +1 under H = 0.3 sigma: delta = 0.6 beta
    CHECK(move_delta(m, c, {MoveKind::AddXi, 0, 0.4}) == doctest::Approx(0.6).epsilon(1e-13));
  }
}

TEST_CASE("apply/remove are inverse and flips are involutions") {
  Model m = make_chain(3, 1.0, 1.0, 1.0);
  Rng rng(17);
  Config c = random_probe_config(m, rng);
  Move add{MoveKind::AddEta, 1, 0.37};
  Config c2 = apply_move(c, add, m.beta());
  Config c3 = apply_move(c2, {MoveKind::RemoveEta, 1, 0.37}, m.beta());
  CHECK(c3 == c);
  Config f2 = apply_move(apply_move(c, {MoveKind::Flip, 2, 0}, m.beta()), {MoveKind::Flip, 2, 0},
                         m.beta());
  CHECK(f2 == c);
  Config a = apply_move(empty_config(m, 1), {MoveKind::AddXi, 1, 0.25}, m.beta());
  CHECK(a.sites[1].xi_times() == std::vector<double>{0.25});
}

TEST_CASE("inapplicable moves are rejected") {
  Model m = make_chain(2, 1.0, 1.0, 1.0);
  Config c = empty_config(m, 1);
  CHECK_THROWS_AS(apply_move(c, {MoveKind::RemoveXi, 0, 0.5}, m.beta()), InvalidInput);
  Config c1 = apply_move(c, {MoveKind::AddXi, 0, 0.5}, m.beta());
  CHECK_THROWS_AS(apply_move(c1, {MoveKind::AddEta, 0, 0.5}, m.beta()), InvalidInput);
  CHECK_THROWS_AS(apply_move(c1, {MoveKind::RemoveEta, 0, 0.5}, m.beta()), InvalidInput);
  CHECK_THROWS_AS(move_delta(m, c1, {MoveKind::RemoveEta, 0, 0.5}), InvalidInput);
}

TEST_CASE("local increments match global recomputation on random probes") {
  Rng rng(99);
  // a mix of models: chains with fields, nonuniform couplings, periodic
  std::vector<Model> models;
  models.push_back(make_chain(4, 1.0, 0.9, 1.1, 0.3));
  models.push_back(make_chain(6, -0.7, 0.5, 0.6, 0.0, true));
  models.push_back(make_single_site(0.3, 0.8, 2.0));
  for (const Model& m : models) {
    const double bc = m.beta() * m.constants().C;
    for (int rep = 0; rep < 350; ++rep) {
      Config c = random_probe_config(m, rng);
      Move mv = random_probe_move(m, c, rng);
      const double local = move_delta(m, c, mv);
      const double global = path_energy(m, apply_move(c, mv, m.beta())) - path_energy(m, c);
      CHECK(std::abs(local - global) <=
            1e-10 * std::max({1.0, std::abs(local), std::abs(global)}));
      CHECK(std::abs(local) <= bc + 1e-12);
    }
  }
}

TEST_CASE("moves on distinct sites commute exactly") {
  Rng rng(123);
  Model m = make_chain(5, 1.2, 0.8, 0.9, 0.2);
  for (int rep = 0; rep < 300; ++rep) {
    Config c = random_probe_config(m, rng);
    Move g = random_probe_move(m, c, rng);
    Move d = random_probe_move(m, c, rng);
    if (g.site == d.site) continue;
    Config gd = apply_move(apply_move(c, g, m.beta()), d, m.beta());
    Config dg = apply_move(apply_move(c, d, m.beta()), g, m.beta());
    CHECK(gd == dg);
  }
}

TEST_CASE("multiplicity weight counts empty sites") {
  Model m = make_chain(3, 1.0, 1.0, 1.0);
  Config c = empty_config(m, 1);
  CHECK(multiplicity_log_weight(c) == doctest::Approx(3 * std::log(2.0)).epsilon(1e-15));
  apply_move_inplace(c, {MoveKind::AddXi, 1, 0.5}, m.beta());
  CHECK(multiplicity_log_weight(c) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-15));
}
