// Acceptance suite: one pass/fail line per criterion, exit 0 only if every
// hard criterion passes. Criterion 8 is statistical-soft by design: a failure
// is reported distinctly and triggers investigation, not rejection.
//
// Run with --only <k> to execute a single criterion while debugging.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "dynamics.hpp"
#include "estimators.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "support/test_models.hpp"
#include "verify.hpp"

using namespace tfwl;
using namespace tfwl::testing;

namespace {

bool g_verbose = true;

struct Criterion {
  int id;
  const char* title;
  bool pass = true;
  bool soft = false;
  int checks = 0;
  int failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = what;
      if (g_verbose) std::printf("      FAILED: %s\n", what.c_str());
      pass = false;
    }
  }
};

struct GridModel {
  Model model;
  std::string name;
  bool chain;
};

std::vector<GridModel> criterion_grid() {
  std::vector<GridModel> out;
  char buf[96];
  for (double h : {0.0, 0.3})
    for (double lam : {0.5, 1.0})
      for (double beta : {0.2, 0.5, 1.0}) {
        std::snprintf(buf, sizeof(buf), "site(h=%.1f,lam=%.1f,beta=%.1f)", h, lam, beta);
        out.push_back({make_single_site(h, lam, beta), buf, false});
      }
  for (int n : {4, 6})
    for (double lam : {0.5, 1.0})
      for (double beta : {0.2, 0.5, 1.0}) {
        std::snprintf(buf, sizeof(buf), "chain(n=%d,lam=%.1f,beta=%.1f)", n, lam, beta);
        out.push_back({make_chain(n, 1.0, lam, beta), buf, true});
      }
  return out;
}

// --- criterion 1: representation correctness --------------------------------

struct RunBudget {
  double t_mean;
  double t_corr;
  int64_t n_is;
};

RunBudget budget_for(const GridModel& g) {
  const double beta = g.model.beta();
  if (!g.chain) return {120000.0, 90000.0, 160000};
  if (beta <= 0.25) return {95000.0, 60000.0, 140000};
  if (beta <= 0.55) return {150000.0, 50000.0, 340000};
  return {280000.0, 55000.0, 1500000};
}

void criterion_1(Criterion& c) {
  const double se_target = 5e-3;
  auto grid = criterion_grid();
  uint64_t model_idx = 0;
  for (const auto& g : grid) {
    ++model_idx;
    const Model& m = g.model;
    ThermalSolution sol = solve_thermal(m);
    Observable f = sigma_obs(m, 0);
    Observable gobs = g.chain ? sigma_obs(m, 1) : sigma_obs(m, 0);
    const double t_mean = thermal_expectation(sol, f);
    const double t_corr = thermal_truncated_correlation(sol, f, gobs);
    RunBudget budget = budget_for(g);

    McmcParams p;
    p.burn_in = 25.0;
    p.batch_count = 64;
    p.seed = derive_seed(1001, model_idx);
    p.run_length = budget.t_mean;
    auto est = run_mcmc(m, {f}, p);
    p.run_length = budget.t_corr;
    p.seed = derive_seed(2002, model_idx);
    Estimate corr = truncated_correlation(m, f, gobs, p);

    IsParams ip;
    ip.n_samples = budget.n_is;
    ip.seed = derive_seed(3003, model_idx);
    auto ie = importance_sampling(m, {f}, ip);
    ip.seed = derive_seed(4004, model_idx);
    Estimate ic = importance_correlation(m, f, gobs, ip);

    struct Row {
      const char* what;
      double est, se, truth;
    } rows[] = {
        {"mcmc mean", est[0].mean, est[0].std_error, t_mean},
        {"mcmc corr", corr.mean, corr.std_error, t_corr},
        {"is mean", ie[0].mean, ie[0].std_error, t_mean},
        {"is corr", ic.mean, ic.std_error, t_corr},
    };
    for (const auto& r : rows) {
      const double z = (r.est - r.truth) / r.se;
      if (g_verbose)
        std::printf("    %-28s %-9s est %+10.6f  truth %+10.6f  se %.2e  z %+5.2f\n",
                    g.name.c_str(), r.what, r.est, r.truth, r.se, z);
      c.expect(r.se <= se_target, g.name + " " + r.what + ": stderr above target");
      c.expect(std::abs(r.est - r.truth) <= 3.0 * r.se, g.name + " " + r.what + ": outside 3 sigma");
    }
  }
}

// --- criteria 2-4: probe suites ---------------------------------------------

void criterion_2(Criterion& c) {
  VerifyOptions o;
  o.trials = 1000;
  uint64_t k = 0;
  for (const auto& g : criterion_grid()) {
    o.seed = derive_seed(5005, ++k);
    CheckOutcome out = check_balance(g.model, o);
    if (g_verbose)
      std::printf("    %-28s balance max residual %.3e\n", g.name.c_str(), out.max_residual);
    c.expect(out.pass && out.max_residual < 1e-12, g.name + ": balance residual");
  }
}

void criterion_3(Criterion& c) {
  VerifyOptions o;
  o.trials = 1000;
  uint64_t k = 0;
  for (const auto& g : criterion_grid()) {
    if (!g.chain) continue;  // pair probes need at least two sites
    o.seed = derive_seed(6006, ++k);
    CheckOutcome rn = check_rn(g.model, o);
    CheckOutcome cm = check_commute(g.model, o);
    if (g_verbose)
      std::printf("    %-28s rn max residual %.3e (commute %s)\n", g.name.c_str(),
                  rn.max_residual, cm.pass ? "exact" : "VIOLATED");
    c.expect(rn.pass && rn.max_residual < 1e-12, g.name + ": rn/symmetry residual");
    c.expect(cm.pass, g.name + ": commutation");
  }
}

void criterion_4(Criterion& c) {
  VerifyOptions o;
  o.trials = 1000;
  uint64_t k = 0;
  for (const auto& g : criterion_grid()) {
    o.seed = derive_seed(7007, ++k);
    CheckOutcome out = check_locality(g.model, o);
    if (g_verbose)
      std::printf("    %-28s locality max residual %.3e\n", g.name.c_str(), out.max_residual);
    c.expect(out.pass && out.max_residual < 1e-10, g.name + ": local increment vs global");
  }
}

// --- criterion 5: closed-form constants -------------------------------------

long double gamma_ld(long double C, int R, long double lambda, long double beta, int d) {
  const long double env = std::max<long double>(1.0L, beta * lambda);
  return expl(-2.0L * beta * C) - 5.0L * env * powl(2.0L * R, d) * expm1l(3.0L * beta * C);
}
long double n_ld(int R, int d) { return powl(2.0L / -expm1l(-1.0L / std::max(R, 1)), d); }
long double m_ld(long double C, long double lambda, long double beta) {
  return 10.0L * std::max<long double>(1.0L, lambda * beta) * expl(beta * C + 1.0L);
}
long double delta_ld(long double C, int R, long double lambda, long double beta, int d) {
  return (1.0L / (2.0L * std::max(R, 1))) *
         std::min<long double>(0.5L, gamma_ld(C, R, lambda, beta, d) / m_ld(C, lambda, beta));
}
bool rel_close(double a, long double b, double tol) {
  const long double diff = fabsl(static_cast<long double>(a) - b);
  const long double scale = std::max<long double>(fabsl(b), fabsl(a));
  return scale == 0.0L ? diff == 0.0L : diff <= tol * scale;
}

void criterion_5(Criterion& c) {
  c.expect(gap_lower_bound(0.0, 1, 1.0, 2.0, 1) == 1.0, "gamma(C=0) == 1");
  c.expect(gap_lower_bound(2.0, 1, 1.0, 0.0, 1) == 1.0, "gamma(beta=0) == 1");
  c.expect(rel_close(gap_lower_bound(2.0, 1, 1.0, 0.01, 1), gamma_ld(2.0L, 1, 1.0L, 0.01L, 1), 1e-12),
           "gamma reference point");
  Rng rng(42);
  int checked = 0;
  for (int rep = 0; rep < 400; ++rep) {
    const double C = rng.uniform() * 3.0;
    const int R = 1 + rng.uniform_int(3);
    const double lambda = rng.uniform() * 2.0;
    const double beta = std::pow(10.0, rng.uniform(-4, 0));
    const int d = 1 + rng.uniform_int(3);
    const long double gl = gamma_ld(C, R, lambda, beta, d);
    if (fabsl(gl) < 1e-6L * expl(3.0L * beta * C)) continue;  // near the root of gamma
    ++checked;
    c.expect(rel_close(gap_lower_bound(C, R, lambda, beta, d), gl, 1e-12), "gamma vs long double");
    auto f = finite_speed_constants(C, R, lambda, beta, d);
    c.expect(rel_close(f.N, n_ld(R, d), 1e-12), "N vs long double");
    c.expect(rel_close(f.M, m_ld(C, lambda, beta), 1e-12), "M vs long double");
    c.expect(f.epsilon == 1.0 / (2.0 * R), "epsilon exact");
    if (gl > 0.0L) {
      auto dc = decay_constants(C, R, lambda, beta, d);
      c.expect(rel_close(dc.delta, delta_ld(C, R, lambda, beta, d), 1e-12), "delta vs long double");
      c.expect(rel_close(dc.N, n_ld(R, d), 1e-12), "N(decay) vs long double");
    }
  }
  c.expect(checked > 250, "enough grid points away from the gamma root");
  c.expect(gap_lower_bound(4.0, 1, 1.0, 1e-9, 1) > 1.0 - 1e-6, "gamma -> 1 as beta -> 0");

  for (auto [C, R] : {std::pair<double, int>{4.0, 1}, {0.6, 0}}) {
    double prev = gap_lower_bound(C, R, 1.0, 1e-6, 1);
    bool monotone = true;
    for (int k = 1; k < 100; ++k) {
      const double beta = 1e-6 + k * (1.0 - 1e-6) / 99;
      const double g = gap_lower_bound(C, R, 1.0, beta, 1);
      if (!(g < prev)) monotone = false;
      prev = g;
    }
    c.expect(monotone, "gamma strictly decreasing in beta (C > 0)");
  }
}

// --- criterion 6: decay-bound dominance --------------------------------------

Model make_rect_2x3(double lambda, double beta) {
  ModelInput in;
  in.box = {2, 3};
  in.beta = beta;
  in.fields.assign(6, lambda);
  auto bond = [&](int x0, int y0, int x1, int y1) {
    in.terms.push_back({{{x0, y0}, {x1, y1}}, -1.0});
  };
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y + 1 < 3; ++y) bond(x, y, x, y + 1);
  for (int y = 0; y < 3; ++y) bond(0, y, 1, y);
  return Model::validate(in);
}

void criterion_6(Criterion& c) {
  std::vector<std::pair<Model, std::string>> models;
  char buf[96];
  for (int n : {4, 6, 8})
    for (double lam : {0.5, 1.0})
      for (double beta : {0.003, 0.004}) {
        std::snprintf(buf, sizeof(buf), "cold-chain(n=%d,lam=%.1f,beta=%.3f)", n, lam, beta);
        models.push_back({make_chain(n, 1.0, lam, beta), buf});
      }
  for (double lam : {0.5, 1.0}) {
    std::snprintf(buf, sizeof(buf), "cold-2x3(lam=%.1f)", lam);
    models.push_back({make_rect_2x3(lam, 0.001), buf});
  }
  for (const auto& g : criterion_grid())
    if (!g.chain) models.push_back({g.model, g.name});

  for (const auto& [m, name] : models) {
    BoundsReport r = bounds_report(m);
    if (!r.gap_positive) {
      c.expect(false, name + ": expected a positive gap bound for this model set");
      continue;
    }
    ThermalSolution sol = solve_thermal(m);
    const int n = m.site_count();
    double worst_margin = 1e300;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Observable fi = sigma_obs(m, i), fj = sigma_obs(m, j);
        const double corr = thermal_truncated_correlation(sol, fi, fj);
        const double bound = decay_bound(m, fi, fj);
        worst_margin = std::min(worst_margin, bound - std::abs(corr));
        c.expect(std::abs(corr) <= bound + 1e-12, name + ": dominance violated");
      }
    if (g_verbose)
      std::printf("    %-32s gamma %.4f  worst (bound - |corr|) %.4e\n", name.c_str(), r.gamma,
                  worst_margin);
  }
}

// --- criterion 7: free-field factorization -----------------------------------

void criterion_7(Criterion& c) {
  ModelInput in;
  in.box = {3};
  in.beta = 2.0;
  in.fields = {1.0, 0.7, 0.4};
  Model m = Model::validate(in);

  VerifyOptions o;
  o.seed = 99;
  o.poisson_run_length = 12000.0;
  CheckOutcome out = check_poisson(m, o);
  if (g_verbose) std::printf("    poisson fits: %s\n", out.detail.c_str());
  c.expect(out.pass, "chi-square fit to Poisson(lambda beta / 2)");

  GridSeriesParams gp;
  gp.burn_in = 20.0;
  gp.run_length = 30000.0;
  gp.dt = 0.2;
  gp.seed = 100;
  auto series = chain_grid_series(m, sigma_obs(m, 0), gp);
  RateFit fit = autocorrelation_rate(series, gp.dt);
  if (g_verbose)
    std::printf("    sigma_0 rate %.4f +- %.4f (lags %d)\n", fit.rate, fit.std_error,
                fit.lags_used);
  c.expect(!fit.beyond_resolution, "rate fit resolvable");
  c.expect(fit.rate >= 1.0 - 2.0 * fit.std_error, "sigma_0 relaxation rate >= 1");
}

// --- criterion 8: mixing consistency (soft) ----------------------------------

void criterion_8(Criterion& c) {
  c.soft = true;
  struct Case {
    int n;
    double lam, beta;
  } cases[] = {{4, 1.0, 0.004}, {6, 0.5, 0.003}};
  for (const auto& k : cases) {
    Model m = make_chain(k.n, 1.0, k.lam, k.beta);
    BoundsReport r = bounds_report(m);
    c.expect(r.gamma > 0.3, "case has gamma > 0.3");
    for (int site : {0, k.n / 2}) {
      GridSeriesParams gp;
      gp.burn_in = 20.0;
      gp.run_length = 25000.0;
      gp.dt = 0.25;
      gp.seed = derive_seed(8008, static_cast<uint64_t>(site + 17 * k.n));
      auto series = chain_grid_series(m, sigma_obs(m, site), gp);
      RateFit fit = autocorrelation_rate(series, gp.dt);
      if (g_verbose)
        std::printf("    chain(n=%d,lam=%.1f,beta=%.3f) site %d: rate %.3f +- %.3f vs gamma %.3f\n",
                    k.n, k.lam, k.beta, site, fit.rate, fit.std_error, r.gamma);
      c.expect(!fit.beyond_resolution && fit.rate >= r.gamma - 2.0 * fit.std_error,
               "fitted relaxation rate under the gap bound");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--quiet")) g_verbose = false;
  }

  std::vector<Criterion> results;
  auto run = [&](int id, const char* title, auto&& fn) {
    if (only && only != id) return;
    Criterion c;
    c.id = id;
    c.title = title;
    std::printf("criterion %d: %s\n", id, title);
    std::fflush(stdout);
    fn(c);
    results.push_back(c);
  };

  run(1, "representation correctness: chain and importance estimates match the dense solver",
      criterion_1);
  run(2, "reversibility: pointwise detailed-balance residuals < 1e-12", criterion_2);
  run(3, "symmetry identities: swap symmetry and commutation exact, density-ratio residual < 1e-12",
      criterion_3);
  run(4, "locality: local increments match global path energies, |delta| <= beta*C", criterion_4);
  run(5, "closed-form constants match extended precision; limits and monotonicity", criterion_5);
  run(6, "decay bound dominates exact correlations wherever the gap bound is positive",
      criterion_6);
  run(7, "free field: Poisson occupation law and unit relaxation rate", criterion_7);
  run(8, "mixing consistency (soft): relaxation rates at least the gap bound", criterion_8);

  bool hard_fail = false;
  std::printf("\n==== acceptance summary ====\n");
  for (const auto& c : results) {
    const char* verdict;
    if (c.pass)
      verdict = "PASS";
    else if (c.soft)
      verdict = "SOFT-FAIL (investigate; not a rejection)";
    else {
      verdict = "FAIL";
      hard_fail = true;
    }
    std::printf("[%s] criterion %d: %s (%d checks, %d failed%s%s)\n", verdict, c.id, c.title,
                c.checks, c.failures, c.first_failure.empty() ? "" : "; first: ",
                c.first_failure.c_str());
  }
  return hard_fail ? 1 : 0;
}
