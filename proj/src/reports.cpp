#include "reports.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "bounds.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "estimators.hpp"
#include "oracle.hpp"
#include "verify.hpp"

namespace tfwl {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

json bounds_to_json(const BoundsReport& r) {
  json j;
  j["C"] = r.C;
  j["R"] = r.R;
  j["lambda_max"] = r.lambda_max;
  j["beta"] = r.beta;
  j["dimension"] = r.dimension;
  j["gamma"] = r.gamma;
  j["gap_positive"] = r.gap_positive;
  if (r.gap_positive) {
    j["N_decay"] = r.N_decay;
    j["delta"] = r.delta;
  } else {
    j["N_decay"] = nullptr;
    j["delta"] = nullptr;
  }
  j["N_fsp"] = r.N_fsp;
  j["M"] = r.M;
  j["epsilon"] = r.epsilon;
  return j;
}

json observable_norms_json(const Observable& o) {
  json j;
  j["id"] = o.id();
  j["sup_norm"] = o.sup_norm();
  j["triple_norm"] = o.triple_norm();
  j["effective_support_size"] = o.effective_support().size();
  return j;
}

void write_trace_csv(const Model& m, const std::string& path, double run_length, uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open trace path: " + path);
  out << "clock,kind,site,time_on_circle,accepted,delta\n";
  Chain chain(m, derive_seed(seed, 0x7ACE7ACEull));
  out.precision(17);
  while (chain.clock() < run_length) {
    EventRecord rec = chain.step();
    out << rec.clock << ',' << move_kind_name(rec.move.kind) << ',' << rec.move.site << ',';
    if (rec.move.kind != MoveKind::Flip) out << rec.move.time;
    out << ',' << (rec.accepted ? 1 : 0) << ',' << rec.delta << '\n';
  }
}

void write_series_csv(const Model& m, const std::vector<Observable>& obs, const std::string& path,
                      double burn_in, double run_length, uint64_t seed) {
  // time-weighted series of the model's own chain: each row is one holding
  // interval, weight = interval length
  Chain chain(m, derive_seed(seed, 0x5E41E5ull));
  std::vector<std::ofstream> outs;
  for (size_t o = 0; o < obs.size(); ++o) {
    std::string p = path;
    if (obs.size() > 1) {
      auto dot = p.rfind('.');
      std::string sfx = "_" + obs[o].id();
      if (dot == std::string::npos)
        p += sfx;
      else
        p.insert(dot, sfx);
    }
    outs.emplace_back(p);
    if (!outs.back()) throw InvalidInput("cannot open series path: " + p);
    outs.back() << "clock,value,weight\n";
    outs.back().precision(17);
  }
  const double t_end = burn_in + run_length;
  while (chain.clock() < t_end) {
    const auto sig = chain.sigma0();
    const double t0 = chain.clock();
    EventRecord rec = chain.step();
    const double a = std::max(t0, burn_in);
    const double b = std::min(rec.clock, t_end);
    if (b > a)
      for (size_t o = 0; o < obs.size(); ++o)
        outs[o] << a << ',' << obs[o].eval(sig) << ',' << (b - a) << '\n';
  }
}

void write_final_config_csv(const Model& m, const std::string& path, double run_length,
                            uint64_t seed) {
  Chain chain(m, derive_seed(seed, 0xF17A1ull));
  while (chain.clock() < run_length) chain.step();
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open trajectory dump path: " + path);
  out << "site_index,arc_start,arc_length,spin\n";
  out.precision(17);
  for (int i = 0; i < m.site_count(); ++i)
    for (const Arc& a : color_site(chain.config().sites[i], m.beta()))
      out << i << ',' << a.start << ',' << a.length << ',' << a.spin << '\n';
}

json params_echo(const json& params) { return params.is_null() ? json::object() : params; }

}  // namespace

json bounds_report_json(const Model& m, const Observable* f, const Observable* g) {
  json j;
  j["spec_hash"] = spec_hash(m);
  j.update(bounds_to_json(bounds_report(m)));
  if (f && g) {
    j["observables"] = json{{"f", observable_norms_json(*f)}, {"g", observable_norms_json(*g)}};
    try {
      j["decay_bound"] = decay_bound(m, *f, *g);
      auto sf = f->effective_support();
      auto sg = g->effective_support();
      int dist = m.lattice().distance(sf.at(0), sg.at(0));
      for (int a : sf)
        for (int b : sg) dist = std::min(dist, m.lattice().distance(a, b));
      j["support_distance"] = dist;
    } catch (const InvalidInput& e) {
      j["decay_bound"] = nullptr;
      j["decay_bound_error"] = e.what();
    }
  }
  return j;
}

json exact_report_json(const Model& m, const std::vector<Observable>& obs,
                       const ExactOptions& opt) {
  const double t0 = now_seconds();
  ThermalSolution sol = solve_thermal(m, opt.site_cap);
  json j;
  j["spec_hash"] = spec_hash(m);
  j["n_sites"] = m.site_count();
  j["cap"] = opt.site_cap;
  j["eigen_residual"] = sol.residual_norm;
  json means = json::array();
  for (const auto& o : obs)
    means.push_back(json{{"observable_id", o.id()}, {"value", thermal_expectation(sol, o)}});
  j["means"] = means;
  json corrs = json::array();
  for (size_t a = 0; a < obs.size(); ++a)
    for (size_t b = a; b < obs.size(); ++b)
      corrs.push_back(json{{"f", obs[a].id()},
                           {"g", obs[b].id()},
                           {"value", thermal_truncated_correlation(sol, obs[a], obs[b])}});
  j["truncated_correlations"] = corrs;
  if (!opt.matrix_dump_path.empty()) {
    dump_matrix(build_hamiltonian(m, opt.site_cap), opt.matrix_dump_path);
    j["matrix_dump"] = opt.matrix_dump_path;
  }
  j["timings"] = json{{"wall_seconds", now_seconds() - t0}};
  return j;
}

json sample_report_json(const Model& m, const std::vector<Observable>& obs, const json& params,
                        bool& checks_failed) {
  checks_failed = false;
  const double t0 = now_seconds();
  McmcParams p = mcmc_params_from_json(params);
  const std::string method =
      params.contains("method") ? params.at("method").get<std::string>() : "mcmc";

  json j;
  j["spec_hash"] = spec_hash(m);
  j["seed"] = p.seed;
  j["method"] = method;
  j["params"] = params_echo(params);
  j["bounds"] = bounds_to_json(bounds_report(m));

  json estimates = json::array();
  if (method == "mcmc") {
    auto ests = run_mcmc(m, obs, p);
    for (const auto& e : ests) {
      json je = estimate_to_json(e);
      je["seed"] = p.seed;
      je["params"] = params_echo(params);
      estimates.push_back(je);
    }
  } else if (method == "importance") {
    IsParams ip;
    ip.seed = p.seed;
    ip.n_samples = params.contains("samples") ? params.at("samples").get<int64_t>() : 100000;
    if (params.contains("ess_floor")) ip.ess_floor = params.at("ess_floor").get<double>();
    auto ests = importance_sampling(m, obs, ip);
    for (const auto& e : ests) {
      json je = estimate_to_json(e);
      je["seed"] = ip.seed;
      je["params"] = params_echo(params);
      estimates.push_back(je);
    }
  } else {
    throw InvalidInput("method must be \"mcmc\" or \"importance\"");
  }
  j["estimates"] = estimates;

  // exact values alongside, when the model is small enough
  bool want_exact = m.site_count() <= 8;
  if (params.contains("include_exact") && params.at("include_exact").is_boolean())
    want_exact = params.at("include_exact").get<bool>();
  const int cap = params.contains("exact_cap") ? params.at("exact_cap").get<int>() : kDefaultSiteCap;
  if (want_exact && m.site_count() <= cap) {
    ThermalSolution sol = solve_thermal(m, cap);
    json ex = json::array();
    for (const auto& o : obs)
      ex.push_back(json{{"observable_id", o.id()}, {"value", thermal_expectation(sol, o)}});
    j["exact"] = ex;
  }

  if (params.contains("self_check") && params.at("self_check").get<bool>()) {
    VerifyOptions vo;
    vo.seed = p.seed;
    vo.trials = 200;
    bool all = true;
    json checks = json::array();
    for (const auto& c : run_checks(m, {"balance", "rn", "commute", "locality"}, vo)) {
      checks.push_back(json{{"name", c.name},
                            {"pass", c.pass},
                            {"trials", c.trials},
                            {"max_residual", c.max_residual}});
      all = all && c.pass;
    }
    j["checks"] = checks;
    checks_failed = !all;
  }

  if (params.contains("trace_path"))
    write_trace_csv(m, params.at("trace_path").get<std::string>(), p.burn_in + p.run_length,
                    p.seed);
  if (params.contains("series_path"))
    write_series_csv(m, obs, params.at("series_path").get<std::string>(), p.burn_in, p.run_length,
                     p.seed);
  if (params.contains("final_config_path"))
    write_final_config_csv(m, params.at("final_config_path").get<std::string>(),
                           p.burn_in + p.run_length, p.seed);

  j["timings"] = json{{"wall_seconds", now_seconds() - t0}};
  return j;
}

json correlate_report_json(const Model& m, const Observable& f, const Observable& g,
                           const json& params) {
  const double t0 = now_seconds();
  McmcParams p = mcmc_params_from_json(params);
  json j;
  j["spec_hash"] = spec_hash(m);
  j["seed"] = p.seed;
  j["params"] = params_echo(params);

  Estimate e = truncated_correlation(m, f, g, p);
  json je = estimate_to_json(e);
  je["seed"] = p.seed;
  je["params"] = params_echo(params);
  j["estimate"] = je;

  if (params.contains("samples")) {
    IsParams ip;
    ip.seed = p.seed;
    ip.n_samples = params.at("samples").get<int64_t>();
    j["importance_estimate"] = estimate_to_json(importance_correlation(m, f, g, ip));
  }
  bool want_exact = m.site_count() <= 8;
  if (params.contains("include_exact") && params.at("include_exact").is_boolean())
    want_exact = params.at("include_exact").get<bool>();
  if (want_exact && m.site_count() <= kDefaultSiteCap)
    j["exact"] = thermal_truncated_correlation(m, f, g);
  try {
    j["decay_bound"] = decay_bound(m, f, g);
  } catch (const InvalidInput&) {
    j["decay_bound"] = nullptr;
  }
  j["timings"] = json{{"wall_seconds", now_seconds() - t0}};
  return j;
}

json verify_report_json(const Model& m, const json& params, bool& all_pass) {
  const double t0 = now_seconds();
  VerifyOptions o;
  std::vector<std::string> names{"rn", "commute", "balance", "poisson"};
  if (!params.is_null()) {
    if (params.contains("checks")) names = params.at("checks").get<std::vector<std::string>>();
    if (params.contains("trials")) o.trials = params.at("trials").get<int>();
    if (params.contains("seed")) o.seed = params.at("seed").get<uint64_t>();
    if (params.contains("corrupt_rate_scale"))
      o.corrupt_rate_scale = params.at("corrupt_rate_scale").get<double>();
    if (params.contains("poisson_run_length"))
      o.poisson_run_length = params.at("poisson_run_length").get<double>();
    if (params.contains("poisson_snapshot_dt"))
      o.poisson_snapshot_dt = params.at("poisson_snapshot_dt").get<double>();
  }
  if (o.trials < 1) throw InvalidInput("trials must be positive");

  json j;
  j["spec_hash"] = spec_hash(m);
  j["seed"] = o.seed;
  j["trials"] = o.trials;
  all_pass = true;
  json checks = json::array();
  for (const auto& c : run_checks(m, names, o)) {
    json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["trials"] = c.trials;
    jc["max_residual"] = c.max_residual;
    if (!c.detail.empty()) jc["detail"] = c.detail;
    if (!c.pass && !c.failing_probe.is_null()) jc["failing_probe"] = c.failing_probe;
    checks.push_back(jc);
    all_pass = all_pass && c.pass;
  }
  j["checks"] = checks;
  j["pass"] = all_pass;
  j["timings"] = json{{"wall_seconds", now_seconds() - t0}};
  return j;
}

}  // namespace tfwl
