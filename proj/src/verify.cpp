#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dynamics.hpp"
#include "errors.hpp"
#include "io_json.hpp"
#include "stats.hpp"

namespace tfwl {

Config random_probe_config(const Model& m, Rng& rng) {
  const double beta = m.beta();
  Config c = empty_config(m);
  for (int i = 0; i < m.site_count(); ++i) {
    SiteWorldline& w = c.sites[i];
    const double mean = std::max(m.field(i) * beta / 2.0, 0.75);
    for (;;) {
      w.events.clear();
      const int a = rng.poisson(mean);
      const int b = rng.poisson(mean);
      for (int k = 0; k < a; ++k) w.events.push_back(MarkedPoint{rng.uniform() * beta, true});
      for (int k = 0; k < b; ++k) w.events.push_back(MarkedPoint{rng.uniform() * beta, false});
      std::sort(w.events.begin(), w.events.end(),
                [](const MarkedPoint& x, const MarkedPoint& y) { return x.time < y.time; });
      bool distinct = true;
      for (size_t k = 0; k + 1 < w.events.size(); ++k)
        if (w.events[k].time == w.events[k + 1].time) distinct = false;
      if (distinct) break;
    }
    w.rho = static_cast<int8_t>(rng.sign());
  }
  return c;
}

Move random_probe_move(const Model& m, const Config& c, Rng& rng) {
  const double beta = m.beta();
  for (;;) {
    const double u = rng.uniform();
    if (u < 0.4) {  // addition
      Move mv;
      mv.kind = (rng.next_u64() & 1u) ? MoveKind::AddXi : MoveKind::AddEta;
      mv.site = rng.uniform_int(m.site_count());
      do {
        mv.time = rng.uniform() * beta;
      } while (c.sites[mv.site].find_exact(mv.time) >= 0);
      return mv;
    }
    if (u < 0.7) {  // removal of an existing point
      const int total = c.point_count();
      if (total == 0) continue;
      int idx = rng.uniform_int(total);
      for (int site = 0; site < m.site_count(); ++site) {
        const auto& w = c.sites[site];
        if (idx < w.size()) {
          const MarkedPoint& p = w.events[idx];
          return Move{p.xi ? MoveKind::RemoveXi : MoveKind::RemoveEta, site, p.time};
        }
        idx -= w.size();
      }
      continue;
    }
    return Move{MoveKind::Flip, rng.uniform_int(m.site_count()), 0.0};
  }
}

namespace {

json probe_json(const Config& c, const Move& g, double residual, const char* what) {
  json j;
  j["check"] = what;
  j["config"] = config_to_json(c);
  j["move"] = move_to_json(g);
  j["residual"] = residual;
  return j;
}

json probe_json(const Config& c, const Move& g, const Move& d, double residual, const char* what) {
  json j = probe_json(c, g, residual, what);
  j["move2"] = move_to_json(d);
  return j;
}

// pair of probe moves on distinct sites; categories restricted when asked
std::pair<Move, Move> distinct_site_pair(const Model& m, const Config& c, Rng& rng,
                                         bool additions_only) {
  for (;;) {
    Move g = random_probe_move(m, c, rng);
    Move d = random_probe_move(m, c, rng);
    if (additions_only && (!is_addition(g.kind) || !is_addition(d.kind))) continue;
    if (g.site != d.site) return {g, d};
  }
}

}  // namespace

CheckOutcome check_balance(const Model& m, const VerifyOptions& o) {
  CheckOutcome out;
  out.name = "balance";
  Rng rng(derive_seed(o.seed, 0xBA1A7CEu));
  for (int t = 0; t < o.trials; ++t) {
    Config c = random_probe_config(m, rng);
    Move mv = random_probe_move(m, c, rng);
    const double r = detailed_balance_residual(m, c, mv, o.corrupt_rate_scale);
    out.trials++;
    if (r > out.max_residual) out.max_residual = r;
    if (r >= o.balance_tol && out.pass) {
      out.pass = false;
      out.failing_probe = probe_json(c, mv, r, "balance");
    }
  }
  return out;
}

CheckOutcome check_rn(const Model& m, const VerifyOptions& o) {
  CheckOutcome out;
  out.name = "rn";
  if (m.site_count() < 2) {
    out.detail = "skipped: needs at least 2 sites";
    return out;
  }
  Rng rng(derive_seed(o.seed, 0x5117A11u));
  for (int t = 0; t < o.trials; ++t) {
    Config c = random_probe_config(m, rng);
    // all-category pairs exercise the swap symmetry; addition pairs add the
    // density-ratio identity
    const bool additions_only = (t % 2) == 0;
    auto [g, d] = distinct_site_pair(m, c, rng, additions_only);
    SymmetryReport rep = check_symmetry_identities(m, c, g, d);
    out.trials++;
    double r = rep.symmetry_residual;
    if (rep.rn_checked) r = std::max(r, rep.rn_residual);
    if (r > out.max_residual) out.max_residual = r;
    const bool ok = rep.symmetry_residual == 0.0 && (!rep.rn_checked || rep.rn_residual < o.rn_tol);
    if (!ok && out.pass) {
      out.pass = false;
      out.failing_probe = probe_json(c, g, d, r, "rn");
    }
  }
  return out;
}

CheckOutcome check_commute(const Model& m, const VerifyOptions& o) {
  CheckOutcome out;
  out.name = "commute";
  if (m.site_count() < 2) {
    out.detail = "skipped: needs at least 2 sites";
    return out;
  }
  Rng rng(derive_seed(o.seed, 0xC0117E5u));
  for (int t = 0; t < o.trials; ++t) {
    Config c = random_probe_config(m, rng);
    auto [g, d] = distinct_site_pair(m, c, rng, false);
    const double beta = m.beta();
    Config cgd = apply_move(apply_move(c, g, beta), d, beta);
    Config cdg = apply_move(apply_move(c, d, beta), g, beta);
    out.trials++;
    if (!(cgd == cdg) && out.pass) {
      out.pass = false;
      out.max_residual = 1.0;
      out.failing_probe = probe_json(c, g, d, 1.0, "commute");
    }
  }
  return out;
}

CheckOutcome check_locality(const Model& m, const VerifyOptions& o) {
  CheckOutcome out;
  out.name = "locality";
  Rng rng(derive_seed(o.seed, 0x10CA117Eu));
  const double bc = m.beta() * m.constants().C;
  for (int t = 0; t < o.trials; ++t) {
    Config c = random_probe_config(m, rng);
    Move mv = random_probe_move(m, c, rng);
    const double local = move_delta(m, c, mv);
    const double global = path_energy(m, apply_move(c, mv, m.beta())) - path_energy(m, c);
    const double rel =
        std::abs(local - global) / std::max({1.0, std::abs(local), std::abs(global)});
    out.trials++;
    if (rel > out.max_residual) out.max_residual = rel;
    bool ok = rel < o.locality_tol && std::abs(local) <= bc + 1e-12;
    if (!ok && out.pass) {
      out.pass = false;
      out.failing_probe = probe_json(c, mv, rel, "locality");
    }
  }
  return out;
}

CheckOutcome check_poisson(const Model& m, const VerifyOptions& o) {
  CheckOutcome out;
  out.name = "poisson";
  const Model free = m.without_terms();
  Chain chain(free, derive_seed(o.seed, 0x9015501ULL));
  const int n = free.site_count();
  const double t_end = o.poisson_burn_in + o.poisson_run_length;

  std::vector<std::vector<int>> xi_counts(n);
  std::vector<std::vector<int>> flip_counts(n);
  const double window = 5.0;
  std::vector<int> flips_this_window(n, 0);
  std::vector<int> pre_xi(n, 0);
  double next_snapshot = o.poisson_burn_in;
  double window_end = o.poisson_burn_in + window;

  while (chain.clock() < t_end) {
    // the state holding over [t0, rec.clock) is the pre-step one
    for (int i = 0; i < n; ++i)
      pre_xi[i] = static_cast<int>(chain.config().sites[i].xi_times().size());
    const double t0 = chain.clock();
    EventRecord rec = chain.step();
    while (next_snapshot >= t0 && next_snapshot < rec.clock && next_snapshot < t_end) {
      for (int i = 0; i < n; ++i) xi_counts[i].push_back(pre_xi[i]);
      next_snapshot += o.poisson_snapshot_dt;
    }
    while (rec.clock >= window_end && window_end <= t_end) {
      for (int i = 0; i < n; ++i) {
        flip_counts[i].push_back(flips_this_window[i]);
        flips_this_window[i] = 0;
      }
      window_end += window;
    }
    if (rec.accepted && rec.move.kind == MoveKind::Flip && rec.clock >= o.poisson_burn_in &&
        rec.clock < t_end)
      flips_this_window[rec.move.site]++;
  }

  std::ostringstream detail;
  double min_p = 1.0;
  for (int i = 0; i < n; ++i) {
    const double mean = free.field(i) * free.beta() / 2.0;
    if (mean >= 0.05) {
      ChiSquareFit fit = poisson_chi_square(xi_counts[i], mean);
      min_p = std::min(min_p, fit.p_value);
      detail << "site " << i << " xi p=" << fit.p_value << "; ";
      if (fit.p_value < o.poisson_p_floor && out.pass) {
        out.pass = false;
        json j;
        j["check"] = "poisson";
        j["site"] = i;
        j["statistic"] = fit.statistic;
        j["p_value"] = fit.p_value;
        out.failing_probe = j;
      }
    }
    ChiSquareFit ffit = poisson_chi_square(flip_counts[i], window);
    min_p = std::min(min_p, ffit.p_value);
    detail << "site " << i << " flips p=" << ffit.p_value << "; ";
    if (ffit.p_value < o.poisson_p_floor && out.pass) {
      out.pass = false;
      json j;
      j["check"] = "poisson_flips";
      j["site"] = i;
      j["statistic"] = ffit.statistic;
      j["p_value"] = ffit.p_value;
      out.failing_probe = j;
    }
  }
  out.trials = static_cast<int>(xi_counts.empty() ? 0 : xi_counts[0].size());
  out.max_residual = 1.0 - min_p;
  out.detail = detail.str();
  return out;
}

std::vector<CheckOutcome> run_checks(const Model& m, const std::vector<std::string>& names,
                                     const VerifyOptions& o) {
  std::vector<CheckOutcome> out;
  for (const auto& name : names) {
    if (name == "balance")
      out.push_back(check_balance(m, o));
    else if (name == "rn")
      out.push_back(check_rn(m, o));
    else if (name == "commute")
      out.push_back(check_commute(m, o));
    else if (name == "locality")
      out.push_back(check_locality(m, o));
    else if (name == "poisson")
      out.push_back(check_poisson(m, o));
    else
      throw InvalidInput("unknown check: " + name +
                         " (expected rn, commute, balance, locality or poisson)");
  }
  return out;
}

}  // namespace tfwl
