#include "estimators.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "errors.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace tfwl {

namespace {

void validate_params(const McmcParams& p) {
  if (!(p.run_length > 0.0)) throw InvalidInput("run_length must be positive");
  if (p.batch_count < 8) throw InvalidInput("batch_count must be at least 8");
  if (p.run_length < p.batch_count)
    throw InvalidInput("run too short for the requested batch count");
  if (p.burn_in < 0.0) throw InvalidInput("burn_in must be nonnegative");
  if (p.chains < 1) throw InvalidInput("chains must be at least 1");
  if (p.threads < 1) throw InvalidInput("threads must be at least 1");
  if (p.observation == ObservationMode::Grid && !(p.grid_dt > 0.0))
    throw InvalidInput("grid observation requires a positive grid_dt");
}

// average of f over the whole circle for the current configuration,
// time-weighted by arc length (optional variance reduction)
double rotation_averaged_value(const Config& c, const Observable& f, double beta) {
  const auto& supp = f.support();
  thread_local std::vector<std::pair<double, int>> evs;
  thread_local std::vector<int8_t> sig;
  evs.clear();
  for (size_t k = 0; k < supp.size(); ++k)
    for (const auto& p : c.sites[supp[k]].events) evs.emplace_back(p.time, supp[k]);
  std::sort(evs.begin(), evs.end());
  sig.assign(c.sites.size(), 0);
  for (int s : supp) sig[s] = static_cast<int8_t>(c.sites[s].spin_at(0.0));
  double acc = 0.0, t_prev = 0.0;
  for (const auto& [t, s] : evs) {
    acc += f.eval(sig) * (t - t_prev);
    t_prev = t;
    sig[s] = static_cast<int8_t>(c.sites[s].spin_at(t));
  }
  acc += f.eval(sig) * (beta - t_prev);
  return acc / beta;
}

struct BatchSums {
  std::vector<double> D;               // weight-time per batch
  std::vector<std::vector<double>> N;  // per observable: weighted f
  std::vector<std::vector<double>> Q;  // per observable: weighted f^2
  std::vector<double> P;               // weighted f0*f1 (correlation runs)
  int64_t events = 0;

  BatchSums(int batches, size_t n_obs, bool with_product) {
    D.assign(batches, 0.0);
    N.assign(n_obs, std::vector<double>(batches, 0.0));
    Q.assign(n_obs, std::vector<double>(batches, 0.0));
    if (with_product) P.assign(batches, 0.0);
  }
};

// One chain of the estimator sampler: the model's jump chain run at doubled
// transverse fields, with trajectory time weighted by 2^{#empty sites}.
BatchSums run_weighted_chain(const Model& sampler, const std::vector<Observable>& obs,
                             const McmcParams& p, int chain_idx, bool with_product) {
  const int B = p.batch_count;
  const double bw = p.run_length / B;
  const double t_end = p.burn_in + p.run_length;
  const bool grid = p.observation == ObservationMode::Grid;
  const int n = sampler.site_count();

  BatchSums sums(B, obs.size(), with_product);
  Chain chain(sampler, derive_seed(p.seed, static_cast<uint64_t>(chain_idx)));

  std::vector<int> pts(n, 0);
  int empties = n;
  double V = std::ldexp(1.0, empties);

  std::vector<double> fv(obs.size());
  int64_t grid_k = 0;

  auto deposit = [&](int b, double weight) {
    sums.D[b] += weight;
    for (size_t o = 0; o < obs.size(); ++o) {
      sums.N[o][b] += weight * fv[o];
      sums.Q[o][b] += weight * fv[o] * fv[o];
    }
    if (with_product) sums.P[b] += weight * fv[0] * fv[1];
  };

  while (chain.clock() < t_end) {
    if (p.rotation_average) {
      for (size_t o = 0; o < obs.size(); ++o)
        fv[o] = rotation_averaged_value(chain.config(), obs[o], sampler.beta());
    } else {
      const auto sig = chain.sigma0();
      for (size_t o = 0; o < obs.size(); ++o) fv[o] = obs[o].eval(sig);
    }
    const double t0 = chain.clock();
    EventRecord rec = chain.step();
    const double a = std::max(t0, p.burn_in);
    const double b = std::min(rec.clock, t_end);
    if (b > a) {
      sums.events++;
      if (grid) {
        while (grid_k * p.grid_dt + p.burn_in < b) {
          const double tg = p.burn_in + grid_k * p.grid_dt;
          if (tg >= a) {
            int kb = std::min(B - 1, static_cast<int>((tg - p.burn_in) / bw));
            deposit(kb, V);
          }
          ++grid_k;
        }
      } else {
        int kb = std::min(B - 1, std::max(0, static_cast<int>((a - p.burn_in) / bw)));
        double pos = a;
        while (pos < b && kb < B) {
          const double seg_end = std::min(b, p.burn_in + (kb + 1) * bw);
          if (seg_end > pos) deposit(kb, V * (seg_end - pos));
          pos = seg_end;
          ++kb;
        }
      }
    }
    if (rec.accepted && !(rec.move.kind == MoveKind::Flip)) {
      const int s = rec.move.site;
      if (is_addition(rec.move.kind)) {
        if (pts[s]++ == 0) {
          --empties;
          V *= 0.5;
        }
      } else {
        if (--pts[s] == 0) {
          ++empties;
          V *= 2.0;
        }
      }
    }
  }
  return sums;
}

std::vector<BatchSums> run_all_chains(const Model& m, const std::vector<Observable>& obs,
                                      const McmcParams& p, bool with_product) {
  const Model sampler = m.with_scaled_fields(2.0);
  std::vector<BatchSums> per_chain;
  per_chain.reserve(p.chains);
  for (int c = 0; c < p.chains; ++c) per_chain.emplace_back(p.batch_count, obs.size(), with_product);

  const int workers = std::min(p.threads, p.chains);
  if (workers <= 1) {
    for (int c = 0; c < p.chains; ++c)
      per_chain[c] = run_weighted_chain(sampler, obs, p, c, with_product);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (int c = w; c < p.chains; c += workers)
          per_chain[c] = run_weighted_chain(sampler, obs, p, c, with_product);
      });
    }
    for (auto& t : pool) t.join();
  }
  return per_chain;
}

struct Flattened {
  std::vector<double> D;
  std::vector<std::vector<double>> N, Q;
  std::vector<double> P;
  int64_t events = 0;
};

Flattened flatten(const std::vector<BatchSums>& chains, size_t n_obs, bool with_product) {
  Flattened f;
  f.N.resize(n_obs);
  f.Q.resize(n_obs);
  for (const auto& c : chains) {
    f.D.insert(f.D.end(), c.D.begin(), c.D.end());
    for (size_t o = 0; o < n_obs; ++o) {
      f.N[o].insert(f.N[o].end(), c.N[o].begin(), c.N[o].end());
      f.Q[o].insert(f.Q[o].end(), c.Q[o].begin(), c.Q[o].end());
    }
    if (with_product) f.P.insert(f.P.end(), c.P.begin(), c.P.end());
    f.events += c.events;
  }
  return f;
}

double total(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

Estimate mean_estimate(const std::string& id, const Flattened& f, size_t o, double t_total) {
  const int B = static_cast<int>(f.D.size());
  const double SD = total(f.D);
  const double SN = total(f.N[o]);
  const double SQ = total(f.Q[o]);
  if (!(SD > 0.0)) throw CheckFailed("no observation weight accumulated");

  Estimate e;
  e.observable_id = id;
  e.mean = SN / SD;
  e.n_samples = f.events;

  std::vector<double> loo(B);
  double loo_mean = 0.0;
  for (int b = 0; b < B; ++b) {
    loo[b] = (SN - f.N[o][b]) / (SD - f.D[b]);
    loo_mean += loo[b];
  }
  loo_mean /= B;
  double ss = 0.0;
  for (int b = 0; b < B; ++b) ss += (loo[b] - loo_mean) * (loo[b] - loo_mean);
  e.std_error = std::sqrt(ss * (B - 1) / B);

  const double var = std::max(0.0, SQ / SD - e.mean * e.mean);
  if (var > 0.0 && e.std_error > 0.0) {
    e.tau_int = t_total * e.std_error * e.std_error / (2.0 * var);
    e.ess = var / (e.std_error * e.std_error);
  } else {
    e.tau_int = 0.0;
    e.ess = static_cast<double>(f.events);
  }
  e.ess = std::min(e.ess, static_cast<double>(f.events));
  return e;
}

}  // namespace

std::vector<Estimate> run_mcmc(const Model& m, const std::vector<Observable>& obs,
                               const McmcParams& p) {
  validate_params(p);
  if (obs.empty()) throw InvalidInput("run_mcmc needs at least one observable");
  auto chains = run_all_chains(m, obs, p, false);
  Flattened f = flatten(chains, obs.size(), false);
  const double t_total = p.run_length * p.chains;
  std::vector<Estimate> out;
  out.reserve(obs.size());
  for (size_t o = 0; o < obs.size(); ++o) out.push_back(mean_estimate(obs[o].id(), f, o, t_total));
  return out;
}

Estimate truncated_correlation(const Model& m, const Observable& fo, const Observable& go,
                               const McmcParams& p) {
  validate_params(p);
  std::vector<Observable> obs{fo, go};
  auto chains = run_all_chains(m, obs, p, true);
  Flattened f = flatten(chains, 2, true);
  const int B = static_cast<int>(f.D.size());
  const double SD = total(f.D);
  const double SF = total(f.N[0]);
  const double SG = total(f.N[1]);
  const double SP = total(f.P);
  if (!(SD > 0.0)) throw CheckFailed("no observation weight accumulated");

  const double c_full = SP / SD - (SF / SD) * (SG / SD);
  std::vector<double> loo(B);
  double loo_mean = 0.0;
  for (int b = 0; b < B; ++b) {
    const double d = SD - f.D[b];
    const double mf = (SF - f.N[0][b]) / d;
    const double mg = (SG - f.N[1][b]) / d;
    loo[b] = (SP - f.P[b]) / d - mf * mg;
    loo_mean += loo[b];
  }
  loo_mean /= B;

  Estimate e;
  e.observable_id = fo.id() + ";" + go.id();
  e.mean = B * c_full - (B - 1) * loo_mean;  // jackknife bias correction
  double ss = 0.0;
  for (int b = 0; b < B; ++b) ss += (loo[b] - loo_mean) * (loo[b] - loo_mean);
  e.std_error = std::sqrt(ss * (B - 1) / B);
  e.n_samples = f.events;

  const double t_total = p.run_length * p.chains;
  Estimate ef = mean_estimate(fo.id(), f, 0, t_total);
  Estimate eg = mean_estimate(go.id(), f, 1, t_total);
  e.tau_int = std::max(ef.tau_int, eg.tau_int);
  e.ess = std::min(ef.ess, eg.ess);
  return e;
}

namespace {

struct IsSamples {
  std::vector<double> w;                    // normalized weights
  std::vector<std::vector<double>> values;  // per observable
  double ess = 0.0;
};

IsSamples draw_is_samples(const Model& m, const std::vector<Observable>& obs, const IsParams& p) {
  if (p.n_samples < 100) throw InvalidInput("importance sampling needs at least 100 samples");
  const double budget = static_cast<double>(p.n_samples) * (obs.size() + 1);
  if (budget > 3e8) throw CapExceeded("importance sampling request too large to hold in memory");

  const double beta = m.beta();
  const double s = m.sign();
  const int n = m.site_count();
  Rng rng(derive_seed(p.seed, 0x15AABBCCu));

  IsSamples out;
  out.w.resize(p.n_samples);
  out.values.assign(obs.size(), std::vector<double>(p.n_samples));

  std::vector<double> logw(p.n_samples);
  Config c = empty_config(m);
  std::vector<int8_t> sig0(n);
  for (int64_t k = 0; k < p.n_samples; ++k) {
    for (int i = 0; i < n; ++i) {
      SiteWorldline& w = c.sites[i];
      for (;;) {
        w.events.clear();
        const double mean = m.field(i) * beta;
        const int a = rng.poisson(mean);
        const int b = rng.poisson(mean);
        for (int j = 0; j < a; ++j) w.events.push_back(MarkedPoint{rng.uniform() * beta, true});
        for (int j = 0; j < b; ++j) w.events.push_back(MarkedPoint{rng.uniform() * beta, false});
        std::sort(w.events.begin(), w.events.end(),
                  [](const MarkedPoint& x, const MarkedPoint& y) { return x.time < y.time; });
        bool distinct = true;
        for (size_t j = 0; j + 1 < w.events.size(); ++j)
          if (w.events[j].time == w.events[j + 1].time) distinct = false;
        if (distinct) break;  // collisions have probability zero; re-draw
      }
      w.rho = static_cast<int8_t>(rng.sign());
      sig0[i] = static_cast<int8_t>(w.spin_at(0.0));
    }
    logw[k] = s * path_energy(m, c) + multiplicity_log_weight(c);
    for (size_t o = 0; o < obs.size(); ++o) out.values[o][k] = obs[o].eval(sig0);
  }

  const double wmax = *std::max_element(logw.begin(), logw.end());
  double sw = 0.0, sw2 = 0.0;
  for (int64_t k = 0; k < p.n_samples; ++k) {
    out.w[k] = std::exp(logw[k] - wmax);
    sw += out.w[k];
    sw2 += out.w[k] * out.w[k];
  }
  out.ess = sw * sw / sw2;
  return out;
}

Estimate is_mean_estimate(const std::string& id, const IsSamples& s, size_t o, double ess_floor) {
  const int64_t n = static_cast<int64_t>(s.w.size());
  double sw = 0.0, swf = 0.0;
  for (int64_t k = 0; k < n; ++k) {
    sw += s.w[k];
    swf += s.w[k] * s.values[o][k];
  }
  Estimate e;
  e.observable_id = id;
  e.mean = swf / sw;
  e.n_samples = n;
  e.ess = s.ess;
  e.tau_int = 0.0;
  e.reliable = s.ess >= ess_floor;

  double loo_sum = 0.0, loo_sq = 0.0;
  for (int64_t k = 0; k < n; ++k) {
    const double lk = (swf - s.w[k] * s.values[o][k]) / (sw - s.w[k]);
    loo_sum += lk;
    loo_sq += lk * lk;
  }
  const double loo_mean = loo_sum / n;
  const double ssq = std::max(0.0, loo_sq - n * loo_mean * loo_mean);
  e.std_error = std::sqrt(ssq * (n - 1) / n);
  return e;
}

}  // namespace

std::vector<Estimate> importance_sampling(const Model& m, const std::vector<Observable>& obs,
                                          const IsParams& p) {
  if (obs.empty()) throw InvalidInput("importance sampling needs at least one observable");
  IsSamples s = draw_is_samples(m, obs, p);
  std::vector<Estimate> out;
  out.reserve(obs.size());
  for (size_t o = 0; o < obs.size(); ++o)
    out.push_back(is_mean_estimate(obs[o].id(), s, o, p.ess_floor));
  return out;
}

Estimate importance_correlation(const Model& m, const Observable& fo, const Observable& go,
                                const IsParams& p) {
  IsSamples s = draw_is_samples(m, {fo, go}, p);
  const int64_t n = static_cast<int64_t>(s.w.size());
  double sw = 0.0, sf = 0.0, sg = 0.0, sp = 0.0;
  for (int64_t k = 0; k < n; ++k) {
    const double w = s.w[k];
    sw += w;
    sf += w * s.values[0][k];
    sg += w * s.values[1][k];
    sp += w * s.values[0][k] * s.values[1][k];
  }
  Estimate e;
  e.observable_id = fo.id() + ";" + go.id();
  e.mean = sp / sw - (sf / sw) * (sg / sw);
  e.n_samples = n;
  e.ess = s.ess;
  e.tau_int = 0.0;
  e.reliable = s.ess >= p.ess_floor;

  double loo_sum = 0.0, loo_sq = 0.0;
  for (int64_t k = 0; k < n; ++k) {
    const double w = s.w[k];
    const double d = sw - w;
    const double mf = (sf - w * s.values[0][k]) / d;
    const double mg = (sg - w * s.values[1][k]) / d;
    const double lk = (sp - w * s.values[0][k] * s.values[1][k]) / d - mf * mg;
    loo_sum += lk;
    loo_sq += lk * lk;
  }
  const double loo_mean = loo_sum / n;
  const double ssq = std::max(0.0, loo_sq - n * loo_mean * loo_mean);
  e.std_error = std::sqrt(ssq * (n - 1) / n);
  return e;
}

RateFit autocorrelation_rate(std::span<const double> series, double dt) {
  const int n = static_cast<int>(series.size());
  if (n < 100) throw InvalidInput("autocorrelation rate fit needs at least 100 observations");
  if (!(dt > 0.0)) throw InvalidInput("series spacing must be positive");

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  c0 /= n;

  RateFit fit;
  fit.resolution_rate = -std::log(0.05) / dt;
  if (c0 == 0.0) throw InvalidInput("autocovariance window too short: constant series");

  std::vector<double> xs, ys;
  const int max_lag = std::min(n / 3, 10000);
  for (int k = 1; k <= max_lag; ++k) {
    double c = 0.0;
    for (int i = 0; i + k < n; ++i) c += (series[i] - mean) * (series[i + k] - mean);
    const double rho = c / n / c0;
    if (!(rho > 0.05)) break;
    xs.push_back(k * dt);
    ys.push_back(std::log(rho));
  }
  if (xs.size() < 2) {
    fit.beyond_resolution = true;
    fit.rate = fit.resolution_rate;
    fit.lags_used = static_cast<int>(xs.size());
    return fit;
  }
  LineFit line = fit_line(xs, ys);
  fit.rate = -line.slope;
  fit.std_error = line.slope_stderr;
  fit.lags_used = line.points;
  return fit;
}

std::vector<double> chain_grid_series(const Model& m, const Observable& f,
                                      const GridSeriesParams& p) {
  if (!(p.run_length > 0.0) || !(p.dt > 0.0))
    throw InvalidInput("grid series needs positive run_length and dt");
  Chain chain(m, derive_seed(p.seed, 0xC0FFEEu));
  const int64_t count = static_cast<int64_t>(p.run_length / p.dt);
  std::vector<double> series;
  series.reserve(count);
  int64_t k = 0;
  while (static_cast<int64_t>(series.size()) < count) {
    const double v = f.eval(chain.sigma0());
    const double t0 = chain.clock();
    EventRecord rec = chain.step();
    while (k < count) {
      const double tg = p.burn_in + k * p.dt;
      if (tg < t0 || tg >= rec.clock) break;
      series.push_back(v);
      ++k;
    }
  }
  return series;
}

}  // namespace tfwl
