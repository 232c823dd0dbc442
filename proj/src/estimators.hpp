#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "model.hpp"

namespace tfwl {

struct Estimate {
  std::string observable_id;
  double mean = 0.0;
  double std_error = 0.0;
  double tau_int = 0.0;  // integrated autocorrelation time, process-time units
  double ess = 0.0;
  int64_t n_samples = 0;
  bool reliable = true;
};

enum class ObservationMode { TimeWeighted, Grid };

struct McmcParams {
  double burn_in = 0.0;
  double run_length = 0.0;
  int batch_count = 16;
  uint64_t seed = 0;
  ObservationMode observation = ObservationMode::TimeWeighted;
  double grid_dt = 0.0;  // required for Grid
  int chains = 1;
  int threads = 1;
  bool rotation_average = false;
};

// Thermal means of the observables, estimated from the worldline chain.
// Sampling runs the same jump-chain mechanics at doubled transverse fields
// and weights trajectory time by the coloring multiplicity 2^{#empty sites},
// which makes the time averages converge to the physical thermal values
// (see README); error bars via jackknife over equal-time batches.
std::vector<Estimate> run_mcmc(const Model& m, const std::vector<Observable>& obs,
                               const McmcParams& p);

// Truncated correlation <F;G> = Cov(f(sigma(0)), g(sigma(0))) under the
// stationary law, jackknifed over batches with bias correction.
Estimate truncated_correlation(const Model& m, const Observable& f, const Observable& g,
                               const McmcParams& p);

struct IsParams {
  int64_t n_samples = 0;
  uint64_t seed = 0;
  double ess_floor = 50.0;
};

// Self-normalized importance sampling from the independent marked-point
// prior (per site two Poisson(lambda_i * beta) sets, uniform rho), with
// weights exp[s * Hhat] * 2^{#empty sites}; stderr via leave-one-out jackknife.
std::vector<Estimate> importance_sampling(const Model& m, const std::vector<Observable>& obs,
                                          const IsParams& p);
Estimate importance_correlation(const Model& m, const Observable& f, const Observable& g,
                                const IsParams& p);

// Exponential decay-rate fit of the normalized autocovariance of a regular
// time series (spacing dt): least squares on log rho over the lags where
// rho > 0.05. An immediately sub-threshold autocovariance is reported as
// exceeding the lag resolution rather than as a fit.
struct RateFit {
  double rate = 0.0;
  double std_error = 0.0;
  int lags_used = 0;
  bool beyond_resolution = false;
  double resolution_rate = 0.0;  // -ln(0.05)/dt, the fastest resolvable rate
};
RateFit autocorrelation_rate(std::span<const double> series, double dt);

// f(sigma(0)) observed on a regular process-time grid along one plain chain
// run at the model's own fields; input for autocorrelation_rate.
struct GridSeriesParams {
  double burn_in = 0.0;
  double run_length = 0.0;
  double dt = 0.1;
  uint64_t seed = 0;
};
std::vector<double> chain_grid_series(const Model& m, const Observable& f,
                                      const GridSeriesParams& p);

}  // namespace tfwl
