#include "stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "errors.hpp"

namespace tfwl {

double chi_square_p_value(double statistic, int dof) {
  if (dof <= 0) throw InvalidInput("chi-square dof must be positive");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquareFit poisson_chi_square(std::span<const int> counts, double mean, double min_expected) {
  if (counts.empty()) throw InvalidInput("poisson fit needs observations");
  const int n = static_cast<int>(counts.size());
  int kmax = *std::max_element(counts.begin(), counts.end());

  // Poisson pmf over 0..kmax, remainder mass in the tail bin
  std::vector<double> pmf(kmax + 2, 0.0);
  double p = std::exp(-mean);
  double cum = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    pmf[k] = p;
    cum += p;
    p *= mean / (k + 1);
  }
  pmf[kmax + 1] = std::max(0.0, 1.0 - cum);

  std::vector<int> observed(kmax + 2, 0);
  for (int c : counts) ++observed[c];

  // merge bins from the right until expected counts are acceptable
  std::vector<double> exp_bins;
  std::vector<int> obs_bins;
  double e_acc = 0.0;
  int o_acc = 0;
  for (int k = kmax + 1; k >= 0; --k) {
    e_acc += n * pmf[k];
    o_acc += observed[k];
    if (e_acc >= min_expected || k == 0) {
      exp_bins.push_back(e_acc);
      obs_bins.push_back(o_acc);
      e_acc = 0.0;
      o_acc = 0;
    }
  }
  // a leading remainder below threshold folds into the last kept bin
  if (e_acc > 0.0 && !exp_bins.empty()) {
    exp_bins.back() += e_acc;
    obs_bins.back() += o_acc;
  }

  ChiSquareFit fit;
  fit.bins = static_cast<int>(exp_bins.size());
  if (fit.bins < 2) throw InvalidInput("poisson fit degenerate: fewer than 2 bins");
  for (int b = 0; b < fit.bins; ++b) {
    const double d = obs_bins[b] - exp_bins[b];
    fit.statistic += d * d / exp_bins[b];
  }
  fit.dof = fit.bins - 1;
  fit.p_value = chi_square_p_value(fit.statistic, fit.dof);
  return fit;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("line fit needs >= 2 points");
  const int n = static_cast<int>(x.size());
  double xm = 0.0, ym = 0.0;
  for (int i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (sxx == 0.0) throw InvalidInput("line fit degenerate: constant abscissa");
  LineFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  if (n > 2) {
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ss += r * r;
    }
    fit.slope_stderr = std::sqrt(ss / (n - 2) / sxx);
  }
  return fit;
}

std::vector<double> autocorrelation(std::span<const double> series, int max_lag) {
  const int n = static_cast<int>(series.size());
  if (n < 2) throw InvalidInput("autocorrelation needs >= 2 points");
  max_lag = std::min(max_lag, n - 1);
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  std::vector<double> rho(max_lag + 1, 0.0);
  double c0 = 0.0;
  for (int i = 0; i < n; ++i) c0 += (series[i] - mean) * (series[i] - mean);
  c0 /= n;
  if (c0 == 0.0) {
    rho[0] = 1.0;
    return rho;  // constant series: zero autocovariance at every positive lag
  }
  for (int k = 0; k <= max_lag; ++k) {
    double c = 0.0;
    for (int i = 0; i + k < n; ++i) c += (series[i] - mean) * (series[i + k] - mean);
    rho[k] = c / n / c0;
  }
  return rho;
}

}  // namespace tfwl
