#pragma once

#include <span>
#include <vector>

namespace tfwl {

// upper-tail probability of a chi-square with `dof` degrees of freedom
double chi_square_p_value(double statistic, int dof);

// Pearson fit of observed nonnegative-integer counts against Poisson(mean).
// Tail bins are merged until every expected count is at least min_expected.
struct ChiSquareFit {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;
};
ChiSquareFit poisson_chi_square(std::span<const int> counts, double mean,
                                double min_expected = 5.0);

// Least-squares line y = a + b x with the slope's standard error.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  int points = 0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// normalized autocovariance rho_k for k = 0..max_lag of a regular series
std::vector<double> autocorrelation(std::span<const double> series, int max_lag);

}  // namespace tfwl
