#pragma once

#include "model.hpp"

namespace tfwl {

// Spectral-gap lower bound
//   gamma = e^{-2 beta C} - 5 max(1, beta lambda) (2R)^d (e^{3 beta C} - 1).
// May be negative; callers decide what that means.
double gap_lower_bound(double C, int R, double lambda, double beta, int d);

// Correlation-decay constants (require gamma > 0):
//   N = (2 / (1 - e^{-1/R}))^d,
//   delta = (1/2R) min(1/2, gamma / (10 max(1, lambda beta) e^{beta C + 1})).
// R = 0 is evaluated with R <- 1 here (conservative), while gamma keeps R = 0.
struct DecayConstants {
  double N = 0.0;
  double delta = 0.0;
};
DecayConstants decay_constants(double C, int R, double lambda, double beta, int d);

// Finite-speed-of-propagation constants:
//   N as above, M = 10 max(1, lambda beta) e^{beta C + 1}, epsilon = 1/(2R).
struct FspConstants {
  double N = 0.0;
  double M = 0.0;
  double epsilon = 0.0;
};
FspConstants finite_speed_constants(double C, int R, double lambda, double beta, int d);

struct BoundsReport {
  double C = 0.0;
  int R = 0;
  double lambda_max = 0.0;
  double beta = 0.0;
  int dimension = 0;
  double gamma = 0.0;
  bool gap_positive = false;
  // set only when gamma > 0
  double N_decay = 0.0;
  double delta = 0.0;
  double N_fsp = 0.0;
  double M = 0.0;
  double epsilon = 0.0;
};

BoundsReport bounds_report(const Model& m);

// (||f|| ||g|| + N |||f||| |||g|||) e^{-delta d(supp f, supp g)} with the
// l-infinity distance between effective supports. Throws if gamma <= 0 or
// either effective support is empty.
double decay_bound(const Model& m, const Observable& f, const Observable& g);

}  // namespace tfwl
