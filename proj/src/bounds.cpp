#include "bounds.hpp"

#include <cmath>

#include "errors.hpp"

namespace tfwl {

double gap_lower_bound(double C, int R, double lambda, double beta, int d) {
  const double envelope = std::max(1.0, beta * lambda);
  return std::exp(-2.0 * beta * C) -
         5.0 * envelope * std::pow(2.0 * R, d) * std::expm1(3.0 * beta * C);
}

DecayConstants decay_constants(double C, int R, double lambda, double beta, int d) {
  const double gamma = gap_lower_bound(C, R, lambda, beta, d);
  if (!(gamma > 0.0)) throw InvalidInput("decay constants undefined: gap lower bound not positive");
  const int Reff = std::max(R, 1);
  DecayConstants out;
  out.N = std::pow(2.0 / -std::expm1(-1.0 / Reff), d);
  const double M = 10.0 * std::max(1.0, lambda * beta) * std::exp(beta * C + 1.0);
  out.delta = (1.0 / (2.0 * Reff)) * std::min(0.5, gamma / M);
  return out;
}

FspConstants finite_speed_constants(double C, int R, double lambda, double beta, int d) {
  const int Reff = std::max(R, 1);
  FspConstants out;
  out.N = std::pow(2.0 / -std::expm1(-1.0 / Reff), d);
  out.M = 10.0 * std::max(1.0, lambda * beta) * std::exp(beta * C + 1.0);
  out.epsilon = 1.0 / (2.0 * Reff);
  return out;
}

BoundsReport bounds_report(const Model& m) {
  const auto& k = m.constants();
  BoundsReport r;
  r.C = k.C;
  r.R = k.R;
  r.lambda_max = k.lambda_max;
  r.beta = m.beta();
  r.dimension = m.lattice().dimension();
  r.gamma = gap_lower_bound(k.C, k.R, k.lambda_max, m.beta(), r.dimension);
  r.gap_positive = r.gamma > 0.0;
  if (r.gap_positive) {
    auto dc = decay_constants(k.C, k.R, k.lambda_max, m.beta(), r.dimension);
    r.N_decay = dc.N;
    r.delta = dc.delta;
  }
  auto fsp = finite_speed_constants(k.C, k.R, k.lambda_max, m.beta(), r.dimension);
  r.N_fsp = fsp.N;
  r.M = fsp.M;
  r.epsilon = fsp.epsilon;
  return r;
}

double decay_bound(const Model& m, const Observable& f, const Observable& g) {
  const auto& k = m.constants();
  const int d = m.lattice().dimension();
  const double gamma = gap_lower_bound(k.C, k.R, k.lambda_max, m.beta(), d);
  if (!(gamma > 0.0)) throw InvalidInput("decay bound not applicable: gap lower bound not positive");
  auto sf = f.effective_support();
  auto sg = g.effective_support();
  if (sf.empty() || sg.empty())
    throw InvalidInput("decay bound requires nonempty effective supports");
  int dist = m.lattice().distance(sf[0], sg[0]);
  for (int a : sf)
    for (int b : sg) dist = std::min(dist, m.lattice().distance(a, b));
  auto dc = decay_constants(k.C, k.R, k.lambda_max, m.beta(), d);
  return (f.sup_norm() * g.sup_norm() + dc.N * f.triple_norm() * g.triple_norm()) *
         std::exp(-dc.delta * dist);
}

}  // namespace tfwl
