#pragma once

#include <array>
#include <cstdint>

#include "rng.hpp"
#include "worldline.hpp"

namespace tfwl {

// Envelope rates of the exponential clocks driving the jump chain:
// additions of either mark at site i together run at lambda_i*beta*e^{beta C}
// (two clocks of half that), every existing point carries a unit removal
// clock, each site a flip clock of rate e^{beta C / 2}.
struct RateTable {
  double add_total = 0.0;
  double removal_total = 0.0;
  double flip_total = 0.0;
  double total() const { return add_total + removal_total + flip_total; }
};

RateTable total_rates(const Model& m, const Config& c);

// acceptance given the precomputed path-energy increment
double acceptance_prob_from_delta(const Model& m, MoveKind kind, double delta);
double acceptance_prob(const Model& m, const Config& c, const Move& mv);

struct MoveStats {
  std::array<uint64_t, 5> proposed{};
  std::array<uint64_t, 5> accepted{};
};

struct EventRecord {
  double clock = 0.0;    // process time at which the event fires
  double holding = 0.0;  // exponential holding time that preceded it
  Move move;
  bool accepted = false;
  double delta = 0.0;
};

// One realization of the jump chain. Strictly sequential; run several
// instances with independent seeds for ensembles.
class Chain {
 public:
  Chain(const Model& m, uint64_t seed);
  Chain(const Model& m, Config initial, uint64_t seed);

  const Model& model() const { return *model_; }
  const Config& config() const { return config_; }
  double clock() const { return clock_; }
  const MoveStats& stats() const { return stats_; }
  int point_count() const { return total_points_; }
  // cached spin assignment sigma(0), kept in sync with the configuration
  std::span<const int8_t> sigma0() const { return sigma0_; }
  RateTable rates() const;

  EventRecord step();

 private:
  const Model* model_;
  Config config_;
  double clock_ = 0.0;
  Rng rng_;
  MoveStats stats_;
  std::vector<int8_t> sigma0_;
  std::vector<int> points_per_site_;
  int total_points_ = 0;
  double exp_beta_c_ = 1.0;
  double exp_beta_c_half_ = 1.0;
  std::vector<double> lambda_cum_;
  double lambda_total_ = 0.0;
  double add_total_ = 0.0;
  double flip_total_ = 0.0;

  void init();
  Move propose(double u);
};

// The auxiliary symmetric kernel used by the curvature-style gap machinery.
// Cases by move category (+ addition, - removal, 0 flip) on distinct sites;
// same-site pairs give 0, any pair with a removal gives 1, the rest are
// exponentials of the (sign-adjusted) second difference of the path energy.
double r_value(const Model& m, const Config& c, const Move& g, const Move& d);

struct SymmetryReport {
  double r_forward = 0.0;
  double r_swapped = 0.0;
  double symmetry_residual = 0.0;  // |r(x,g,d) - r(x,d,g)|, must be 0
  bool commute_exact = false;      // apply in both orders, bitwise equal
  double rn_residual = 0.0;        // (+,+) density-ratio identity, relative
  bool rn_checked = false;
};

SymmetryReport check_symmetry_identities(const Model& m, const Config& c,
                                         const Move& g, const Move& d);

// Pointwise reversibility residual for one move, relative scale, computed in
// log space: forward rate times stationary weight against backward rate times
// weight at the moved configuration (Poisson prior ratio accounted).
// corrupt_scale multiplies the forward rate; 1.0 is the honest chain.
double detailed_balance_residual(const Model& m, const Config& c, const Move& mv,
                                 double corrupt_scale = 1.0);

}  // namespace tfwl
