#pragma once

#include <string>
#include <vector>

#include "model.hpp"
#include "rng.hpp"
#include "worldline.hpp"

#include <json.hpp>

namespace tfwl {

struct VerifyOptions {
  uint64_t seed = 0;
  int trials = 1000;
  double balance_tol = 1e-12;
  double rn_tol = 1e-12;
  double locality_tol = 1e-10;
  // multiplies the forward rate inside the balance residuals; a test hook,
  // any value != 1 must make the balance check fail
  double corrupt_rate_scale = 1.0;
  // free-field stationarity check
  double poisson_run_length = 6000.0;
  double poisson_burn_in = 50.0;
  double poisson_snapshot_dt = 4.0;
  double poisson_p_floor = 0.01;
};

struct CheckOutcome {
  std::string name;
  bool pass = true;
  int trials = 0;
  double max_residual = 0.0;
  std::string detail;
  nlohmann::json failing_probe;  // serialized config + move(s) for replay
};

// random prior-like configuration for probes (point count floor keeps
// removal moves available even at small lambda*beta)
Config random_probe_config(const Model& m, Rng& rng);
Move random_probe_move(const Model& m, const Config& c, Rng& rng);

CheckOutcome check_balance(const Model& m, const VerifyOptions& o);
// A2 swap symmetry (exact), plus the (+,+) density-ratio residual
CheckOutcome check_rn(const Model& m, const VerifyOptions& o);
// A3 commutation of moves on distinct sites (exact configuration equality)
CheckOutcome check_commute(const Model& m, const VerifyOptions& o);
// local increment vs global path-energy difference, and |delta| <= beta*C
CheckOutcome check_locality(const Model& m, const VerifyOptions& o);
// free-field chain: per-site xi counts ~ Poisson(lambda_i beta / 2) and
// accepted-flip window counts ~ Poisson(rate 1), chi-square at p_floor
CheckOutcome check_poisson(const Model& m, const VerifyOptions& o);

std::vector<CheckOutcome> run_checks(const Model& m, const std::vector<std::string>& names,
                                     const VerifyOptions& o);

}  // namespace tfwl
