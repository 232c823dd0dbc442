#pragma once

#include <string>
#include <vector>

#include "io_json.hpp"
#include "model.hpp"

namespace tfwl {

// Report builders behind the bounds/exact/sample/correlate/verify commands.
// Everything scientific in the outputs is a pure function of (model, params);
// only the "timings" block varies between runs.

json bounds_report_json(const Model& m, const Observable* f, const Observable* g);

struct ExactOptions {
  int site_cap = 12;
  std::string matrix_dump_path;  // optional binary Hamiltonian dump
};
json exact_report_json(const Model& m, const std::vector<Observable>& obs,
                       const ExactOptions& opt);

// params: mcmc_params_from_json fields plus {method: "mcmc"|"importance",
// samples, ess_floor, include_exact: bool|"auto", exact_cap, trace_path,
// series_path, final_config_path, self_check: bool}
json sample_report_json(const Model& m, const std::vector<Observable>& obs, const json& params,
                        bool& checks_failed);

json correlate_report_json(const Model& m, const Observable& f, const Observable& g,
                           const json& params);

// params: {checks: [..], trials, seed, corrupt_rate_scale, poisson_run_length,
// poisson_snapshot_dt}; all_pass reports the overall outcome
json verify_report_json(const Model& m, const json& params, bool& all_pass);

}  // namespace tfwl
