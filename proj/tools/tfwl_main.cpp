// tfwl command-line front end. Talks to the engine exclusively through the
// public C API in tfwl.h; all scientific work happens inside libtfwl.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tfwl.h"

namespace {

int fail(const std::string& msg, int code) {
  std::cerr << "tfwl: " << msg << "\n";
  return code;
}

bool read_file(const std::string& path, std::string& out, std::string& err) {
  std::ifstream in(path);
  if (!in) {
    err = "cannot read " + path;
    return false;
  }
  std::ostringstream os;
  os << in.rdbuf();
  out = os.str();
  return true;
}

std::string stem_of(const std::string& path) {
  auto slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = name.find_last_of('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

int write_report(const char* report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report << "\n";
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) return 1;
  out << report << "\n";
  return out ? 0 : 1;
}

struct ModelHandle {
  tfwl_model* ptr = nullptr;
  ~ModelHandle() { tfwl_model_free(ptr); }
};

struct ObsHandles {
  std::vector<tfwl_observable*> ptrs;
  ~ObsHandles() {
    for (auto* p : ptrs) tfwl_observable_free(p);
  }
};

int load_model(const std::string& path, ModelHandle& m) {
  std::string text, err;
  if (!read_file(path, text, err)) return fail(err, 1);
  if (tfwl_model_from_json(text.c_str(), &m.ptr) != TFWL_OK)
    return fail(tfwl_last_error(), 1);
  return 0;
}

int load_observables(const ModelHandle& m, const std::vector<std::string>& paths, ObsHandles& o) {
  for (const auto& p : paths) {
    std::string text, err;
    if (!read_file(p, text, err)) return fail(err, 1);
    tfwl_observable* obs = nullptr;
    if (tfwl_observable_from_json(m.ptr, text.c_str(), stem_of(p).c_str(), &obs) != TFWL_OK)
      return fail(std::string(p) + ": " + tfwl_last_error(), 1);
    o.ptrs.push_back(obs);
  }
  return 0;
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

int finish(tfwl_status st, char* report, const std::string& out_path) {
  if (!report) return fail(tfwl_last_error(), st == TFWL_OK ? 4 : static_cast<int>(st));
  const int wr = write_report(report, out_path);
  tfwl_string_free(report);
  if (wr != 0) return fail("cannot write report", 1);
  if (st != TFWL_OK) {
    std::cerr << "tfwl: " << tfwl_last_error() << "\n";
    return static_cast<int>(st);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tfwl — transverse-field worldline simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::vector<std::string> observable_paths;
  uint64_t seed = 0;
  int threads = 1;

  auto add_common = [&](CLI::App* cmd, bool need_obs) {
    cmd->add_option("--config", config_path, "model config JSON")->required();
    cmd->add_option("--out", out_path, "write the report here instead of stdout");
    cmd->add_option("--seed", seed, "master RNG seed");
    cmd->add_option("--threads", threads, "worker threads for parallel chains");
    auto* o = cmd->add_option("--observables", observable_paths,
                              "observable JSON files (comma separated)");
    o->delimiter(',');
    if (need_obs) o->required();
  };

  auto* cmd_bounds = app.add_subcommand("bounds", "closed-form gap and decay constants");
  add_common(cmd_bounds, false);

  auto* cmd_exact = app.add_subcommand("exact", "dense-diagonalization thermal values");
  add_common(cmd_exact, false);
  int cap = 12;
  std::string matrix_dump;
  cmd_exact->add_option("--cap", cap, "site cap for the dense solver");
  cmd_exact->add_option("--dump-matrix", matrix_dump, "binary Hamiltonian dump path");

  auto* cmd_sample = app.add_subcommand("sample", "worldline Monte Carlo estimates");
  add_common(cmd_sample, true);
  double run_length = 1000.0, burn_in = 10.0, grid_dt = 0.0;
  int batches = 16, chains = 1;
  int64_t samples = 0;
  std::string method = "mcmc", observation = "time-weighted";
  std::string trace_path, series_path, final_config_path;
  bool self_check = false, rotation_average = false;
  cmd_sample->add_option("--run-length", run_length, "process time per chain after burn-in");
  cmd_sample->add_option("--burn-in", burn_in, "discarded initial process time");
  cmd_sample->add_option("--batches", batches, "equal-time batches for error bars (>= 8)");
  cmd_sample->add_option("--chains", chains, "independent chains to average");
  cmd_sample->add_option("--method", method, "mcmc | importance");
  cmd_sample->add_option("--samples", samples, "importance-sampling draw count");
  cmd_sample->add_option("--observation", observation, "time-weighted | grid");
  cmd_sample->add_option("--grid-dt", grid_dt, "grid spacing for --observation grid");
  cmd_sample->add_flag("--rotation-average", rotation_average,
                       "average observables over the whole circle");
  cmd_sample->add_flag("--self-check", self_check, "run verification probes before reporting");
  cmd_sample->add_option("--trace", trace_path, "event trace CSV of the model's chain");
  cmd_sample->add_option("--series", series_path, "time series CSV (clock,value,weight)");
  cmd_sample->add_option("--final-config", final_config_path,
                         "colored-trajectory CSV of the final configuration");

  auto* cmd_correlate = app.add_subcommand("correlate", "truncated correlation of two observables");
  add_common(cmd_correlate, true);
  double c_run_length = 1000.0, c_burn_in = 10.0;
  int c_batches = 16, c_chains = 1;
  int64_t c_samples = 0;
  cmd_correlate->add_option("--run-length", c_run_length, "process time per chain after burn-in");
  cmd_correlate->add_option("--burn-in", c_burn_in, "discarded initial process time");
  cmd_correlate->add_option("--batches", c_batches, "equal-time batches (>= 8)");
  cmd_correlate->add_option("--chains", c_chains, "independent chains to average");
  cmd_correlate->add_option("--samples", c_samples,
                            "add an importance-sampling cross-estimate of this size");

  auto* cmd_verify = app.add_subcommand("verify", "reversibility and symmetry probe suites");
  add_common(cmd_verify, false);
  std::vector<std::string> checks;
  int trials = 1000;
  double corrupt_rate = 1.0;
  cmd_verify->add_option("--checks", checks, "rn,commute,balance,poisson,locality")->delimiter(',');
  cmd_verify->add_option("--trials", trials, "probes per check");
  cmd_verify
      ->add_option("--test-corrupt-rate", corrupt_rate,
                   "testing hook: scale the forward rate in balance residuals")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  ModelHandle model;
  if (int rc = load_model(config_path, model); rc != 0) return rc;
  ObsHandles obs;
  if (int rc = load_observables(model, observable_paths, obs); rc != 0) return rc;

  char* report = nullptr;
  tfwl_status st = TFWL_OK;

  if (app.got_subcommand(cmd_bounds)) {
    if (!obs.ptrs.empty() && obs.ptrs.size() != 2)
      return fail("bounds takes zero or exactly two observables", 1);
    st = tfwl_bounds_json(model.ptr, obs.ptrs.empty() ? nullptr : obs.ptrs[0],
                          obs.ptrs.empty() ? nullptr : obs.ptrs[1], &report);
  } else if (app.got_subcommand(cmd_exact)) {
    std::ostringstream opts;
    opts << "{\"cap\": " << cap;
    if (!matrix_dump.empty()) opts << ", \"matrix_dump_path\": " << json_string(matrix_dump);
    opts << "}";
    st = tfwl_exact_json(model.ptr, obs.ptrs.data(), obs.ptrs.size(), opts.str().c_str(), &report);
  } else if (app.got_subcommand(cmd_sample)) {
    std::ostringstream params;
    params << "{\"burn_in\": " << burn_in << ", \"run_length\": " << run_length
           << ", \"batches\": " << batches << ", \"seed\": " << seed
           << ", \"chains\": " << chains << ", \"threads\": " << threads
           << ", \"method\": " << json_string(method)
           << ", \"observation\": " << json_string(observation);
    if (grid_dt > 0) params << ", \"grid_dt\": " << grid_dt;
    if (samples > 0) params << ", \"samples\": " << samples;
    if (rotation_average) params << ", \"rotation_average\": true";
    if (self_check) params << ", \"self_check\": true";
    if (!trace_path.empty()) params << ", \"trace_path\": " << json_string(trace_path);
    if (!series_path.empty()) params << ", \"series_path\": " << json_string(series_path);
    if (!final_config_path.empty())
      params << ", \"final_config_path\": " << json_string(final_config_path);
    params << "}";
    st = tfwl_sample_json(model.ptr, obs.ptrs.data(), obs.ptrs.size(), params.str().c_str(),
                          &report);
  } else if (app.got_subcommand(cmd_correlate)) {
    if (obs.ptrs.size() != 2) return fail("correlate needs exactly two observables", 1);
    std::ostringstream params;
    params << "{\"burn_in\": " << c_burn_in << ", \"run_length\": " << c_run_length
           << ", \"batches\": " << c_batches << ", \"seed\": " << seed
           << ", \"chains\": " << c_chains << ", \"threads\": " << threads;
    if (c_samples > 0) params << ", \"samples\": " << c_samples;
    params << "}";
    st = tfwl_correlate_json(model.ptr, obs.ptrs[0], obs.ptrs[1], params.str().c_str(), &report);
  } else if (app.got_subcommand(cmd_verify)) {
    std::ostringstream params;
    params << "{\"trials\": " << trials << ", \"seed\": " << seed
           << ", \"corrupt_rate_scale\": " << corrupt_rate;
    if (!checks.empty()) {
      params << ", \"checks\": [";
      for (size_t i = 0; i < checks.size(); ++i) {
        if (i) params << ", ";
        params << json_string(checks[i]);
      }
      params << "]";
    }
    params << "}";
    st = tfwl_verify_json(model.ptr, params.str().c_str(), &report);
  }

  return finish(st, report, out_path);
}
