#include "tfwl.h"

#include <cstring>
#include <new>
#include <string>

#include "errors.hpp"
#include "io_json.hpp"
#include "model.hpp"
#include "reports.hpp"

using namespace tfwl;

struct tfwl_model {
  Model model;
};

struct tfwl_observable {
  Observable obs;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(::operator new(s.size() + 1, std::nothrow));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
tfwl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidInput& e) {
    set_error(e.what());
    return TFWL_ERR_INVALID_INPUT;
  } catch (const CapExceeded& e) {
    set_error(e.what());
    return TFWL_ERR_CAP_EXCEEDED;
  } catch (const CheckFailed& e) {
    set_error(e.what());
    return TFWL_ERR_CHECK_FAILED;
  } catch (const std::exception& e) {
    set_error(e.what());
    return TFWL_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return TFWL_ERR_INTERNAL;
  }
}

tfwl_status emit(const json& j, char** json_out) {
  *json_out = dup_string(j.dump(2));
  if (!*json_out) {
    set_error("out of memory");
    return TFWL_ERR_INTERNAL;
  }
  return TFWL_OK;
}

json parse_params(const char* params_json, const char* what) {
  if (!params_json || !*params_json) return json();
  return parse_json_text(params_json, what);
}

}  // namespace

extern "C" {

uint32_t tfwl_abi_version(void) { return 1; }

const char* tfwl_last_error(void) { return g_last_error.c_str(); }

void tfwl_string_free(char* s) { ::operator delete(s); }

tfwl_status tfwl_model_from_json(const char* text, tfwl_model** out) {
  return guarded([&]() {
    if (!text || !out) {
      set_error("null argument");
      return TFWL_ERR_INVALID_INPUT;
    }
    *out = new tfwl_model{model_from_json_text(text)};
    return TFWL_OK;
  });
}

void tfwl_model_free(tfwl_model* m) { delete m; }

tfwl_status tfwl_model_site_count(const tfwl_model* m, int32_t* out) {
  if (!m || !out) {
    set_error("null argument");
    return TFWL_ERR_INVALID_INPUT;
  }
  *out = m->model.site_count();
  return TFWL_OK;
}

tfwl_status tfwl_observable_from_json(const tfwl_model* m, const char* text,
                                      const char* fallback_id, tfwl_observable** out) {
  return guarded([&]() {
    if (!m || !text || !out) {
      set_error("null argument");
      return TFWL_ERR_INVALID_INPUT;
    }
    const std::string id = fallback_id ? fallback_id : "obs";
    *out = new tfwl_observable{
        observable_from_json_text(m->model.lattice(), text, id)};
    return TFWL_OK;
  });
}

void tfwl_observable_free(tfwl_observable* o) { delete o; }

tfwl_status tfwl_bounds_json(const tfwl_model* m, const tfwl_observable* f,
                             const tfwl_observable* g, char** json_out) {
  return guarded([&]() {
    if (!m || !json_out) {
      set_error("null argument");
      return TFWL_ERR_INVALID_INPUT;
    }
    if (!!f != !!g) {
      set_error("bounds takes either both observables or neither");
      return TFWL_ERR_INVALID_INPUT;
    }
    return emit(bounds_report_json(m->model, f ? &f->obs : nullptr, g ? &g->obs : nullptr),
                json_out);
  });
}

tfwl_status tfwl_exact_json(const tfwl_model* m, const tfwl_observable* const* obs, size_t n_obs,
                            const char* options_json, char** json_out) {
  return guarded([&]() {
    if (!m || !json_out || (n_obs > 0 && !obs)) {
      set_error("null argument");
      return TFWL_ERR_INVALID_INPUT;
    }
    json opts = parse_params(options_json, "exact options");
    ExactOptions eo;
    if (opts.contains("cap")) eo.site_cap = opts.at("cap").get<int>();
    if (opts.contains("matrix_dump_path"))
      eo.matrix_dump_path = opts.at("matrix_dump_path").get<std::string>();
    std::vector<Observable> list;
    for (size_t i = 0; i < n_obs; ++i) list.push_back(obs[i]->obs);
    return emit(exact_report_json(m->model, list, eo), json_out);
  });
}

tfwl_status tfwl_sample_json(const tfwl_model* m, const tfwl_observable* const* obs, size_t n_obs,
                             const char* params_json, char** json_out) {
  return guarded([&]() {
    if (!m || !json_out || (n_obs > 0 && !obs)) {
      set_error("null argument");
      return TFWL_ERR_INVALID_INPUT;
    }
    std::vector<Observable> list;
    for (size_t i = 0; i < n_obs; ++i) list.push_back(obs[i]->obs);
    bool checks_failed = false;
    json rep = sample_report_json(m->model, list, parse_params(params_json, "sample params"),
                                  checks_failed);
    tfwl_status st = emit(rep, json_out);
    if (st != TFWL_OK) return st;
    if (checks_failed) {
      set_error("sample self-check failed");
      return TFWL_ERR_CHECK_FAILED;
    }
    return TFWL_OK;
  });
}

tfwl_status tfwl_correlate_json(const tfwl_model* m, const tfwl_observable* f,
                                const tfwl_observable* g, const char* params_json,
                                char** json_out) {
  return guarded([&]() {
    if (!m || !f || !g || !json_out) {
      set_error("null argument");
      return TFWL_ERR_INVALID_INPUT;
    }
    return emit(
        correlate_report_json(m->model, f->obs, g->obs, parse_params(params_json, "params")),
        json_out);
  });
}

tfwl_status tfwl_verify_json(const tfwl_model* m, const char* params_json, char** json_out) {
  return guarded([&]() {
    if (!m || !json_out) {
      set_error("null argument");
      return TFWL_ERR_INVALID_INPUT;
    }
    bool all_pass = false;
    json rep = verify_report_json(m->model, parse_params(params_json, "verify params"), all_pass);
    tfwl_status st = emit(rep, json_out);
    if (st != TFWL_OK) return st;
    if (!all_pass) {
      set_error("verification failed");
      return TFWL_ERR_CHECK_FAILED;
    }
    return TFWL_OK;
  });
}

}  // extern "C"
