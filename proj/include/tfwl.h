/* tfwl — transverse-field worldline simulator, public C API.
 *
 * The library simulates quantum spin systems built from a classical lattice
 * Hamiltonian plus transverse fields, using a continuous-time worldline
 * representation: marked point processes on the circle [0, beta). It
 * estimates thermal means and truncated correlations, solves small systems
 * exactly by dense diagonalization, evaluates closed-form spectral-gap and
 * correlation-decay constants, and runs reversibility/symmetry verification
 * probes on the jump dynamics.
 *
 * All inputs and outputs cross this boundary as UTF-8 JSON strings; handles
 * are opaque. Report strings are allocated by the library and must be
 * released with tfwl_string_free. Functions return TFWL_OK on success; on
 * failure tfwl_last_error() describes the problem (thread-local, valid until
 * the next tfwl_* call on the same thread).
 */

#ifndef TFWL_H
#define TFWL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TFWL_API __declspec(dllexport)
#else
#define TFWL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tfwl_status {
  TFWL_OK = 0,
  TFWL_ERR_INVALID_INPUT = 1, /* malformed JSON, violated model invariants */
  TFWL_ERR_CAP_EXCEEDED = 2,  /* resource limit (e.g. exact-solver site cap) */
  TFWL_ERR_CHECK_FAILED = 3,  /* a verification check or internal invariant failed */
  TFWL_ERR_INTERNAL = 4
} tfwl_status;

typedef struct tfwl_model tfwl_model;
typedef struct tfwl_observable tfwl_observable;

TFWL_API uint32_t tfwl_abi_version(void);
TFWL_API const char* tfwl_last_error(void);
TFWL_API void tfwl_string_free(char* s);

/* Model config JSON: {"dimension", "box", "boundary": "free"|"periodic",
 * "beta", "terms": [{"sites": [[coords]...], "coeff"}...],
 * "fields": number|array, "weight_sign": "boltzmann"|"paper", "range_cap"?} */
TFWL_API tfwl_status tfwl_model_from_json(const char* json, tfwl_model** out);
TFWL_API void tfwl_model_free(tfwl_model* m);
TFWL_API tfwl_status tfwl_model_site_count(const tfwl_model* m, int32_t* out);

/* Observable JSON: {"support": [[coords]...],
 * "table": [{"spins": [+-1...], "value"}...], "id"?}. The model fixes the
 * lattice geometry. fallback_id names the observable when "id" is absent. */
TFWL_API tfwl_status tfwl_observable_from_json(const tfwl_model* m, const char* json,
                                               const char* fallback_id, tfwl_observable** out);
TFWL_API void tfwl_observable_free(tfwl_observable* o);

/* Closed-form constants report; f and g (optional, pass NULL) add observable
 * norms and the correlation decay bound for the pair. */
TFWL_API tfwl_status tfwl_bounds_json(const tfwl_model* m, const tfwl_observable* f,
                                      const tfwl_observable* g, char** json_out);

/* Exact thermal means and pairwise truncated correlations by dense
 * diagonalization. options JSON (nullable): {"cap": 12,
 * "matrix_dump_path": "..."}. Exceeding the cap fails with CAP_EXCEEDED. */
TFWL_API tfwl_status tfwl_exact_json(const tfwl_model* m, const tfwl_observable* const* obs,
                                     size_t n_obs, const char* options_json, char** json_out);

/* Sampling run. params JSON: {"burn_in", "run_length", "batches", "seed",
 * "chains", "threads", "observation": "time-weighted"|"grid", "grid_dt",
 * "rotation_average", "method": "mcmc"|"importance", "samples", "ess_floor",
 * "include_exact", "self_check", "trace_path", "series_path",
 * "final_config_path"}. Identical (model, params) give identical scientific
 * output; only the "timings" block varies. Returns CHECK_FAILED if
 * self_check probes fail (report still produced). */
TFWL_API tfwl_status tfwl_sample_json(const tfwl_model* m, const tfwl_observable* const* obs,
                                      size_t n_obs, const char* params_json, char** json_out);

/* Truncated-correlation estimate for a pair of observables (same params as
 * tfwl_sample_json; "samples" adds an importance-sampling cross-estimate). */
TFWL_API tfwl_status tfwl_correlate_json(const tfwl_model* m, const tfwl_observable* f,
                                         const tfwl_observable* g, const char* params_json,
                                         char** json_out);

/* Verification probes. params JSON (nullable): {"checks": ["rn", "commute",
 * "balance", "poisson", "locality"], "trials", "seed", "corrupt_rate_scale",
 * "poisson_run_length", "poisson_snapshot_dt"}. Returns CHECK_FAILED when a
 * check fails; the report then carries the offending probe for replay. */
TFWL_API tfwl_status tfwl_verify_json(const tfwl_model* m, const char* params_json,
                                      char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* TFWL_H */
