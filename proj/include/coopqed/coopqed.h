/* C interface to the coopqed simulation library.
 *
 * Handles are opaque; every function that can fail returns a cq_status and
 * leaves a human-readable message retrievable with cq_last_error() on the
 * calling thread. Frequencies are angular (rad/s), times are seconds.
 */
#ifndef COOPQED_COOPQED_H_
#define COOPQED_COOPQED_H_

#include <stddef.h>

#if defined(COOPQED_BUILDING_LIBRARY)
#define COOPQED_API __attribute__((visibility("default")))
#else
#define COOPQED_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes 1-3 double as the CLI exit codes. */
typedef enum cq_status {
  CQ_OK = 0,
  CQ_ERROR_CONFIG = 1,
  CQ_ERROR_VALIDATION = 2,
  CQ_ERROR_INTEGRATION = 3, /* NormDrift or StepTooLarge */
  CQ_ERROR_IO = 4,
  CQ_ERROR_INVALID_ARGUMENT = 5,
  CQ_ERROR_DEGENERATE = 6,
  CQ_ERROR_NO_PLATEAU = 7,
  CQ_ERROR_INTERNAL = 8
} cq_status;

typedef struct cq_config_t* cq_config;
typedef struct cq_model_t* cq_model;

typedef struct cq_params {
  double omega_c;
  double omega_l;
  double omega_r;
  double eta_l;
  double eta_r;
  double epsilon_d;
  double omega_d;
} cq_params;

typedef struct cq_complex {
  double re;
  double im;
} cq_complex;

typedef struct cq_cluster {
  int n;
  double energies[3];
  /* Row-major: coeffs[3 * l + k], l in (L, C, R), k the dressed level. */
  double coeffs[9];
  double norms[3];
  int null_space_fallback[3];
} cq_cluster;

typedef struct cq_measures {
  double c2;
  double c3_literal;
  double c3_residual;
  double async;
} cq_measures;

typedef struct cq_delay {
  int found; /* 0 when no plateau was detected */
  double tau_d;
  double saturated_value;
  double plateau_level;
} cq_delay;

typedef struct cq_run_summary {
  size_t samples;
  cq_delay c2;
  cq_delay c3;
  cq_delay async;
  int a_bar_found;
  double a_bar;
  size_t clamp_count;
  size_t warning_count;
} cq_run_summary;

typedef struct cq_sweep_summary {
  size_t points;
  size_t converged;
} cq_sweep_summary;

COOPQED_API const char* cq_version(void);
COOPQED_API const char* cq_status_name(cq_status status);
/* Message of the last failure on this thread; "" after a success. */
COOPQED_API const char* cq_last_error(void);
COOPQED_API void cq_string_free(char* text);

/* Configuration */
COOPQED_API cq_status cq_config_load_file(const char* path, cq_config* out);
COOPQED_API cq_status cq_config_parse(const char* text, cq_config* out);
COOPQED_API void cq_config_free(cq_config config);
COOPQED_API cq_status cq_config_params(cq_config config, cq_params* out);
/* Canonical config text; release with cq_string_free. */
COOPQED_API cq_status cq_config_text(cq_config config, char** text_out);

/* Pipelines. out_dir may be NULL: $COOPQED_OUTPUT_DIR, then "out". */
COOPQED_API cq_status cq_describe(cq_config config, char** text_out);
COOPQED_API cq_status cq_run(cq_config config, const char* out_dir, cq_run_summary* summary);
/* jobs <= 0 takes the value from the config. */
COOPQED_API cq_status cq_sweep(cq_config config, const char* out_dir, int jobs, cq_sweep_summary* summary);
/* Warning lines from the last cq_run / cq_sweep on this thread, '\n'-separated. */
COOPQED_API const char* cq_last_warnings(void);

/* Building blocks */
COOPQED_API cq_status cq_validate(const cq_params* params, char** report_out);
COOPQED_API cq_status cq_model_create(const cq_params* params, int include_cavity_offset, cq_model* out);
COOPQED_API void cq_model_free(cq_model model);
COOPQED_API cq_status cq_model_cluster(cq_model model, int n, cq_cluster* out);
/* lambda[3 * j + k], zeta[3 * k + j]; either pointer may be NULL. */
COOPQED_API cq_status cq_model_couplings(cq_model model, double* lambda, double* zeta);
/* Writes samples * 6 amplitudes into states (lab-frame bare basis). If
 * capacity is too small, returns CQ_ERROR_INVALID_ARGUMENT with *samples
 * set to the required count. */
COOPQED_API cq_status cq_model_evolve(cq_model model, const cq_complex initial[6], double t_max, double dt,
                                      cq_complex* states, size_t capacity, size_t* samples);
COOPQED_API cq_status cq_measures_eval(const cq_complex gamma[6], cq_measures* out);

#ifdef __cplusplus
}
#endif

#endif /* COOPQED_COOPQED_H_ */
