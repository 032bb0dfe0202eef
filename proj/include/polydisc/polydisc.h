/* C interface to libpolydisc. Every object is an opaque handle released by
 * its *_free function; every fallible call returns a pd_status and leaves a
 * message for pd_last_error() on the calling thread. */
#ifndef POLYDISC_POLYDISC_H
#define POLYDISC_POLYDISC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PD_API __declspec(dllexport)
#else
#define PD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pd_status {
  PD_OK = 0,
  PD_INVALID_ARGUMENT = 1,
  PD_DOMAIN = 2,
  PD_GRID_GUARD = 3,
  PD_PARSE = 4,
  PD_IO = 5,
  PD_UNCONVERGED = 6,
  PD_INTERNAL = 100
} pd_status;

typedef struct pd_coeff_fn pd_coeff_fn;
typedef struct pd_config pd_config;
typedef struct pd_report pd_report;

typedef enum pd_family {
  PD_HARDY = 0,
  PD_MIXED_A = 1,
  PD_TRIEBEL_F = 2,
  PD_SUP_D = 3,
  PD_LIMIT_F = 4,
  PD_LIMIT_A = 5
} pd_family;

/* Parameters of a space; unused fields are ignored. Use INFINITY for p = inf. */
typedef struct pd_space {
  pd_family family;
  double p, q, alpha, s, beta;
} pd_space;

typedef enum pd_format { PD_FORMAT_CSV = 0, PD_FORMAT_JSON = 1, PD_FORMAT_BOTH = 2 } pd_format;

PD_API const char* pd_version(void);
/* Message of the last failed call on this thread, "" if none. */
PD_API const char* pd_last_error(void);

/* ---- functions ---- */
PD_API pd_status pd_coeff_from_file(const char* path, pd_coeff_fn** out);
PD_API pd_status pd_coeff_from_text(const char* text, pd_coeff_fn** out);
/* Dense coefficients, row-major with the last variable fastest. */
PD_API pd_status pd_coeff_from_dense(int dim, const size_t* degree, const double* re, const double* im,
                                     pd_coeff_fn** out);
PD_API pd_status pd_coeff_kernel(int dim, const double* w, double beta, pd_coeff_fn** out);
PD_API pd_status pd_coeff_random(uint64_t seed, int dim, size_t degree, const char* law, pd_coeff_fn** out);
PD_API int pd_coeff_dim(const pd_coeff_fn* f);
PD_API size_t pd_coeff_size(const pd_coeff_fn* f);
PD_API pd_status pd_coeff_evaluate(const pd_coeff_fn* f, const double* z_re, const double* z_im, double* out_re,
                                   double* out_im);
PD_API pd_status pd_coeff_frac_derivative(const pd_coeff_fn* f, double beta, pd_coeff_fn** out);
/* Writes the function in the coefficient file format; *out must be released with pd_string_free. */
PD_API pd_status pd_coeff_format(const pd_coeff_fn* f, char** out);
PD_API void pd_coeff_free(pd_coeff_fn* f);

/* ---- norms ---- */
PD_API pd_status pd_space_norm(const pd_coeff_fn* f, const pd_space* space, double* value, int* converged);
PD_API pd_status pd_integral_mean(const pd_coeff_fn* f, const double* r, double p, double* value);

/* ---- experiments ---- */
PD_API pd_status pd_config_parse(const char* text, pd_config** out);
PD_API pd_status pd_config_load(const char* path, pd_config** out);
PD_API size_t pd_config_experiment_count(const pd_config* cfg);
PD_API const char* pd_config_experiment_name(const pd_config* cfg, size_t i);
PD_API const char* pd_config_experiment_kind(const pd_config* cfg, size_t i);
PD_API const char* pd_config_out_dir(const pd_config* cfg);
PD_API pd_format pd_config_format(const pd_config* cfg);
PD_API void pd_config_set_seed(pd_config* cfg, uint64_t seed);
PD_API void pd_config_free(pd_config* cfg);

/* only may be NULL (run everything); workers <= 0 reads POLYDISC_WORKERS. */
PD_API pd_status pd_run(const pd_config* cfg, const char* only, int workers, pd_report** out);
PD_API pd_status pd_report_emit(const pd_report* r, const char* dir, pd_format format);
PD_API size_t pd_report_gate_count(const pd_report* r);
PD_API size_t pd_report_failed_count(const pd_report* r);
/* Gate i across all experiments in order: "<experiment>/<gate>". */
PD_API const char* pd_report_gate_name(const pd_report* r, size_t i);
PD_API int pd_report_gate_passed(const pd_report* r, size_t i);
PD_API const char* pd_report_gate_detail(const pd_report* r, size_t i);
/* JSON payload; *out must be released with pd_string_free. */
PD_API pd_status pd_report_json(const pd_report* r, int include_timing, char** out);
PD_API void pd_report_free(pd_report* r);

PD_API void pd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
