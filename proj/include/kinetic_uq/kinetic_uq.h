/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the kinetic_uq library.
 *
 * Every function returns a kuq_status. On failure, kuq_last_error_message()
 * describes the most recent error raised on the calling thread. Handles are
 * opaque and must be released with the matching *_destroy function; passing
 * NULL to a destroy function is a no-op.
 */
#ifndef KINETIC_UQ_H
#define KINETIC_UQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KUQ_BUILDING_LIBRARY)
#    define KUQ_API __declspec(dllexport)
#  else
#    define KUQ_API __declspec(dllimport)
#  endif
#else
#  define KUQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kuq_status {
    KUQ_OK = 0,
    KUQ_INVALID_ARGUMENT = 1,
    KUQ_NOT_ADMISSIBLE = 2,
    KUQ_SOLVER = 3,
    KUQ_IO = 4,
    KUQ_CONFIG = 5,
    KUQ_INTERNAL = 6
} kuq_status;

typedef struct kuq_config kuq_config;
typedef struct kuq_interpolant kuq_interpolant;
typedef struct kuq_driver kuq_driver;

KUQ_API const char* kuq_status_string(kuq_status status);
/* Message of the last failure on this thread; "" if none. */
KUQ_API const char* kuq_last_error_message(void);
KUQ_API const char* kuq_version(void);

/* ---- configuration ------------------------------------------------------ */

/* Creates a configuration holding the desk-scale defaults. */
KUQ_API kuq_status kuq_config_create(kuq_config** out);
KUQ_API kuq_status kuq_config_load(const char* path, kuq_config** out);
KUQ_API kuq_status kuq_config_parse(const char* text, kuq_config** out);
KUQ_API kuq_status kuq_config_set(kuq_config* config, const char* key, const char* value);
/* Copies the value (NUL terminated) into buf. *needed receives the size
 * including the terminator; KUQ_INVALID_ARGUMENT if buf is too small. */
KUQ_API kuq_status kuq_config_get(const kuq_config* config, const char* key, char* buf, size_t buf_size,
                                  size_t* needed);
KUQ_API void kuq_config_destroy(kuq_config* config);

/* ---- Leja points and the model ------------------------------------------ */

/* Writes the first `depth` Leja points into out[0..depth). */
KUQ_API kuq_status kuq_leja_points(size_t depth, double* out);

/* Phase-space size nx * nv of the configured grid. */
KUQ_API kuq_status kuq_model_payload_size(const kuq_config* config, size_t* out);

/* Solves the configured model (first epsilon) at z[0..z_len) and writes
 * f(T) row-major (x outer, v inner) into out[0..payload). Missing trailing
 * parameters are 0; extra ones are an error. */
KUQ_API kuq_status kuq_solve(const kuq_config* config, const double* z, size_t z_len, double* out, size_t out_len);

/* Writes f to <prefix>.bin (float64, little endian, row-major) and
 * <prefix>.csv (grid metadata). */
KUQ_API kuq_status kuq_write_solution(const kuq_config* config, const double* f, size_t len, const char* prefix);

/* Runs the configured experiment; results go to the configured output dir.
 * final_error / slope receive the values of the first epsilon when non-NULL
 * (slope is NaN with fewer than 4 error records). */
KUQ_API kuq_status kuq_run_experiment(const kuq_config* config, double* final_error, double* slope);

/* Best-n Legendre truncation error of the configured model restricted to the
 * first `dim` parameters (others held at 0). errors[k] receives the error
 * with k + 1 terms kept, for k < n_terms. */
KUQ_API kuq_status kuq_best_n_oracle(const kuq_config* config, size_t dim, size_t max_degree, size_t n_terms,
                                     double* errors);

/* ---- interpolant -------------------------------------------------------- */

KUQ_API kuq_status kuq_interpolant_create(size_t d_max, size_t payload_size, kuq_interpolant** out);
/* `index` uses the sparse "j:v,j:v" form; "" is the null index. */
KUQ_API kuq_status kuq_interpolant_add_node(kuq_interpolant* interp, const char* index, const double* data,
                                            size_t len);
/* Writes the node z_nu (d_max values) of `index`. */
KUQ_API kuq_status kuq_interpolant_node(kuq_interpolant* interp, const char* index, double* z_out, size_t len);
KUQ_API kuq_status kuq_interpolant_evaluate(const kuq_interpolant* interp, const double* z, size_t z_len,
                                            double* out, size_t out_len);
KUQ_API kuq_status kuq_interpolant_size(const kuq_interpolant* interp, size_t* out);
KUQ_API kuq_status kuq_interpolant_save(const kuq_interpolant* interp, const char* dir);
KUQ_API kuq_status kuq_interpolant_load(const char* dir, kuq_interpolant** out);
KUQ_API void kuq_interpolant_destroy(kuq_interpolant* interp);

/* ---- drivers ------------------------------------------------------------ */

typedef struct kuq_step_info {
    size_t step;
    double criterion;
    size_t model_solves_total;
    size_t operator_applies_total;
    size_t pool_size;
    double wall_ms;
    char selected_index[256]; /* truncated if longer */
} kuq_step_info;

/* Driver over the configured model (first epsilon); kind and seed come from
 * the configuration. The driver keeps its own copy of the model. */
KUQ_API kuq_status kuq_driver_create(const kuq_config* config, kuq_driver** out);
KUQ_API kuq_status kuq_driver_step(kuq_driver* driver, kuq_step_info* info);
KUQ_API kuq_status kuq_driver_save_interpolant(const kuq_driver* driver, const char* dir);
KUQ_API void kuq_driver_destroy(kuq_driver* driver);

#ifdef __cplusplus
}
#endif

#endif /* KINETIC_UQ_H */
