/*
 * Copyright 2026 The hyplab Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to hyplab. Every function returning hyplab_status leaves a
 * thread-local message retrievable with hyplab_last_error() on failure.
 * Handles are opaque and owned by the caller once created.
 */
#ifndef HYPLAB_HYPLAB_H
#define HYPLAB_HYPLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HYPLAB_BUILDING_LIBRARY)
#    define HYPLAB_API __declspec(dllexport)
#  else
#    define HYPLAB_API __declspec(dllimport)
#  endif
#else
#  define HYPLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hyplab_status {
    HYPLAB_OK = 0,
    HYPLAB_E_INVALID_ARGUMENT = 1,
    HYPLAB_E_INVALID_CONFIG = 2,
    HYPLAB_E_RANK_DEFICIENT = 3,
    HYPLAB_E_SINGULAR_MATRIX = 4,
    HYPLAB_E_NON_CONVERGED = 5,
    HYPLAB_E_MISSING_STREAM = 6,
    HYPLAB_E_DEGENERATE_ENSEMBLE = 7,
    HYPLAB_E_IO = 8,
    HYPLAB_E_USAGE = 9,
    HYPLAB_E_INTERNAL = 10
} hyplab_status;

typedef struct hyplab_config hyplab_config;
typedef struct hyplab_report hyplab_report;
typedef struct hyplab_invocation hyplab_invocation;

/* One pass/fail entry of a report. Strings live as long as the report. */
typedef struct hyplab_check {
    const char* name;
    double value;
    const char* relation; /* "<=", ">=" or "<" */
    double threshold;
    int pass;
    int is_ks; /* 1 for Kolmogorov-Smirnov entries */
} hyplab_check;

HYPLAB_API const char* hyplab_version(void);
HYPLAB_API const char* hyplab_status_name(hyplab_status status);
/* Message of the last failure on this thread ("" if none). */
HYPLAB_API const char* hyplab_last_error(void);

/* ---- Experiment configuration ------------------------------------------ */

/* kind: normal-coords, sup-norm, min-coord, inner-product, least-singular,
 * upper-tail, eigenvector, distance-conc, hanson-wright, berry-esseen,
 * neg-second-moment, sphere-baseline. Defaults match the command line. */
HYPLAB_API hyplab_status hyplab_config_create(const char* kind, hyplab_config** out);
HYPLAB_API void hyplab_config_destroy(hyplab_config* config);

HYPLAB_API hyplab_status hyplab_config_set_n(hyplab_config* config, size_t n);
HYPLAB_API hyplab_status hyplab_config_set_trials(hyplab_config* config, size_t trials);
HYPLAB_API hyplab_status hyplab_config_set_seed(hyplab_config* config, uint64_t seed);
HYPLAB_API hyplab_status hyplab_config_set_threads(hyplab_config* config, size_t threads);
/* token: gaussian, bernoulli, custom:<file.json>, optionally :real/:complex.
 * field (may be NULL) applies when the token carries none. */
HYPLAB_API hyplab_status hyplab_config_set_dist(hyplab_config* config, const char* token, const char* field);
HYPLAB_API hyplab_status hyplab_config_set_codim(hyplab_config* config, size_t m);
/* "e1", "flat" or "random". */
HYPLAB_API hyplab_status hyplab_config_set_fixed_vector(hyplab_config* config, const char* choice);
HYPLAB_API hyplab_status hyplab_config_set_eigen(hyplab_config* config, double tol, size_t max_iter);
HYPLAB_API hyplab_status hyplab_config_set_tuple_size(hyplab_config* config, size_t d);
HYPLAB_API hyplab_status hyplab_config_set_t_grid(hyplab_config* config, const double* t, size_t count);
HYPLAB_API hyplab_status hyplab_config_set_cols(hyplab_config* config, size_t cols);
/* "std-normal", "edelman-real" or "edelman-complex". */
HYPLAB_API hyplab_status hyplab_config_set_reference(hyplab_config* config, const char* name);
HYPLAB_API hyplab_status hyplab_config_set_ks_threshold(hyplab_config* config, double threshold);
HYPLAB_API hyplab_status hyplab_config_set_calibration_file(hyplab_config* config, const char* path);
/* Inject one calibrated threshold (e.g. "sup_norm_upper"); injected values
 * take precedence over calibration files. */
HYPLAB_API hyplab_status hyplab_config_set_threshold(hyplab_config* config, const char* name, double value);
HYPLAB_API hyplab_status hyplab_config_set_dump_dir(hyplab_config* config, const char* dir);
/* Checks the documented ranges; HYPLAB_E_INVALID_CONFIG names the field. */
HYPLAB_API hyplab_status hyplab_config_validate(const hyplab_config* config);

/* ---- Running and reports ------------------------------------------------ */

HYPLAB_API hyplab_status hyplab_run(const hyplab_config* config, hyplab_report** out);
HYPLAB_API void hyplab_report_destroy(hyplab_report* report);

HYPLAB_API int hyplab_report_pass(const hyplab_report* report);
HYPLAB_API size_t hyplab_report_discarded(const hyplab_report* report);
HYPLAB_API double hyplab_report_wall_time(const hyplab_report* report);
/* Per-trial array of a named statistic; the pointer lives as long as the report. */
HYPLAB_API hyplab_status hyplab_report_statistic(const hyplab_report* report, const char* name,
                                                 const double** values, size_t* count);
HYPLAB_API size_t hyplab_report_check_count(const hyplab_report* report);
HYPLAB_API hyplab_status hyplab_report_check(const hyplab_report* report, size_t index, hyplab_check* out);
/* Lookup by check name; HYPLAB_E_INVALID_ARGUMENT when absent. */
HYPLAB_API hyplab_status hyplab_report_find_check(const hyplab_report* report, const char* name,
                                                  hyplab_check* out);
/* format: "json" or "csv" (path is then a file prefix). */
HYPLAB_API hyplab_status hyplab_report_write(const hyplab_report* report, const char* path, const char* format);
/* Serialized JSON; release with hyplab_string_free. */
HYPLAB_API hyplab_status hyplab_report_to_json(const hyplab_report* report, char** out);
HYPLAB_API void hyplab_string_free(char* s);

/* Gaussian calibration for (kind, n); merged into `path` when non-NULL.
 * thresholds_out (may be NULL) receives the JSON object of thresholds. */
HYPLAB_API hyplab_status hyplab_calibrate(const char* kind, const char* field, size_t n, size_t trials,
                                          uint64_t seed, size_t threads, const char* path, char** thresholds_out);

/* ---- Command line ------------------------------------------------------- */

/* argv excludes the program name. */
HYPLAB_API hyplab_status hyplab_invocation_parse(int argc, const char* const* argv, hyplab_invocation** out);
HYPLAB_API void hyplab_invocation_destroy(hyplab_invocation* invocation);
/* Runs the invocation and returns the process exit code. */
HYPLAB_API int hyplab_invocation_execute(const hyplab_invocation* invocation);
/* parse + execute; usage errors print a message and return 2. */
HYPLAB_API int hyplab_main(int argc, const char* const* argv);

/* ---- Numeric helpers (row-major, real) --------------------------------- */

/* Unit normal of the span of the rows of a (cols-1) x cols matrix. */
HYPLAB_API hyplab_status hyplab_null_vector(size_t rows, size_t cols, const double* a, double* x_out);
/* min(rows, cols) singular values, descending. */
HYPLAB_API hyplab_status hyplab_singular_values(size_t rows, size_t cols, const double* a, double* sv_out);
HYPLAB_API hyplab_status hyplab_edelman_cdf(double x, const char* field, double* out);
HYPLAB_API hyplab_status hyplab_ks_one_sample(const double* x, size_t count, const char* reference, double* out);

#ifdef __cplusplus
}
#endif

#endif /* HYPLAB_HYPLAB_H */
