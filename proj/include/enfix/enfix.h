/* SPDX-License-Identifier: Apache-2.0
 * Copyright (c) 2026 The enfix authors
 *
 * C interface of the enfix fixed-point solver.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every entry point returns an enfix_status; on
 * failure enfix_last_error() describes the problem for the calling thread.
 * Handles are immutable once created and may be shared between threads.
 */
#ifndef ENFIX_ENFIX_H_
#define ENFIX_ENFIX_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ENFIX_BUILDING_LIBRARY)
#    define ENFIX_API __declspec(dllexport)
#  else
#    define ENFIX_API __declspec(dllimport)
#  endif
#else
#  define ENFIX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum enfix_status {
    ENFIX_OK = 0,
    ENFIX_E_INVALID_ARGUMENT = 1,
    ENFIX_E_PARSE = 2,
    ENFIX_E_DIMENSION = 3,
    ENFIX_E_NON_FINITE = 4,
    ENFIX_E_INADMISSIBLE = 5,
    ENFIX_E_NOT_CERTIFIABLE = 6,
    ENFIX_E_DEGENERATE_PLAN = 7,
    ENFIX_E_NON_CONVERGENCE = 8,
    ENFIX_E_IO = 9,
    ENFIX_E_INTERNAL = 10
} enfix_status;

/* Process exit codes of the command-line tool. */
typedef enum enfix_exit_code {
    ENFIX_EXIT_OK = 0,
    ENFIX_EXIT_USAGE = 1,
    ENFIX_EXIT_PRECONDITION_FAILED = 2,
    ENFIX_EXIT_NOT_CONVERGED = 3,
    ENFIX_EXIT_NOT_CERTIFIABLE = 4,
    ENFIX_EXIT_CHECK_FAILED = 5
} enfix_exit_code;

typedef struct enfix_problem enfix_problem;
typedef struct enfix_result enfix_result;

/* Overrides of problem-file settings. A field applies when its has_* flag
 * is non-zero. Initialise with enfix_options_init. */
typedef struct enfix_options {
    int has_tol;
    double tol;
    int has_max_iter;
    uint64_t max_iter;
    int has_seed;
    uint64_t seed;
    int has_pairs;
    uint64_t pairs;
    int has_b_max;
    double b_max;
    int has_b_step;
    double b_step;
    /* Expert: force the averaging weight; every error-bound claim is off. */
    int has_lambda_override;
    double lambda_override;
    /* Adds wall-clock timing to reports (makes them non-reproducible). */
    int include_timing;
} enfix_options;

ENFIX_API const char* enfix_version(void);

/* Message for the last failed call on this thread; never NULL. */
ENFIX_API const char* enfix_last_error(void);

/* Short stable name of a status code, e.g. "parse-error". */
ENFIX_API const char* enfix_status_name(enfix_status status);

ENFIX_API void enfix_options_init(enfix_options* options);

ENFIX_API enfix_status enfix_problem_load_file(const char* path, enfix_problem** out);
/* `origin` names the text in error messages; may be NULL. */
ENFIX_API enfix_status enfix_problem_load_string(const char* text, const char* origin,
                                                 enfix_problem** out);
ENFIX_API void enfix_problem_free(enfix_problem* problem);

ENFIX_API size_t enfix_problem_dimension(const enfix_problem* problem);
ENFIX_API const char* enfix_problem_name(const enfix_problem* problem);

/* Runs the problem's [solve] section. A run that merely fails to converge
 * still returns ENFIX_OK; inspect enfix_result_exit_code. */
ENFIX_API enfix_status enfix_solve(const enfix_problem* problem, const enfix_options* options,
                                   enfix_result** out);
ENFIX_API enfix_status enfix_estimate(const enfix_problem* problem, const enfix_options* options,
                                      enfix_result** out);
ENFIX_API enfix_status enfix_check(const enfix_problem* problem, const enfix_options* options,
                                   enfix_result** out);

/* Loads and runs one benchmark problem file against its [reference]
 * section. Parse failures are reported in the result, not as a status. */
ENFIX_API enfix_status enfix_bench_file(const char* path, const enfix_options* options,
                                        enfix_result** out);

ENFIX_API void enfix_result_free(enfix_result* result);

ENFIX_API enfix_exit_code enfix_result_exit_code(const enfix_result* result);
/* Report document (JSON, UTF-8, newline-terminated). */
ENFIX_API const char* enfix_result_json(const enfix_result* result);
/* Iteration trace CSV for solve results; empty string otherwise. */
ENFIX_API const char* enfix_result_trace_csv(const enfix_result* result);
/* c(b) grid CSV when a certificate was searched; empty string otherwise. */
ENFIX_API const char* enfix_result_grid_csv(const enfix_result* result);

/* Fixed point of a solve result. Copies min(capacity, dimension)
 * coordinates and returns the dimension; 0 when the result has none. */
ENFIX_API size_t enfix_result_fixed_point(const enfix_result* result, double* coords, size_t capacity);

/* Error document {"error": {"code": ..., "message": ...}} for a status and
 * the thread's last error message. The string lives until the next call on
 * this thread. */
ENFIX_API const char* enfix_error_json(enfix_status status);

#ifdef __cplusplus
}
#endif

#endif /* ENFIX_ENFIX_H_ */
