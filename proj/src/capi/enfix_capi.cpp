// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include "enfix/enfix.h"

#include <algorithm>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "problem.hpp"
#include "report.hpp"
#include "runner.hpp"

struct enfix_problem {
    enfix::Problem problem;
};

struct enfix_result {
    enfix_exit_code exit = ENFIX_EXIT_OK;
    std::string json;
    std::string trace_csv;
    std::string grid_csv;
    std::optional<enfix::RealVector> fixed_point;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_error_json;

enfix_status status_of(enfix::ErrorCode code) {
    using enfix::ErrorCode;
    switch (code) {
    case ErrorCode::invalid_argument: return ENFIX_E_INVALID_ARGUMENT;
    case ErrorCode::parse: return ENFIX_E_PARSE;
    case ErrorCode::dimension_mismatch: return ENFIX_E_DIMENSION;
    case ErrorCode::non_finite: return ENFIX_E_NON_FINITE;
    case ErrorCode::inadmissible_certificate: return ENFIX_E_INADMISSIBLE;
    case ErrorCode::not_certifiable: return ENFIX_E_NOT_CERTIFIABLE;
    case ErrorCode::degenerate_plan: return ENFIX_E_DEGENERATE_PLAN;
    case ErrorCode::non_convergence: return ENFIX_E_NON_CONVERGENCE;
    case ErrorCode::io: return ENFIX_E_IO;
    }
    return ENFIX_E_INTERNAL;
}

// Runs f, translating exceptions into status codes and the thread's error.
template <class F>
enfix_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return ENFIX_OK;
    } catch (const enfix::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return ENFIX_E_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ENFIX_E_INTERNAL;
    }
}

enfix_status null_argument(const char* what) {
    g_last_error = std::string("null argument: ") + what;
    return ENFIX_E_INVALID_ARGUMENT;
}

enfix::Overrides overrides_of(const enfix_options* o) {
    enfix::Overrides ov;
    if (!o) return ov;
    if (o->has_tol) ov.tol = o->tol;
    if (o->has_max_iter) ov.max_iter = static_cast<std::size_t>(o->max_iter);
    if (o->has_seed) ov.seed = o->seed;
    if (o->has_pairs) ov.pairs = static_cast<std::size_t>(o->pairs);
    if (o->has_b_max) ov.b_max = o->b_max;
    if (o->has_b_step) ov.b_step = o->b_step;
    if (o->has_lambda_override) ov.lambda_override = o->lambda_override;
    ov.timing = o->include_timing != 0;
    return ov;
}

void validate(const enfix::Overrides& ov) {
    using enfix::Error;
    using enfix::ErrorCode;
    if (ov.tol && !(*ov.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "--tol must be > 0");
    if (ov.max_iter && *ov.max_iter < 1) throw Error(ErrorCode::invalid_argument, "--max-iter must be >= 1");
    if (ov.pairs && *ov.pairs < 1) throw Error(ErrorCode::invalid_argument, "--pairs must be >= 1");
    if (ov.b_max && !(*ov.b_max >= 0.0)) throw Error(ErrorCode::invalid_argument, "--b-max must be >= 0");
    if (ov.b_step && !(*ov.b_step > 0.0)) throw Error(ErrorCode::invalid_argument, "--b-step must be > 0");
    if (ov.lambda_override && !(*ov.lambda_override > 0.0 && *ov.lambda_override <= 1.0))
        throw Error(ErrorCode::invalid_argument, "--lambda-override must lie in (0, 1]");
}

enfix_result* wrap(const enfix::RunResult& run) {
    auto* r = new enfix_result;
    r->exit = static_cast<enfix_exit_code>(run.exit);
    r->json = enfix::dump_json(run.report);
    r->trace_csv = run.trace_csv;
    r->grid_csv = run.grid_csv;
    if (run.solve) r->fixed_point = run.solve->fixed_point;
    return r;
}

template <class Run>
enfix_status run_command(const enfix_problem* problem, const enfix_options* options,
                         enfix_result** out, Run run) {
    if (!out) return null_argument("out");
    *out = nullptr;
    if (!problem) return null_argument("problem");
    return guarded([&] {
        const auto ov = overrides_of(options);
        validate(ov);
        *out = wrap(run(problem->problem, ov));
    });
}

}  // namespace

extern "C" {

const char* enfix_version(void) { return enfix::version_string(); }

const char* enfix_last_error(void) { return g_last_error.c_str(); }

const char* enfix_status_name(enfix_status status) {
    switch (status) {
    case ENFIX_OK: return "ok";
    case ENFIX_E_INVALID_ARGUMENT: return "invalid-argument";
    case ENFIX_E_PARSE: return "parse-error";
    case ENFIX_E_DIMENSION: return "dimension-mismatch";
    case ENFIX_E_NON_FINITE: return "non-finite";
    case ENFIX_E_INADMISSIBLE: return "inadmissible-certificate";
    case ENFIX_E_NOT_CERTIFIABLE: return "not-certifiable";
    case ENFIX_E_DEGENERATE_PLAN: return "degenerate-plan";
    case ENFIX_E_NON_CONVERGENCE: return "non-convergence";
    case ENFIX_E_IO: return "io-error";
    case ENFIX_E_INTERNAL: return "internal-error";
    }
    return "unknown";
}

void enfix_options_init(enfix_options* options) {
    if (options) *options = enfix_options{};
}

enfix_status enfix_problem_load_file(const char* path, enfix_problem** out) {
    if (!out) return null_argument("out");
    *out = nullptr;
    if (!path) return null_argument("path");
    return guarded([&] { *out = new enfix_problem{enfix::load_problem(path)}; });
}

enfix_status enfix_problem_load_string(const char* text, const char* origin, enfix_problem** out) {
    if (!out) return null_argument("out");
    *out = nullptr;
    if (!text) return null_argument("text");
    return guarded([&] {
        *out = new enfix_problem{enfix::parse_problem(text, origin ? origin : "<string>")};
    });
}

void enfix_problem_free(enfix_problem* problem) { delete problem; }

size_t enfix_problem_dimension(const enfix_problem* problem) {
    return problem ? problem->problem.dim() : 0;
}

const char* enfix_problem_name(const enfix_problem* problem) {
    return problem ? problem->problem.name.c_str() : "";
}

enfix_status enfix_solve(const enfix_problem* problem, const enfix_options* options, enfix_result** out) {
    return run_command(problem, options, out, [](const auto& p, const auto& ov) { return enfix::run_solve(p, ov); });
}

enfix_status enfix_estimate(const enfix_problem* problem, const enfix_options* options, enfix_result** out) {
    return run_command(problem, options, out,
                       [](const auto& p, const auto& ov) { return enfix::run_estimate(p, ov); });
}

enfix_status enfix_check(const enfix_problem* problem, const enfix_options* options, enfix_result** out) {
    return run_command(problem, options, out, [](const auto& p, const auto& ov) { return enfix::run_check(p, ov); });
}

enfix_status enfix_bench_file(const char* path, const enfix_options* options, enfix_result** out) {
    if (!out) return null_argument("out");
    *out = nullptr;
    if (!path) return null_argument("path");
    return guarded([&] {
        const auto ov = overrides_of(options);
        validate(ov);
        const auto row = enfix::bench_problem(path, ov);
        auto* r = new enfix_result;
        r->exit = row.passed ? ENFIX_EXIT_OK : ENFIX_EXIT_NOT_CONVERGED;
        r->json = enfix::dump_json({{"name", row.name},
                                    {"path", row.path},
                                    {"passed", row.passed},
                                    {"failures", row.failures},
                                    {"summary", row.summary},
                                    {"report", row.report}});
        *out = r;
    });
}

void enfix_result_free(enfix_result* result) { delete result; }

enfix_exit_code enfix_result_exit_code(const enfix_result* result) {
    return result ? result->exit : ENFIX_EXIT_USAGE;
}

const char* enfix_result_json(const enfix_result* result) { return result ? result->json.c_str() : ""; }

const char* enfix_result_trace_csv(const enfix_result* result) {
    return result ? result->trace_csv.c_str() : "";
}

const char* enfix_result_grid_csv(const enfix_result* result) { return result ? result->grid_csv.c_str() : ""; }

size_t enfix_result_fixed_point(const enfix_result* result, double* coords, size_t capacity) {
    if (!result || !result->fixed_point) return 0;
    const auto& p = *result->fixed_point;
    if (coords) std::copy_n(p.coords().begin(), std::min(capacity, p.dim()), coords);
    return p.dim();
}

const char* enfix_error_json(enfix_status status) {
    g_error_json = enfix::error_json(enfix_status_name(status), g_last_error).dump();
    return g_error_json.c_str();
}

}  // extern "C"
