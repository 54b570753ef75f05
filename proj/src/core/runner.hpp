// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#ifndef ENFIX_CORE_RUNNER_HPP_
#define ENFIX_CORE_RUNNER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "problem.hpp"

namespace enfix {

/// Command-line overrides of problem-file settings.
struct Overrides {
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> pairs;
    std::optional<double> b_max;
    std::optional<double> b_step;
    std::optional<double> lambda_override;
    bool timing = false;
};

/// Process exit codes shared by every subcommand.
enum class ExitCode : int {
    ok = 0,
    usage = 1,
    precondition_failed = 2,
    not_converged = 3,  // diverged, escaped-ball, max-iter, failed back-verification
    not_certifiable = 4,
    check_failed = 5,
};

struct RunResult {
    ExitCode exit = ExitCode::ok;
    nlohmann::json report;
    std::string trace_csv;  // solve
    std::string grid_csv;   // estimate

    std::optional<SolveReport> solve;
    std::optional<CertificateSearch> search;
    std::optional<CertificateVerdict> verdict;
};

/// Obtains the certificate (declared, estimated or analytic) and runs the
/// configured solve mode.
RunResult run_solve(const Problem& problem, const Overrides& ov = {});
/// Empirical certificate for the problem's certified operator.
RunResult run_estimate(const Problem& problem, const Overrides& ov = {});
/// Samples the declared certificate's inequality.
RunResult run_check(const Problem& problem, const Overrides& ov = {});

/// Bound-validity audit of a solve trace against a known fixed point.
struct BoundAudit {
    bool held = true;
    std::size_t records_checked = 0;
    std::vector<std::string> violations;  // first few, human readable
};
BoundAudit audit_bounds(const SolveReport& rep, const NormSpec& spec, const RealVector& reference,
                        double reference_tolerance);

struct BenchRow {
    std::string name;
    std::string path;
    bool passed = false;
    std::vector<std::string> failures;
    nlohmann::json summary;  // table fields
    nlohmann::json report;   // full run report, null on parse failure
};

/// Runs one corpus problem and checks it against its reference section.
BenchRow bench_problem(const std::string& path, const Overrides& ov = {});

/// Machine-readable error document for stderr.
nlohmann::json error_json(const std::string& code, const std::string& message);

const char* version_string() noexcept;

}  // namespace enfix

#endif  // ENFIX_CORE_RUNNER_HPP_
