// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#ifndef ENFIX_CORE_PROBLEM_HPP_
#define ENFIX_CORE_PROBLEM_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "enrichment.hpp"
#include "operators.hpp"
#include "solver.hpp"
#include "spaces.hpp"

namespace enfix {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr double kDefaultBMax = 10.0;
inline constexpr double kDefaultBStep = 0.05;

enum class CertificateSource { declared, estimate, analytic };
const char* to_string(CertificateSource s) noexcept;

struct CertificateSpec {
    CertificateSource source = CertificateSource::declared;
    double b = 0.0;      // declared only
    double theta = 0.0;  // declared only
    SamplePlan plan;     // estimate, check, analytic fallback; box defaults to [-1, 1]^n
    double b_max = kDefaultBMax;
    double b_step = kDefaultBStep;
};

/// Outcomes a benchmark problem may declare as expected.
enum class Expectation { converged, diverged, max_iter, escaped_ball, precondition_failed, not_certifiable };
const char* to_string(Expectation e) noexcept;

struct ReferenceSpec {
    RealVector point;
    double tolerance = 1e-12;
    Expectation expect = Expectation::converged;
};

/// A fully validated problem file.
struct Problem {
    std::string name;    // file stem
    std::string origin;  // path as given
    std::string description;
    NormSpec norm;
    Operator op;
    std::optional<CertificateSpec> certificate;
    std::optional<SolveConfig> solve;
    std::optional<ReferenceSpec> reference;
    nlohmann::json echo;  // the document as parsed, for reports

    std::size_t dim() const noexcept { return op.dim(); }
    /// The map the certificate speaks about: U^N in asymptotic mode, else op.
    Operator certified_operator() const;
};

/// Throws Error(ErrorCode::parse) naming the line and field at fault.
Problem parse_problem(std::string_view text, const std::string& origin);
Problem load_problem(const std::filesystem::path& path);

}  // namespace enfix

#endif  // ENFIX_CORE_PROBLEM_HPP_
