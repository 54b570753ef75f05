// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#ifndef ENFIX_CORE_SOLVER_HPP_
#define ENFIX_CORE_SOLVER_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "enrichment.hpp"
#include "operators.hpp"
#include "spaces.hpp"

namespace enfix {

// Error bounds for the Krasnoselskij iterates of a map whose averaged form
// contracts with factor c. All three reject c >= 1.

/// ||x_n - p|| <= c^n / (1 - c) * ||x_1 - x_0||
double bound_a_priori(double c, std::size_t n, double first_step);
/// ||x_n - p|| <= c / (1 - c) * ||x_n - x_{n-1}||
double bound_a_posteriori(double c, double last_step);
/// ||x_{n+i-1} - p|| <= c^i / (1 - c) * ||x_n - x_{n-1}||, i >= 1
double bound_unified(double c, std::size_t i, double step_at_n);

enum class Termination {
    bound_met,
    residual_zero,
    max_iter,
    diverged,
    escaped_ball,
    precondition_failed,
};
const char* to_string(Termination t) noexcept;

struct IterationRecord {
    std::size_t n = 0;
    RealVector x;
    double step_norm = 0.0;     // ||x_n - x_{n-1}||
    double a_priori = 0.0;      // NaN when bounds are disabled
    double a_posteriori = 0.0;  // NaN when bounds are disabled
    double residual = 0.0;      // ||T x_n - x_n|| for the iterated map T
    std::optional<double> d_step;  // Maia mode: step in the d-norm
};

/// Keeps every record up to `full_cap`; past that only the first and last
/// `keep` records survive.
class IterationTrace {
public:
    explicit IterationTrace(std::size_t full_cap = 10'000, std::size_t keep = 100);

    void push(IterationRecord record);
    std::vector<IterationRecord> records() const;
    std::size_t total() const noexcept { return total_; }
    bool truncated() const noexcept { return truncated_; }

private:
    std::size_t full_cap_;
    std::size_t keep_;
    std::size_t total_ = 0;
    bool truncated_ = false;
    std::vector<IterationRecord> head_;
    std::deque<IterationRecord> tail_;
};

struct GlobalMode {};
struct LocalMode {
    double radius = 0.0;
};
struct AsymptoticMode {
    unsigned power = 1;
};
struct MaiaMode {
    NormSpec d;  // the weaker norm; the problem norm plays rho
    std::size_t dominance_samples = 1000;
    std::uint64_t dominance_seed = 42;
};
using SolveMode = std::variant<GlobalMode, LocalMode, AsymptoticMode, MaiaMode>;
const char* mode_name(const SolveMode& mode) noexcept;

struct SolveConfig {
    double tol = 1e-10;
    std::optional<std::size_t> max_iter;  // default derived from the a priori bound
    RealVector x0;
    SolveMode mode = GlobalMode{};
    /// Expert override of the averaging weight. Disables every bound claim.
    std::optional<double> lambda_override;
    std::size_t trace_cap = 10'000;
    std::size_t trace_keep = 100;

    void validate() const;
};

struct LocalInfo {
    double radius = 0.0;
    double displacement = 0.0;     // ||T x0 - x0||
    double admission_limit = 0.0;  // (b + 1 - theta) * radius
    bool admitted = false;
    double epsilon = 0.0;          // radius of the invariant closed ball
    double max_distance = 0.0;     // max ||x_n - x0|| observed
};

struct SolveReport {
    SolveReport(EnrichmentCertificate cert, RealVector x0, std::size_t trace_cap, std::size_t trace_keep)
        : fixed_point(std::move(x0)), certificate(std::move(cert)), lambda(certificate.lambda()),
          trace(trace_cap, trace_keep) {}

    RealVector fixed_point;
    std::size_t iterations = 0;
    Termination reason = Termination::max_iter;
    std::string detail;
    EnrichmentCertificate certificate;
    double lambda = 1.0;
    bool bounds_enabled = true;
    double final_a_priori = std::numeric_limits<double>::quiet_NaN();
    double final_a_posteriori = std::numeric_limits<double>::quiet_NaN();
    double final_residual = std::numeric_limits<double>::quiet_NaN();
    std::size_t max_iter = 0;
    IterationTrace trace;

    // asymptotic: ||U(p) - p||; maia: ||T(p) - p||_d
    std::optional<double> back_verification;
    std::optional<double> back_verification_limit;
    std::optional<bool> back_verification_passed;

    std::optional<LocalInfo> local;
    std::optional<DominanceVerdict> dominance;

    bool converged() const noexcept {
        return reason == Termination::bound_met || reason == Termination::residual_zero;
    }
};

/// Default iteration budget: the n at which the a priori bound reaches tol,
/// plus 10; 2 when c = 0; capped at 10^6.
std::size_t default_max_iter(double c, double tol, double first_step);

/// Krasnoselskij iteration x_{n+1} = (1 - lambda) x_n + lambda T x_n with
/// lambda = 1/(b+1). Stops once min(a priori, a posteriori) <= tol, or on an
/// exactly zero step. Three consecutive steps that break the contraction
/// ||x_{n+1} - x_n|| <= c ||x_n - x_{n-1}|| (beyond rounding) are reported
/// as divergence: the certificate is falsified on this orbit.
SolveReport solve(const Operator& op, const EnrichmentCertificate& cert, const NormSpec& spec,
                  const SolveConfig& cfg);

/// Local variant on the ball B(x0, radius). Iterates only when
/// ||T x0 - x0|| < (b + 1 - theta) radius, and then checks every iterate stays
/// inside the closed ball of radius ||T x0 - x0|| / (b + 1 - theta).
SolveReport solve_local(const Operator& op, const EnrichmentCertificate& cert,
                        const NormSpec& spec, const SolveConfig& cfg, double radius);

/// Iterates the averaged form of u^n, where `cert` certifies u^n, then
/// verifies that the limit is also fixed by u itself.
SolveReport solve_asymptotic(const Operator& u, unsigned n, const EnrichmentCertificate& cert,
                             const NormSpec& spec, const SolveConfig& cfg);

/// Two-norm variant: `cert_rho` certifies op under pair.rho, which drives the
/// bounds and termination; the d-norm is observed alongside. `dominance`
/// must be a passing validate_dominance verdict for `pair`.
SolveReport solve_maia(const Operator& op, const EnrichmentCertificate& cert_rho,
                       const NormPair& pair, const SolveConfig& cfg,
                       const DominanceVerdict& dominance);

/// Dispatches on cfg.mode. Maia mode validates dominance itself.
SolveReport solve_with_mode(const Operator& op, const EnrichmentCertificate& cert,
                            const NormSpec& spec, const SolveConfig& cfg);

}  // namespace enfix

#endif  // ENFIX_CORE_SOLVER_HPP_
