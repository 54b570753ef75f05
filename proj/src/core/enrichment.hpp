// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#ifndef ENFIX_CORE_ENRICHMENT_HPP_
#define ENFIX_CORE_ENRICHMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "operators.hpp"
#include "spaces.hpp"

namespace enfix {

enum class Provenance { declared, empirical, analytic };
const char* to_string(Provenance p) noexcept;

/// The b-values searched by estimate() and affine_certificate().
struct BGridInfo {
    double b_min = 0.0;
    double b_max = 0.0;
    std::size_t points = 0;
};

/// Constants (b, theta) for which ||b(x-y) + Tx - Ty|| <= theta ||x-y||,
/// together with the averaging weight lambda = 1/(b+1) and the contraction
/// factor c = theta * lambda of the averaged map.
///
/// Construction enforces 0 <= theta < b+1, hence 0 <= c < 1.
class EnrichmentCertificate {
public:
    EnrichmentCertificate(double b, double theta, Provenance provenance = Provenance::declared);

    double b() const noexcept { return b_; }
    double theta() const noexcept { return theta_; }
    double lambda() const noexcept { return lambda_; }
    double c() const noexcept { return c_; }
    Provenance provenance() const noexcept { return provenance_; }

    // empirical certificates record how they were sampled
    std::optional<std::size_t> sample_count;
    std::optional<std::uint64_t> seed;
    std::optional<BGridInfo> grid;

private:
    double b_;
    double theta_;
    double lambda_;
    double c_;
    Provenance provenance_;
};

/// True when (b, theta) would form a valid certificate.
bool admissible(double b, double theta) noexcept;

/// Seeded uniform sampling of point pairs from an axis-aligned box.
struct SamplePlan {
    std::size_t pair_count = 1000;
    std::uint64_t seed = 42;
    std::vector<double> low;
    std::vector<double> high;

    /// Throws degenerate_plan for an empty or zero-volume box.
    void validate() const;
    std::size_t dim() const noexcept { return low.size(); }

    static SamplePlan unit_box(std::size_t dim, std::size_t pairs = 1000, std::uint64_t seed = 42);
};

/// The pairs (x, y) a plan draws, in draw order. Identical plans give
/// identical pairs.
std::vector<std::pair<RealVector, RealVector>> sample_pairs(const SamplePlan& plan);

/// x -> (1 - lambda) x + lambda T(x). lambda must lie in (0, 1]; lambda = 1
/// returns op unchanged.
Operator averaged(const Operator& op, double lambda);

struct CertificateVerdict {
    bool passed = true;
    std::size_t pairs_tested = 0;  // non-degenerate pairs
    double worst_ratio = 0.0;      // max ||b dx + dT|| / ||dx||
    std::optional<std::pair<RealVector, RealVector>> witness;
};

CertificateVerdict check_certificate(const Operator& op, const EnrichmentCertificate& cert,
                                     const NormSpec& spec, const SamplePlan& plan);

/// b_k = k * step for k = 0 .. floor(b_max / step).
std::vector<double> make_b_grid(double b_max, double b_step);

struct GridPoint {
    double b;
    double theta_hat;
    double c;  // theta_hat / (b + 1)
};

struct CertificateSearch {
    std::vector<GridPoint> grid;
    std::optional<EnrichmentCertificate> certificate;  // empty: not certifiable
    std::size_t usable_pairs = 0;
    bool fallback_used = false;

    bool certifiable() const noexcept { return certificate.has_value(); }
};

/// Safety factor applied to a sampled or iterated theta.
inline constexpr double kThetaInflation = 1e-9;

/// Empirical certificate: theta_hat(b) is the largest sampled ratio, the
/// grid point minimising theta_hat(b)/(b+1) wins (ties go to the smaller b),
/// and theta is inflated by 1 + 1e-9.
CertificateSearch estimate(const Operator& op, const NormSpec& spec, const SamplePlan& plan,
                           const std::vector<double>& b_grid);

struct InducedNorm {
    double value = 0.0;
    bool converged = true;
    std::size_t iterations = 0;  // power-iteration steps (L2 only)
};

/// Operator norm of m induced by spec. Weighted norms use W m W^-1.
InducedNorm induced_norm(const Matrix& m, const NormSpec& spec);

/// Analytic certificate for x -> A x + u, with theta(b) = ||bI + A||.
/// When the L2 power iteration fails to converge the search falls back to
/// estimate() on `fallback` if one is given and throws non_convergence
/// otherwise.
CertificateSearch affine_certificate(const Matrix& a, const NormSpec& spec,
                                     const std::vector<double>& b_grid,
                                     const std::optional<SamplePlan>& fallback = std::nullopt);

}  // namespace enfix

#endif  // ENFIX_CORE_ENRICHMENT_HPP_
