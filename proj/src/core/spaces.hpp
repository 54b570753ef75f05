// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#ifndef ENFIX_CORE_SPACES_HPP_
#define ENFIX_CORE_SPACES_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace enfix {

/// A point of the coordinate space R^n. Coordinates are finite by
/// construction; arithmetic that would produce NaN or Inf throws.
class RealVector {
public:
    RealVector() = default;
    explicit RealVector(std::vector<double> coords);
    RealVector(std::initializer_list<double> coords);

    static RealVector zeros(std::size_t n);

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t k) const { return coords_[k]; }
    std::span<const double> coords() const noexcept { return coords_; }
    const std::vector<double>& values() const noexcept { return coords_; }

    bool operator==(const RealVector&) const = default;

private:
    std::vector<double> coords_;
};

enum class NormKind { l1, l2, linf };

const char* to_string(NormKind kind) noexcept;
std::optional<NormKind> parse_norm_kind(std::string_view text) noexcept;

/// A p-norm, p in {1, 2, inf}. With weights w the norm is ||diag(w) v||_p,
/// so uniform weights s give exactly s times the plain norm.
class NormSpec {
public:
    NormSpec() = default;
    explicit NormSpec(NormKind kind) : kind_(kind) {}
    NormSpec(NormKind kind, std::vector<double> weights);

    NormKind kind() const noexcept { return kind_; }
    const std::optional<std::vector<double>>& weights() const noexcept { return weights_; }

    std::string describe() const;

    bool operator==(const NormSpec&) const = default;

private:
    NormKind kind_ = NormKind::l2;
    std::optional<std::vector<double>> weights_;
};

/// The two norms of the Maia setting: d is the weaker one in which the space
/// is complete, rho the stronger one in which the map contracts.
struct NormPair {
    NormSpec d;
    NormSpec rho;
};

double norm(const RealVector& v, const NormSpec& spec);

/// alpha*x + beta*y, coordinatewise.
RealVector combine(double alpha, const RealVector& x, double beta, const RealVector& y);

/// Shorthand for combine(1, x, -1, y).
RealVector difference(const RealVector& x, const RealVector& y);

void require_same_dim(const RealVector& x, const RealVector& y, std::string_view what);
void require_finite(const RealVector& v, std::string_view what);

struct DominanceVerdict {
    bool passed = true;
    std::size_t samples = 0;          // vectors tested, probes included
    double worst_ratio = 0.0;         // max of norm_d(v) / norm_rho(v)
    std::optional<RealVector> witness;  // vector attaining worst_ratio
};

/// Empirical check of ||v||_d <= ||v||_rho. Besides sample_count seeded
/// uniform draws from [-1, 1]^n it always probes the all-ones vector, the
/// alternating-sign vector and every unit vector, in that order.
DominanceVerdict validate_dominance(const NormPair& pair, std::size_t dim,
                                    std::size_t sample_count, std::uint64_t seed);

/// Relative slack applied to every norm inequality.
inline constexpr double kNormSlack = 1e-12;

}  // namespace enfix

#endif  // ENFIX_CORE_SPACES_HPP_
