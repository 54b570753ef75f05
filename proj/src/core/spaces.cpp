// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include "spaces.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace enfix {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::parse: return "parse-error";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::non_finite: return "non-finite";
    case ErrorCode::inadmissible_certificate: return "inadmissible-certificate";
    case ErrorCode::not_certifiable: return "not-certifiable";
    case ErrorCode::degenerate_plan: return "degenerate-plan";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::io: return "io-error";
    }
    return "unknown";
}

RealVector::RealVector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty())
        throw Error(ErrorCode::invalid_argument, "vector dimension must be at least 1");
    require_finite(*this, "vector");
}

RealVector::RealVector(std::initializer_list<double> coords)
    : RealVector(std::vector<double>(coords)) {}

RealVector RealVector::zeros(std::size_t n) { return RealVector(std::vector<double>(n, 0.0)); }

const char* to_string(NormKind kind) noexcept {
    switch (kind) {
    case NormKind::l1: return "L1";
    case NormKind::l2: return "L2";
    case NormKind::linf: return "Linf";
    }
    return "?";
}

std::optional<NormKind> parse_norm_kind(std::string_view text) noexcept {
    if (text == "L1") return NormKind::l1;
    if (text == "L2") return NormKind::l2;
    if (text == "Linf") return NormKind::linf;
    return std::nullopt;
}

NormSpec::NormSpec(NormKind kind, std::vector<double> weights) : kind_(kind) {
    if (weights.empty())
        throw Error(ErrorCode::invalid_argument, "norm weights must not be empty");
    for (double w : weights) {
        if (!std::isfinite(w) || w <= 0.0)
            throw Error(ErrorCode::invalid_argument, "norm weights must be finite and strictly positive");
    }
    weights_ = std::move(weights);
}

std::string NormSpec::describe() const {
    std::ostringstream os;
    os << to_string(kind_);
    if (weights_) os << " (weighted)";
    return os.str();
}

void require_same_dim(const RealVector& x, const RealVector& y, std::string_view what) {
    if (x.dim() != y.dim()) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << x.dim() << " vs " << y.dim() << ")";
        throw Error(ErrorCode::dimension_mismatch, os.str());
    }
}

void require_finite(const RealVector& v, std::string_view what) {
    for (double c : v.coords()) {
        if (!std::isfinite(c))
            throw Error(ErrorCode::non_finite, std::string(what) + ": non-finite coordinate");
    }
}

double norm(const RealVector& v, const NormSpec& spec) {
    const auto& w = spec.weights();
    if (w && w->size() != v.dim())
        throw Error(ErrorCode::dimension_mismatch, "norm: weight count does not match vector dimension");

    auto coord = [&](std::size_t k) { return w ? (*w)[k] * std::abs(v[k]) : std::abs(v[k]); };

    switch (spec.kind()) {
    case NormKind::l1: {
        double s = 0.0;
        for (std::size_t k = 0; k < v.dim(); ++k) s += coord(k);
        return s;
    }
    case NormKind::linf: {
        double m = 0.0;
        for (std::size_t k = 0; k < v.dim(); ++k) m = std::max(m, coord(k));
        return m;
    }
    case NormKind::l2: {
        // scaled sum of squares, as in LAPACK's dnrm2, so tiny and huge
        // coordinates neither underflow nor overflow
        double scale = 0.0;
        double ssq = 1.0;
        for (std::size_t k = 0; k < v.dim(); ++k) {
            const double a = coord(k);
            if (a == 0.0) continue;
            if (scale < a) {
                ssq = 1.0 + ssq * (scale / a) * (scale / a);
                scale = a;
            } else {
                ssq += (a / scale) * (a / scale);
            }
        }
        return scale * std::sqrt(ssq);
    }
    }
    return 0.0;
}

RealVector combine(double alpha, const RealVector& x, double beta, const RealVector& y) {
    require_same_dim(x, y, "combine");
    std::vector<double> out(x.dim());
    for (std::size_t k = 0; k < x.dim(); ++k) {
        // both products split exactly into value + error, then a compensated sum
        const double p = alpha * x[k];
        const double ep = std::fma(alpha, x[k], -p);
        const double q = beta * y[k];
        const double eq = std::fma(beta, y[k], -q);
        const double s = p + q;
        const double v = s - p;
        const double es = (p - (s - v)) + (q - v);
        out[k] = s + (es + (ep + eq));
    }
    return RealVector(std::move(out));
}

RealVector difference(const RealVector& x, const RealVector& y) {
    require_same_dim(x, y, "difference");
    std::vector<double> out(x.dim());
    for (std::size_t k = 0; k < x.dim(); ++k) out[k] = x[k] - y[k];
    return RealVector(std::move(out));
}

DominanceVerdict validate_dominance(const NormPair& pair, std::size_t dim,
                                    std::size_t sample_count, std::uint64_t seed) {
    if (sample_count == 0)
        throw Error(ErrorCode::invalid_argument, "validate_dominance: sample_count must be >= 1");
    if (dim == 0)
        throw Error(ErrorCode::invalid_argument, "validate_dominance: dimension must be >= 1");

    DominanceVerdict verdict;
    auto test = [&](const RealVector& v) {
        const double nd = norm(v, pair.d);
        const double nr = norm(v, pair.rho);
        ++verdict.samples;
        if (nd == 0.0 && nr == 0.0) return;
        const double ratio = nr > 0.0 ? nd / nr : INFINITY;
        if (ratio > verdict.worst_ratio) {
            verdict.worst_ratio = ratio;
            verdict.witness = v;
        }
        if (nd > nr * (1.0 + kNormSlack)) verdict.passed = false;
    };

    test(RealVector(std::vector<double>(dim, 1.0)));
    {
        std::vector<double> alt(dim);
        for (std::size_t k = 0; k < dim; ++k) alt[k] = (k % 2 == 0) ? 1.0 : -1.0;
        test(RealVector(std::move(alt)));
    }
    for (std::size_t j = 0; j < dim; ++j) {
        std::vector<double> e(dim, 0.0);
        e[j] = 1.0;
        test(RealVector(std::move(e)));
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> buf(dim);
    for (std::size_t s = 0; s < sample_count; ++s) {
        for (auto& c : buf) c = unit(rng);
        test(RealVector(buf));
    }
    return verdict;
}

}  // namespace enfix
