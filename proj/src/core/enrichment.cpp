// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include "enrichment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace enfix {

const char* to_string(Provenance p) noexcept {
    switch (p) {
    case Provenance::declared: return "declared";
    case Provenance::empirical: return "empirical";
    case Provenance::analytic: return "analytic";
    }
    return "?";
}

bool admissible(double b, double theta) noexcept {
    if (!std::isfinite(b) || !std::isfinite(theta)) return false;
    if (b < 0.0 || theta < 0.0 || !(theta < b + 1.0)) return false;
    const double lambda = 1.0 / (b + 1.0);
    return theta * lambda < 1.0;
}

EnrichmentCertificate::EnrichmentCertificate(double b, double theta, Provenance provenance)
    : b_(b), theta_(theta), lambda_(1.0 / (b + 1.0)), c_(theta * lambda_), provenance_(provenance) {
    if (!admissible(b, theta)) {
        std::ostringstream os;
        os.precision(17);
        os << "inadmissible certificate (b=" << b << ", theta=" << theta
           << "): need b >= 0 and 0 <= theta < b + 1";
        throw Error(ErrorCode::inadmissible_certificate, os.str());
    }
}

void SamplePlan::validate() const {
    if (pair_count == 0) throw Error(ErrorCode::degenerate_plan, "sample plan: pair count must be >= 1");
    if (low.empty() || low.size() != high.size())
        throw Error(ErrorCode::degenerate_plan, "sample plan: box bounds missing or of unequal length");
    for (std::size_t k = 0; k < low.size(); ++k) {
        if (!std::isfinite(low[k]) || !std::isfinite(high[k]) || !(low[k] < high[k]))
            throw Error(ErrorCode::degenerate_plan, "sample plan: box has zero volume (need low < high per coordinate)");
    }
}

SamplePlan SamplePlan::unit_box(std::size_t dim, std::size_t pairs, std::uint64_t seed) {
    return SamplePlan{pairs, seed, std::vector<double>(dim, -1.0), std::vector<double>(dim, 1.0)};
}

std::vector<std::pair<RealVector, RealVector>> sample_pairs(const SamplePlan& plan) {
    plan.validate();
    std::mt19937_64 rng(plan.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = plan.dim();
    auto draw = [&] {
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = plan.low[k] + (plan.high[k] - plan.low[k]) * unit(rng);
        return RealVector(std::move(v));
    };
    std::vector<std::pair<RealVector, RealVector>> out;
    out.reserve(plan.pair_count);
    for (std::size_t i = 0; i < plan.pair_count; ++i) {
        RealVector x = draw();
        RealVector y = draw();
        out.emplace_back(std::move(x), std::move(y));
    }
    return out;
}

Operator averaged(const Operator& op, double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw Error(ErrorCode::invalid_argument, "averaged: lambda must lie in (0, 1]");
    if (lambda == 1.0) return op;
    return make_averaged(op, lambda);
}

namespace {

struct PairDelta {
    RealVector x, y;
    RealVector dx;  // x - y
    RealVector dt;  // Tx - Ty
    double dx_norm;
};

std::vector<PairDelta> deltas(const Operator& op, const NormSpec& spec, const SamplePlan& plan) {
    if (plan.dim() != op.dim())
        throw Error(ErrorCode::dimension_mismatch, "sample plan dimension does not match the operator");
    std::vector<PairDelta> out;
    for (auto& [x, y] : sample_pairs(plan)) {
        RealVector dx = difference(x, y);
        const double n = norm(dx, spec);
        if (n == 0.0) continue;  // vacuous at x = y
        RealVector dt = difference(op(x), op(y));
        out.push_back(PairDelta{x, y, std::move(dx), std::move(dt), n});
    }
    return out;
}

double ratio_at(const PairDelta& d, double b, const NormSpec& spec) {
    return norm(combine(b, d.dx, 1.0, d.dt), spec) / d.dx_norm;
}

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw Error(ErrorCode::invalid_argument, "b-grid must not be empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0)
            throw Error(ErrorCode::invalid_argument, "b-grid values must be finite and >= 0");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw Error(ErrorCode::invalid_argument, "b-grid must be strictly ascending");
    }
}

BGridInfo grid_info(const std::vector<double>& grid) {
    return BGridInfo{grid.front(), grid.back(), grid.size()};
}

// Minimiser of c over the grid; strict '<' keeps the smallest b on ties.
std::optional<std::size_t> best_index(const std::vector<GridPoint>& grid) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!best || grid[i].c < grid[*best].c) best = i;
    return best;
}

std::optional<EnrichmentCertificate> certificate_from(const GridPoint& g, double inflation,
                                                      Provenance provenance) {
    if (!(g.c < 1.0)) return std::nullopt;
    const double theta = g.theta_hat * (1.0 + inflation);
    if (!admissible(g.b, theta)) return std::nullopt;
    return EnrichmentCertificate(g.b, theta, provenance);
}

}  // namespace

CertificateVerdict check_certificate(const Operator& op, const EnrichmentCertificate& cert,
                                     const NormSpec& spec, const SamplePlan& plan) {
    CertificateVerdict verdict;
    for (const auto& d : deltas(op, spec, plan)) {
        ++verdict.pairs_tested;
        const double lhs = norm(combine(cert.b(), d.dx, 1.0, d.dt), spec);
        const double ratio = lhs / d.dx_norm;
        if (!verdict.witness || ratio > verdict.worst_ratio) {
            verdict.worst_ratio = ratio;
            verdict.witness = std::make_pair(d.x, d.y);
        }
        if (lhs > cert.theta() * d.dx_norm * (1.0 + kNormSlack)) verdict.passed = false;
    }
    if (verdict.pairs_tested == 0)
        throw Error(ErrorCode::degenerate_plan, "check_certificate: every sampled pair had x = y");
    return verdict;
}

std::vector<double> make_b_grid(double b_max, double b_step) {
    if (!std::isfinite(b_max) || b_max < 0.0)
        throw Error(ErrorCode::invalid_argument, "b-grid: b_max must be finite and >= 0");
    if (!std::isfinite(b_step) || b_step <= 0.0)
        throw Error(ErrorCode::invalid_argument, "b-grid: b_step must be finite and > 0");
    const auto count = static_cast<std::size_t>(std::floor(b_max / b_step + 1e-9)) + 1;
    if (count > 10'000'000) throw Error(ErrorCode::invalid_argument, "b-grid: too many points");
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) grid[k] = static_cast<double>(k) * b_step;
    return grid;
}

CertificateSearch estimate(const Operator& op, const NormSpec& spec, const SamplePlan& plan,
                           const std::vector<double>& b_grid) {
    validate_grid(b_grid);
    const auto ds = deltas(op, spec, plan);
    if (ds.empty())
        throw Error(ErrorCode::degenerate_plan, "estimate: every sampled pair had x = y");

    CertificateSearch search;
    search.usable_pairs = ds.size();
    search.grid.reserve(b_grid.size());
    for (double b : b_grid) {
        double theta_hat = 0.0;
        for (const auto& d : ds) theta_hat = std::max(theta_hat, ratio_at(d, b, spec));
        search.grid.push_back(GridPoint{b, theta_hat, theta_hat / (b + 1.0)});
    }

    const auto best = best_index(search.grid);
    search.certificate = certificate_from(search.grid[*best], kThetaInflation, Provenance::empirical);
    if (search.certificate) {
        search.certificate->sample_count = plan.pair_count;
        search.certificate->seed = plan.seed;
        search.certificate->grid = grid_info(b_grid);
    }
    return search;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Largest singular value of m, from power iteration on m^T m.
InducedNorm spectral_norm(const Matrix& m) {
    constexpr double kTol = 1e-12;
    constexpr std::size_t kMaxSteps = 10'000;
    const std::size_t n = m.size();
    const Matrix gram = m.transposed() * m;

    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    std::vector<double> v(n);
    for (auto& c : v) c = unit(rng);
    double len = std::sqrt(dot(v, v));
    for (auto& c : v) c /= len;

    InducedNorm out;
    double mu_prev = -1.0;
    for (std::size_t k = 1; k <= kMaxSteps; ++k) {
        auto w = gram.apply(v);
        const double mu = dot(v, w);  // Rayleigh quotient, v has unit length
        len = std::sqrt(dot(w, w));
        out.iterations = k;
        if (len == 0.0) {
            out.value = 0.0;
            return out;
        }
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / len;
        if (std::abs(mu - mu_prev) <= kTol * mu) {
            out.value = std::sqrt(std::max(mu, 0.0));
            return out;
        }
        mu_prev = mu;
    }
    out.value = std::sqrt(std::max(mu_prev, 0.0));
    out.converged = false;
    return out;
}

}  // namespace

InducedNorm induced_norm(const Matrix& m, const NormSpec& spec) {
    const std::size_t n = m.size();
    Matrix b = m;
    if (const auto& w = spec.weights()) {
        if (w->size() != n) throw Error(ErrorCode::dimension_mismatch, "induced_norm: weight count mismatch");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b(i, j) = (*w)[i] * m(i, j) / (*w)[j];
    }
    switch (spec.kind()) {
    case NormKind::l1: {
        double best = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += std::abs(b(i, j));
            best = std::max(best, s);
        }
        return InducedNorm{best, true, 0};
    }
    case NormKind::linf: {
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += std::abs(b(i, j));
            best = std::max(best, s);
        }
        return InducedNorm{best, true, 0};
    }
    case NormKind::l2:
        return spectral_norm(b);
    }
    return {};
}

CertificateSearch affine_certificate(const Matrix& a, const NormSpec& spec,
                                     const std::vector<double>& b_grid,
                                     const std::optional<SamplePlan>& fallback) {
    validate_grid(b_grid);
    CertificateSearch search;
    search.grid.reserve(b_grid.size());
    for (double b : b_grid) {
        const InducedNorm in = induced_norm(a.shifted(1.0, b), spec);
        if (!in.converged) {
            if (!fallback)
                throw Error(ErrorCode::non_convergence,
                            "affine_certificate: power iteration did not converge in 10000 steps");
            auto empirical = estimate(Operator::affine(a), spec, *fallback, b_grid);
            empirical.fallback_used = true;
            return empirical;
        }
        search.grid.push_back(GridPoint{b, in.value, in.value / (b + 1.0)});
    }
    // power iteration approaches the L2 norm from below
    const double inflation = spec.kind() == NormKind::l2 ? kThetaInflation : 0.0;
    const auto best = best_index(search.grid);
    search.certificate = certificate_from(search.grid[*best], inflation, Provenance::analytic);
    if (search.certificate) search.certificate->grid = grid_info(b_grid);
    return search;
}

}  // namespace enfix
