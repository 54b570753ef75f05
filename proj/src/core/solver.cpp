// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace enfix {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kStepSlack = 1e-9;
constexpr std::size_t kDivergenceRun = 3;
constexpr std::size_t kMaxIterCap = 1'000'000;
constexpr std::size_t kOverrideMaxIter = 10'000;

void require_factor(double c, const char* who) {
    if (!(c >= 0.0 && c < 1.0)) {
        std::ostringstream os;
        os << who << ": contraction factor must lie in [0, 1), got " << c;
        throw Error(ErrorCode::invalid_argument, os.str());
    }
}

}  // namespace

double bound_a_priori(double c, std::size_t n, double first_step) {
    require_factor(c, "bound_a_priori");
    if (n < 1) throw Error(ErrorCode::invalid_argument, "bound_a_priori: n must be >= 1");
    if (!(first_step >= 0.0)) throw Error(ErrorCode::invalid_argument, "bound_a_priori: negative step");
    return std::pow(c, static_cast<double>(n)) / (1.0 - c) * first_step;
}

double bound_a_posteriori(double c, double last_step) {
    require_factor(c, "bound_a_posteriori");
    if (!(last_step >= 0.0)) throw Error(ErrorCode::invalid_argument, "bound_a_posteriori: negative step");
    return c / (1.0 - c) * last_step;
}

double bound_unified(double c, std::size_t i, double step_at_n) {
    require_factor(c, "bound_unified");
    if (i < 1) throw Error(ErrorCode::invalid_argument, "bound_unified: i must be >= 1");
    if (!(step_at_n >= 0.0)) throw Error(ErrorCode::invalid_argument, "bound_unified: negative step");
    return std::pow(c, static_cast<double>(i)) / (1.0 - c) * step_at_n;
}

const char* to_string(Termination t) noexcept {
    switch (t) {
    case Termination::bound_met: return "bound-met";
    case Termination::residual_zero: return "residual-zero";
    case Termination::max_iter: return "max-iter";
    case Termination::diverged: return "diverged";
    case Termination::escaped_ball: return "escaped-ball";
    case Termination::precondition_failed: return "precondition-failed";
    }
    return "?";
}

const char* mode_name(const SolveMode& mode) noexcept {
    switch (mode.index()) {
    case 0: return "global";
    case 1: return "local";
    case 2: return "asymptotic";
    case 3: return "maia";
    }
    return "?";
}

IterationTrace::IterationTrace(std::size_t full_cap, std::size_t keep)
    : full_cap_(std::max(full_cap, 2 * keep)), keep_(keep) {}

void IterationTrace::push(IterationRecord record) {
    ++total_;
    if (!truncated_) {
        head_.push_back(std::move(record));
        if (head_.size() > full_cap_) {
            truncated_ = true;
            tail_.assign(std::make_move_iterator(head_.end() - static_cast<std::ptrdiff_t>(keep_)),
                         std::make_move_iterator(head_.end()));
            head_.resize(keep_);
        }
        return;
    }
    tail_.push_back(std::move(record));
    if (tail_.size() > keep_) tail_.pop_front();
}

std::vector<IterationRecord> IterationTrace::records() const {
    std::vector<IterationRecord> out(head_.begin(), head_.end());
    out.insert(out.end(), tail_.begin(), tail_.end());
    return out;
}

void SolveConfig::validate() const {
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw Error(ErrorCode::invalid_argument, "solve: tol must be a positive finite number");
    if (max_iter && *max_iter < 1) throw Error(ErrorCode::invalid_argument, "solve: max_iter must be >= 1");
    if (x0.dim() == 0) throw Error(ErrorCode::invalid_argument, "solve: x0 is missing");
    if (const auto* local = std::get_if<LocalMode>(&mode); local && !(local->radius > 0.0))
        throw Error(ErrorCode::invalid_argument, "solve: local radius must be > 0");
    if (const auto* asym = std::get_if<AsymptoticMode>(&mode); asym && asym->power < 1)
        throw Error(ErrorCode::invalid_argument, "solve: asymptotic power must be >= 1");
    if (lambda_override && !(*lambda_override > 0.0 && *lambda_override <= 1.0))
        throw Error(ErrorCode::invalid_argument, "solve: lambda override must lie in (0, 1]");
}

std::size_t default_max_iter(double c, double tol, double first_step) {
    if (c == 0.0) return 2;
    if (first_step == 0.0) return 2;
    const double predicted = std::ceil(std::log(tol * (1.0 - c) / first_step) / std::log(c));
    if (!std::isfinite(predicted)) return kMaxIterCap;
    const double n = std::max(predicted, 0.0) + 10.0;
    return n >= static_cast<double>(kMaxIterCap) ? kMaxIterCap : static_cast<std::size_t>(n);
}

namespace {

struct Ball {
    RealVector center;
    double epsilon;
};

struct Observers {
    std::optional<Ball> ball;
    std::optional<NormSpec> d_norm;
};

// Picard iteration of the averaged map; the shared engine of every mode.
SolveReport iterate(const Operator& op, const EnrichmentCertificate& cert, const NormSpec& spec,
                    const SolveConfig& cfg, const Observers& obs, LocalInfo* local) {
    cfg.validate();
    require_finite(cfg.x0, "x0");
    if (cfg.x0.dim() != op.dim())
        throw Error(ErrorCode::dimension_mismatch, "solve: x0 dimension does not match the operator");

    const bool bounds = !cfg.lambda_override.has_value();
    const double lambda = bounds ? cert.lambda() : *cfg.lambda_override;
    const double c = cert.c();

    SolveReport rep(cert, cfg.x0, cfg.trace_cap, cfg.trace_keep);
    rep.lambda = lambda;
    rep.bounds_enabled = bounds;

    RealVector x = cfg.x0;
    RealVector tx;
    try {
        tx = op(x);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::non_finite) throw;
        rep.reason = Termination::diverged;
        rep.detail = "non-finite operator value at x0";
        return rep;
    }
    rep.final_residual = norm(difference(tx, x), spec);

    double first_step = 0.0;
    double prev_step = 0.0;
    std::size_t max_iter = cfg.max_iter.value_or(bounds ? kMaxIterCap : kOverrideMaxIter);
    rep.max_iter = max_iter;
    std::size_t violations = 0;

    for (std::size_t n = 1;; ++n) {
        // x_{n} = (1 - lambda) x_{n-1} + lambda T x_{n-1}; lambda = 1 is plain Picard
        RealVector next = lambda == 1.0 ? tx : combine(1.0 - lambda, x, lambda, tx);
        const double step = norm(difference(next, x), spec);
        const double step_floor = 16.0 * kEps * (norm(x, spec) + norm(next, spec));
        std::optional<double> d_step;
        if (obs.d_norm) d_step = norm(difference(next, x), *obs.d_norm);
        RealVector prev = std::move(x);
        x = std::move(next);

        try {
            tx = op(x);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::non_finite) throw;
            rep.reason = Termination::diverged;
            rep.detail = "non-finite operator value at iterate " + std::to_string(n);
            rep.fixed_point = x;
            rep.iterations = n;
            return rep;
        }
        const double res = norm(difference(tx, x), spec);

        if (n == 1) {
            first_step = step;
            if (!cfg.max_iter && bounds) max_iter = default_max_iter(c, cfg.tol, first_step);
            rep.max_iter = max_iter;
        }

        IterationRecord rec{.n = n, .x = x, .step_norm = step, .a_priori = kNaN,
                            .a_posteriori = kNaN, .residual = res, .d_step = d_step};
        if (bounds) {
            rec.a_priori = bound_a_priori(c, n, first_step);
            rec.a_posteriori = bound_a_posteriori(c, step);
        }

        bool violated = false;
        if (n >= 2) {
            const double allowed = bounds ? c * prev_step * (1.0 + kStepSlack) + step_floor
                                          : prev_step * (1.0 + kStepSlack);
            violated = step > allowed;
        }
        violations = violated ? violations + 1 : 0;

        rep.fixed_point = x;
        rep.iterations = n;
        rep.final_residual = res;
        rep.final_a_priori = rec.a_priori;
        rep.final_a_posteriori = rec.a_posteriori;
        rep.trace.push(std::move(rec));

        if (obs.ball) {
            const double dist = norm(difference(x, obs.ball->center), spec);
            if (local) local->max_distance = std::max(local->max_distance, dist);
            if (dist > obs.ball->epsilon * (1.0 + kStepSlack)) {
                rep.reason = Termination::escaped_ball;
                std::ostringstream os;
                os.precision(17);
                os << "iterate " << n << " lies at distance " << dist
                   << " from the centre, outside the invariant ball of radius " << obs.ball->epsilon;
                rep.detail = os.str();
                return rep;
            }
        }

        if (step == 0.0) {
            rep.reason = Termination::residual_zero;
            rep.detail = "the averaged map fixes the current iterate exactly";
            return rep;
        }
        if (violations >= kDivergenceRun) {
            rep.reason = Termination::diverged;
            rep.detail = bounds ? "step norms failed to contract by c on 3 consecutive steps; "
                                  "the certificate does not hold along this orbit"
                                : "step norms grew on 3 consecutive steps";
            return rep;
        }
        if (bounds && !violated && std::min(rep.final_a_priori, rep.final_a_posteriori) <= cfg.tol) {
            rep.reason = Termination::bound_met;
            return rep;
        }
        if (n >= max_iter) {
            rep.reason = Termination::max_iter;
            return rep;
        }
        prev_step = step;
    }
}

double back_verification_limit(const EnrichmentCertificate& cert, double tol, const RealVector& p,
                               const NormSpec& spec) {
    const double c = cert.c();
    const double spread = std::max((1.0 + c) / (1.0 - c), (1.0 + c) * (cert.b() + 1.0));
    return tol * spread + 16.0 * kEps * (1.0 + norm(p, spec));
}

}  // namespace

SolveReport solve(const Operator& op, const EnrichmentCertificate& cert, const NormSpec& spec,
                  const SolveConfig& cfg) {
    return iterate(op, cert, spec, cfg, Observers{}, nullptr);
}

SolveReport solve_local(const Operator& op, const EnrichmentCertificate& cert,
                        const NormSpec& spec, const SolveConfig& cfg, double radius) {
    cfg.validate();
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw Error(ErrorCode::invalid_argument, "solve_local: radius must be positive");
    require_finite(cfg.x0, "x0");

    LocalInfo info;
    info.radius = radius;
    const double margin = cert.b() + 1.0 - cert.theta();
    info.displacement = residual(op, cfg.x0, spec);
    info.admission_limit = margin * radius;
    info.admitted = info.displacement < info.admission_limit;

    auto early = [&](Termination reason, std::string detail) {
        SolveReport rep(cert, cfg.x0, cfg.trace_cap, cfg.trace_keep);
        rep.reason = reason;
        rep.detail = std::move(detail);
        rep.final_residual = info.displacement;
        rep.local = info;
        return rep;
    };

    if (!info.admitted) {
        std::ostringstream os;
        os.precision(17);
        os << "||T x0 - x0|| = " << info.displacement << " is not below (b + 1 - theta) r = "
           << info.admission_limit;
        return early(Termination::precondition_failed, os.str());
    }
    info.epsilon = info.displacement / margin;
    if (info.displacement == 0.0) return early(Termination::residual_zero, "x0 is already a fixed point");

    Observers obs;
    obs.ball = Ball{cfg.x0, info.epsilon};
    SolveReport rep = iterate(op, cert, spec, cfg, obs, &info);
    rep.local = info;
    return rep;
}

SolveReport solve_asymptotic(const Operator& u, unsigned n, const EnrichmentCertificate& cert,
                             const NormSpec& spec, const SolveConfig& cfg) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "solve_asymptotic: N must be >= 1");
    SolveReport rep = solve(power(u, n), cert, spec, cfg);

    // U(p) is fixed by U^N as well, so uniqueness forces U(p) = p.
    const double bv = residual(u, rep.fixed_point, spec);
    rep.back_verification = bv;
    rep.back_verification_limit = back_verification_limit(cert, cfg.tol, rep.fixed_point, spec);
    rep.back_verification_passed = bv <= *rep.back_verification_limit;
    if (rep.converged() && !*rep.back_verification_passed) {
        std::ostringstream os;
        os.precision(17);
        os << "fixed point of U^" << n << " is not fixed by U: ||U(p) - p|| = " << bv;
        rep.detail = os.str();
    }
    return rep;
}

SolveReport solve_maia(const Operator& op, const EnrichmentCertificate& cert_rho,
                       const NormPair& pair, const SolveConfig& cfg,
                       const DominanceVerdict& dominance) {
    cfg.validate();
    if (!dominance.passed) {
        std::ostringstream os;
        os.precision(17);
        os << "norm dominance ||v||_d <= ||v||_rho fails: worst ratio " << dominance.worst_ratio;
        SolveReport rep(cert_rho, cfg.x0, cfg.trace_cap, cfg.trace_keep);
        rep.reason = Termination::precondition_failed;
        rep.detail = os.str();
        rep.dominance = dominance;
        return rep;
    }
    Observers obs;
    obs.d_norm = pair.d;
    SolveReport rep = iterate(op, cert_rho, pair.rho, cfg, obs, nullptr);
    rep.dominance = dominance;
    const double bv = residual(op, rep.fixed_point, pair.d);
    rep.back_verification = bv;
    rep.back_verification_limit = back_verification_limit(cert_rho, cfg.tol, rep.fixed_point, pair.d);
    rep.back_verification_passed = bv <= *rep.back_verification_limit;
    return rep;
}

SolveReport solve_with_mode(const Operator& op, const EnrichmentCertificate& cert,
                            const NormSpec& spec, const SolveConfig& cfg) {
    if (const auto* local = std::get_if<LocalMode>(&cfg.mode))
        return solve_local(op, cert, spec, cfg, local->radius);
    if (const auto* asym = std::get_if<AsymptoticMode>(&cfg.mode))
        return solve_asymptotic(op, asym->power, cert, spec, cfg);
    if (const auto* maia = std::get_if<MaiaMode>(&cfg.mode)) {
        NormPair pair{maia->d, spec};
        auto dominance = validate_dominance(pair, op.dim(), maia->dominance_samples, maia->dominance_seed);
        return solve_maia(op, cert, pair, cfg, dominance);
    }
    return solve(op, cert, spec, cfg);
}

}  // namespace enfix
