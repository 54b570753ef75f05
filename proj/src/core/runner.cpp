// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "report.hpp"

#ifndef ENFIX_VERSION_STRING
#define ENFIX_VERSION_STRING "0.0.0"
#endif

namespace enfix {

const char* version_string() noexcept { return ENFIX_VERSION_STRING; }

nlohmann::json error_json(const std::string& code, const std::string& message) {
    return {{"error", {{"code", code}, {"message", message}}}};
}

namespace {

using Clock = std::chrono::steady_clock;

CertificateSpec effective_spec(const Problem& p, const Overrides& ov) {
    CertificateSpec spec = p.certificate.value_or(CertificateSpec{
        .source = CertificateSource::estimate, .plan = SamplePlan::unit_box(p.dim())});
    if (ov.seed) spec.plan.seed = *ov.seed;
    if (ov.pairs) spec.plan.pair_count = *ov.pairs;
    if (ov.b_max) spec.b_max = *ov.b_max;
    if (ov.b_step) spec.b_step = *ov.b_step;
    return spec;
}

std::uint64_t effective_seed(const Problem& p, const Overrides& ov) {
    if (ov.seed) return *ov.seed;
    if (p.certificate) return p.certificate->plan.seed;
    return kDefaultSeed;
}

nlohmann::json envelope(const char* command, const Problem& p, const Overrides& ov) {
    return {
        {"version", version_string()},
        {"command", command},
        {"problem", {{"name", p.name}, {"path", p.origin}, {"description", p.description}, {"echo", p.echo}}},
        {"seed", effective_seed(p, ov)},
    };
}

void stamp_timing(nlohmann::json& report, const Overrides& ov, Clock::time_point start) {
    if (!ov.timing) return;
    const std::chrono::duration<double> wall = Clock::now() - start;
    report["timing"] = {{"wall_seconds", wall.count()}};
}

CertificateSearch search_certificate(const Problem& p, const CertificateSpec& spec) {
    const Operator target = p.certified_operator();
    const auto grid = make_b_grid(spec.b_max, spec.b_step);
    if (spec.source == CertificateSource::analytic) {
        const auto affine = as_affine(target);
        if (!affine) throw Error(ErrorCode::invalid_argument, "analytic certificates need an affine operator");
        return affine_certificate(affine->matrix, p.norm, grid, spec.plan);
    }
    return estimate(target, p.norm, spec.plan, grid);
}

nlohmann::json search_json(const CertificateSearch& search) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < search.grid.size(); ++i)
        if (search.grid[i].c < search.grid[best].c) best = i;
    nlohmann::json j{
        {"certifiable", search.certifiable()},
        {"certificate", search.certificate ? to_json(*search.certificate) : nlohmann::json(nullptr)},
        {"usable_pairs", search.usable_pairs},
        {"fallback_used", search.fallback_used},
        {"grid_points", search.grid.size()},
    };
    if (!search.grid.empty()) {
        const auto& g = search.grid[best];
        j["best"] = {{"b", g.b}, {"theta_hat", g.theta_hat}, {"c", g.c}};
    }
    return j;
}

ExitCode exit_for(const SolveReport& rep) {
    switch (rep.reason) {
    case Termination::bound_met:
    case Termination::residual_zero:
        if (rep.back_verification_passed && !*rep.back_verification_passed) return ExitCode::not_converged;
        return ExitCode::ok;
    case Termination::precondition_failed: return ExitCode::precondition_failed;
    default: return ExitCode::not_converged;
    }
}

nlohmann::json solve_config_json(const SolveConfig& cfg) {
    nlohmann::json j{
        {"mode", mode_name(cfg.mode)},
        {"tol", cfg.tol},
        {"x0", to_json(cfg.x0)},
        {"lambda_override", cfg.lambda_override ? nlohmann::json(*cfg.lambda_override) : nlohmann::json(nullptr)},
    };
    if (const auto* l = std::get_if<LocalMode>(&cfg.mode)) j["radius"] = l->radius;
    if (const auto* a = std::get_if<AsymptoticMode>(&cfg.mode)) j["power"] = a->power;
    if (const auto* m = std::get_if<MaiaMode>(&cfg.mode)) {
        j["d_norm"] = m->d.describe();
        j["dominance_samples"] = m->dominance_samples;
        j["dominance_seed"] = m->dominance_seed;
    }
    return j;
}

}  // namespace

RunResult run_solve(const Problem& p, const Overrides& ov) {
    const auto start = Clock::now();
    if (!p.solve) throw Error(ErrorCode::invalid_argument, p.origin + ": solve needs a [solve] table");
    if (!p.certificate) throw Error(ErrorCode::invalid_argument, p.origin + ": solve needs a [certificate] table");

    SolveConfig cfg = *p.solve;
    if (ov.tol) cfg.tol = *ov.tol;
    if (ov.max_iter) cfg.max_iter = *ov.max_iter;
    if (ov.lambda_override) cfg.lambda_override = *ov.lambda_override;
    if (ov.seed)
        if (auto* m = std::get_if<MaiaMode>(&cfg.mode)) m->dominance_seed = *ov.seed;

    RunResult out;
    out.report = envelope("solve", p, ov);
    out.report["config"] = solve_config_json(cfg);

    const CertificateSpec spec = effective_spec(p, ov);
    std::optional<EnrichmentCertificate> cert;
    if (spec.source == CertificateSource::declared) {
        cert = EnrichmentCertificate(spec.b, spec.theta, Provenance::declared);
    } else {
        out.search = search_certificate(p, spec);
        out.report["certificate_search"] = search_json(*out.search);
        out.grid_csv = grid_csv(out.search->grid);
        if (!out.search->certifiable()) {
            out.exit = ExitCode::not_certifiable;
            out.report["certificate"] = nullptr;
            out.report["solve"] = nullptr;
            stamp_timing(out.report, ov, start);
            return out;
        }
        cert = *out.search->certificate;
    }

    out.solve = solve_with_mode(p.op, *cert, p.norm, cfg);
    out.exit = exit_for(*out.solve);
    out.report["certificate"] = to_json(*cert);
    out.report["solve"] = to_json(*out.solve);
    out.trace_csv = trace_csv(out.solve->trace);
    stamp_timing(out.report, ov, start);
    return out;
}

RunResult run_estimate(const Problem& p, const Overrides& ov) {
    const auto start = Clock::now();
    CertificateSpec spec = effective_spec(p, ov);
    spec.source = CertificateSource::estimate;  // always sample, whatever the file declares

    RunResult out;
    out.report = envelope("estimate", p, ov);
    out.search = search_certificate(p, spec);
    out.grid_csv = grid_csv(out.search->grid);
    out.report["plan"] = {{"pairs", spec.plan.pair_count},
                          {"seed", spec.plan.seed},
                          {"low", spec.plan.low},
                          {"high", spec.plan.high},
                          {"b_max", spec.b_max},
                          {"b_step", spec.b_step}};
    out.report.update(search_json(*out.search));
    out.exit = out.search->certifiable() ? ExitCode::ok : ExitCode::not_certifiable;
    stamp_timing(out.report, ov, start);
    return out;
}

RunResult run_check(const Problem& p, const Overrides& ov) {
    const auto start = Clock::now();
    if (!p.certificate || p.certificate->source != CertificateSource::declared)
        throw Error(ErrorCode::invalid_argument, p.origin + ": check needs a declared certificate");
    const CertificateSpec spec = effective_spec(p, ov);
    const EnrichmentCertificate cert(spec.b, spec.theta, Provenance::declared);

    RunResult out;
    out.report = envelope("check", p, ov);
    out.verdict = check_certificate(p.certified_operator(), cert, p.norm, spec.plan);
    out.report["certificate"] = to_json(cert);
    out.report["plan"] = {{"pairs", spec.plan.pair_count},
                          {"seed", spec.plan.seed},
                          {"low", spec.plan.low},
                          {"high", spec.plan.high}};
    out.report.update(to_json(*out.verdict));
    out.exit = out.verdict->passed ? ExitCode::ok : ExitCode::check_failed;
    stamp_timing(out.report, ov, start);
    return out;
}

BoundAudit audit_bounds(const SolveReport& rep, const NormSpec& spec, const RealVector& reference,
                        double reference_tolerance) {
    constexpr double kSlack = 1e-9;
    BoundAudit audit;
    if (!rep.bounds_enabled) return audit;
    const double c = rep.certificate.c();
    const auto records = rep.trace.records();

    auto note = [&](const std::string& what, std::size_t n, double err, double bound) {
        audit.held = false;
        if (audit.violations.size() < 5) {
            std::ostringstream os;
            os.precision(17);
            os << what << " at n=" << n << ": error " << err << " > bound " << bound;
            audit.violations.push_back(os.str());
        }
    };
    auto within = [&](double err, double bound) {
        return err <= bound * (1.0 + kSlack) + reference_tolerance;
    };

    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        ++audit.records_checked;
        const double err = norm(difference(r.x, reference), spec);
        if (!within(err, r.a_priori)) note("a priori", r.n, err, r.a_priori);
        if (!within(err, r.a_posteriori)) note("a posteriori", r.n, err, r.a_posteriori);
        for (std::size_t i = 1; i <= 3; ++i) {
            const std::size_t idx = k + i - 1;
            if (idx >= records.size() || records[idx].n != r.n + i - 1) break;
            const double e = norm(difference(records[idx].x, reference), spec);
            const double bound = bound_unified(c, i, r.step_norm);
            if (!within(e, bound)) note("unified i=" + std::to_string(i), r.n, e, bound);
        }
    }
    return audit;
}

namespace {

bool matches(Expectation e, const RunResult& run) {
    if (e == Expectation::not_certifiable) return run.exit == ExitCode::not_certifiable;
    if (!run.solve) return false;
    switch (e) {
    case Expectation::converged: return run.exit == ExitCode::ok;
    case Expectation::diverged: return run.solve->reason == Termination::diverged;
    case Expectation::max_iter: return run.solve->reason == Termination::max_iter;
    case Expectation::escaped_ball: return run.solve->reason == Termination::escaped_ball;
    case Expectation::precondition_failed: return run.solve->reason == Termination::precondition_failed;
    case Expectation::not_certifiable: break;
    }
    return false;
}

}  // namespace

BenchRow bench_problem(const std::string& path, const Overrides& ov) {
    BenchRow row;
    row.path = path;
    row.name = std::filesystem::path(path).filename().string();
    row.summary = {{"problem", row.name}};

    std::optional<Problem> problem;
    try {
        problem = load_problem(path);
    } catch (const Error& e) {
        row.failures.push_back(std::string(to_string(e.code())) + ": " + e.what());
        row.summary["status"] = "parse-failure";
        row.report = nullptr;
        return row;
    }
    const Problem& p = *problem;
    if (!p.reference) row.failures.push_back("no [reference] table");

    RunResult run;
    try {
        run = run_solve(p, ov);
    } catch (const Error& e) {
        row.failures.push_back(std::string(to_string(e.code())) + ": " + e.what());
        row.summary["status"] = "error";
        row.report = nullptr;
        return row;
    }
    row.report = run.report;

    const Expectation expect = p.reference ? p.reference->expect : Expectation::converged;
    row.summary["expected"] = to_string(expect);
    if (run.solve) {
        const auto& s = *run.solve;
        row.summary["b"] = s.certificate.b();
        row.summary["theta"] = s.certificate.theta();
        row.summary["c"] = s.certificate.c();
        row.summary["iterations"] = s.iterations;
        row.summary["termination"] = to_string(s.reason);
    } else {
        row.summary["termination"] = "not-certifiable";
    }
    if (!matches(expect, run))
        row.failures.push_back(std::string("expected ") + to_string(expect) + ", got " +
                               row.summary["termination"].get<std::string>());

    row.summary["bounds_held"] = "n/a";
    if (p.reference && run.solve) {
        const auto& s = *run.solve;
        const double err = norm(difference(s.fixed_point, p.reference->point), p.norm);
        row.summary["final_error"] = err;
        if (expect == Expectation::converged) {
            const auto audit = audit_bounds(s, p.norm, p.reference->point, p.reference->tolerance);
            row.summary["bounds_held"] = audit.held ? "yes" : "no";
            for (const auto& v : audit.violations) row.failures.push_back(v);
            const double tol = ov.tol.value_or(p.solve->tol);
            if (s.reason == Termination::bound_met &&
                !(err <= tol * (1.0 + 1e-9) + p.reference->tolerance))
                row.failures.push_back("final error exceeds the guaranteed tolerance");
            if (s.back_verification_passed && !*s.back_verification_passed)
                row.failures.push_back("back-verification failed");
        }
    }
    row.passed = row.failures.empty();
    row.summary["status"] = row.passed ? "pass" : "fail";
    return row;
}

}  // namespace enfix
