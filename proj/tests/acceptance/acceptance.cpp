// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "enfix/enfix.h"
#include "enrichment.hpp"
#include "problem.hpp"
#include "report.hpp"
#include "runner.hpp"
#include "solver.hpp"

using namespace enfix;

namespace {

constexpr double kFixedPointTol = 1e-15;       // criterion 1, b = 1
constexpr double kGuaranteedError = 1e-10;     // criterion 1, b = 1/2
constexpr double kBoundSlack = 1e-9;           // criterion 3, relative
constexpr double kCorpusSeconds = 5.0;         // criterion 3
constexpr std::int64_t kTightUlps = 2;         // criterion 4
constexpr double kEstimateC = 1e-9;            // criterion 7, T x = -x
constexpr double kGridStep = 0.05;             // criterion 7
constexpr double kOracleAgreement = 1e-12;     // criterion 7, relative
constexpr double kBallRadiusTol = 1e-15;       // criterion 6, epsilon vs 0.1
constexpr double kMaiaResidual = 1e-10;        // criterion 8
constexpr double kNormAxiomRel = 1e-12;        // criterion 9
constexpr double kResidualScalingRel = 1e-12;  // criterion 9

const NormSpec kAbs(NormKind::l2);

struct Outcome {
    bool passed = true;
    std::string note;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (passed) note = what;
        passed = false;
    }
};

std::string corpus_dir() { return ENFIX_CORPUS_DIR; }

std::vector<std::filesystem::path> corpus_files() {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
        if (e.path().extension() == ".toml") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

SolveConfig config(RealVector x0, double tol) {
    SolveConfig cfg;
    cfg.x0 = std::move(x0);
    cfg.tol = tol;
    cfg.trace_cap = 1'000'000;
    return cfg;
}

std::int64_t ulps(double a, double b) {
    std::int64_t n = 0;
    while (a != b && n <= 1000) {
        a = std::nextafter(a, b);
        ++n;
    }
    return n;
}

RealVector random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& c : v) c = u(rng);
    return RealVector(std::move(v));
}

std::string fmt(double v) { return format_g17(v); }

// 1. Reflection map, b = 1 and b = 1/2.
Outcome reflection_replication() {
    Outcome o;
    const auto r = Operator::reflection();
    const auto one = solve(r, EnrichmentCertificate(1.0, 0.0), kAbs, config(RealVector{0.0}, 1e-10));
    o.require(one.converged(), "b=1 did not converge");
    o.require(std::abs(one.fixed_point[0] - 0.5) <= kFixedPointTol, "b=1 fixed point " + fmt(one.fixed_point[0]));
    o.require(one.iterations <= 2, "b=1 took " + std::to_string(one.iterations) + " iterations");

    const auto half = solve(r, EnrichmentCertificate(0.5, 0.5), kAbs, config(RealVector{0.0}, kGuaranteedError));
    o.require(std::abs(half.certificate.c() - 1.0 / 3.0) <= 1e-16, "b=1/2 has c != 1/3");
    o.require(half.reason == Termination::bound_met, "b=1/2 ended " + std::string(to_string(half.reason)));
    o.require(std::min(half.final_a_priori, half.final_a_posteriori) <= kGuaranteedError, "b=1/2 guarantee above tol");
    o.require(std::abs(half.fixed_point[0] - 0.5) <= kGuaranteedError, "b=1/2 true error above tol");
    o.require(half.iterations <= 30, "b=1/2 took " + std::to_string(half.iterations) + " iterations");
    o.note = o.passed ? "b=1: " + std::to_string(one.iterations) + " it; b=1/2: " + std::to_string(half.iterations) +
                            " it"
                      : o.note;
    return o;
}

// 2. Plain Picard iteration (lambda forced to 1) oscillates.
Outcome picard_failure() {
    Outcome o;
    const auto r = Operator::reflection();
    auto cfg = config(RealVector{0.0}, 1e-10);
    cfg.max_iter = 1000;
    for (const auto& cert : {EnrichmentCertificate(0.0, 0.99), EnrichmentCertificate(1.0, 0.0)}) {
        // route 1: b = 0 gives lambda = 1 directly; route 2: explicit override
        auto c = cfg;
        if (cert.b() != 0.0) c.lambda_override = 1.0;
        const auto rep = solve(r, cert, kAbs, c);
        o.require(rep.reason == Termination::diverged || rep.reason == Termination::max_iter,
                  "ended " + std::string(to_string(rep.reason)));
        o.require(rep.reason != Termination::bound_met, "reported bound-met");
        for (const auto& rec : rep.trace.records()) o.require(rec.step_norm == 1.0, "step norm " + fmt(rec.step_norm));
        if (o.passed) o.note += std::string(o.note.empty() ? "" : "; ") + to_string(rep.reason);
    }
    return o;
}

// 3. Bound validity over the corpus.
Outcome bound_validity() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    std::size_t problems = 0, records = 0;
    for (const auto& path : corpus_files()) {
        const auto p = load_problem(path);
        if (!p.reference || p.reference->expect != Expectation::converged) continue;
        const auto res = run_solve(p, Overrides{});
        if (!res.solve) {
            o.require(false, p.name + ": no solve report");
            continue;
        }
        const auto& rep = *res.solve;
        o.require(rep.converged(), p.name + " did not converge");
        ++problems;

        const auto recs = rep.trace.records();
        o.require(!rep.trace.truncated(), p.name + " trace truncated");
        const double c = rep.certificate.c();
        const double reftol = p.reference->tolerance;
        auto err = [&](std::size_t k) { return norm(difference(recs[k].x, p.reference->point), p.norm); };
        for (std::size_t k = 0; k < recs.size(); ++k) {
            ++records;
            const double e = err(k);
            const double pri = std::pow(c, double(recs[k].n)) / (1 - c) * recs[0].step_norm;
            const double post = c / (1 - c) * recs[k].step_norm;
            o.require(e <= pri * (1 + kBoundSlack) + reftol, p.name + " a priori at n=" + std::to_string(recs[k].n));
            o.require(e <= post * (1 + kBoundSlack) + reftol, p.name + " a posteriori at n=" + std::to_string(recs[k].n));
            for (std::size_t i = 1; i <= 3 && k + i - 1 < recs.size(); ++i) {
                const double uni = std::pow(c, double(i)) / (1 - c) * recs[k].step_norm;
                o.require(err(k + i - 1) <= uni * (1 + kBoundSlack) + reftol,
                          p.name + " unified i=" + std::to_string(i) + " at n=" + std::to_string(recs[k].n));
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(problems >= 6, "only " + std::to_string(problems) + " reference problems");
    o.require(secs < kCorpusSeconds, "corpus took " + fmt(secs) + " s");
    if (o.passed) {
        std::ostringstream os;
        os.precision(3);
        os << problems << " problems, " << records << " iterates, " << secs << " s";
        o.note = os.str();
    }
    return o;
}

// 4. Tx = x/2 from 1: the a priori bound is the true error.
Outcome tightness() {
    Outcome o;
    const auto half = Operator::affine(Matrix(1, {0.5}));
    const auto rep = solve(half, EnrichmentCertificate(0.0, 0.5), kAbs, config(RealVector{1.0}, 1e-14));
    std::size_t checked = 0;
    for (const auto& r : rep.trace.records()) {
        if (r.n > 40) break;
        const double exact = std::ldexp(1.0, -static_cast<int>(r.n));
        o.require(ulps(r.a_priori, exact) <= kTightUlps, "a priori at n=" + std::to_string(r.n) + " is " + fmt(r.a_priori));
        o.require(ulps(std::abs(r.x[0]), exact) <= kTightUlps, "error at n=" + std::to_string(r.n));
        ++checked;
    }
    o.require(checked == 40, "only " + std::to_string(checked) + " iterates recorded");
    if (o.passed) o.note = "n = 1..40";
    return o;
}

// 5. Asymptotic mode on the Rus threshold map.
Outcome asymptotic_replication() {
    Outcome o;
    const auto u = Operator::threshold(2.0, 0.0, -1.0 / 3.0);
    const auto search = estimate(power(u, 2), kAbs, SamplePlan::unit_box(1), make_b_grid(10.0, kGridStep));
    o.require(search.certifiable(), "U^2 not certifiable");
    if (!search.certifiable()) return o;
    for (double x0 : {-5.0, 0.0, 3.0, 100.0}) {
        auto cfg = config(RealVector{x0}, 1e-12);
        cfg.mode = AsymptoticMode{2};
        const auto rep = solve_with_mode(u, *search.certificate, kAbs, cfg);
        o.require(rep.converged(), "x0=" + fmt(x0) + " did not converge");
        o.require(rep.fixed_point == RealVector{0.0}, "x0=" + fmt(x0) + " gave " + fmt(rep.fixed_point[0]));
        o.require(rep.back_verification && *rep.back_verification == 0.0, "x0=" + fmt(x0) + " back-verification");
    }
    if (o.passed) o.note = "p = 0, back-verification 0 for all x0";
    return o;
}

// 6. Local mode: admitted run stays in the ball; rejected run exits 2.
Outcome local_mode() {
    Outcome o;
    auto cfg = config(RealVector{0.4}, 1e-10);
    cfg.mode = LocalMode{0.2};
    const auto rep = solve_with_mode(Operator::reflection(), EnrichmentCertificate(1.0, 0.0), kAbs, cfg);
    o.require(rep.local && rep.local->admitted, "not admitted");
    o.require(rep.local && rep.local->admission_limit == 0.4, "admission limit is not 0.4");
    o.require(rep.local && std::abs(rep.local->epsilon - 0.1) <= kBallRadiusTol, "epsilon is not 0.1");
    o.require(rep.converged() && std::abs(rep.fixed_point[0] - 0.5) <= 1e-10, "did not converge to 0.5");
    for (const auto& r : rep.trace.records())
        o.require(std::abs(r.x[0] - 0.4) <= 0.1, "iterate " + std::to_string(r.n) + " left the ball");

    const char* rejected = R"(
[space]
dimension = 1
norm = "L2"
[operator]
form = "reflection"
[certificate]
source = "declared"
b = 1.0
theta = 0.0
[solve]
mode = "local"
x0 = [0.0]
radius = 0.2
)";
    enfix_problem* p = nullptr;
    enfix_result* r = nullptr;
    enfix_options opt;
    enfix_options_init(&opt);
    o.require(enfix_problem_load_string(rejected, "rejected", &p) == ENFIX_OK, "load failed");
    o.require(p && enfix_solve(p, &opt, &r) == ENFIX_OK, "solve failed");
    if (r) {
        o.require(enfix_result_exit_code(r) == ENFIX_EXIT_PRECONDITION_FAILED, "exit code is not 2");
        const auto doc = nlohmann::json::parse(enfix_result_json(r));
        o.require(doc["solve"]["iterations"] == 0, "iterated after rejection");
    }
    enfix_result_free(r);
    enfix_problem_free(p);
    if (o.passed) o.note = "admitted: " + std::to_string(rep.iterations) + " it in B(0.4, 0.1); rejected: exit 2";
    return o;
}

// 7. Estimation, cross-checked against a direct ratio maximisation over the
// same sample pairs.
struct OracleBest {
    double b;
    double c;
    std::vector<double> theta;
};

OracleBest oracle(const Operator& op, const NormSpec& spec, const SamplePlan& plan, const std::vector<double>& grid) {
    const auto pairs = sample_pairs(plan);
    OracleBest best{0.0, INFINITY, {}};
    for (double b : grid) {
        double worst = 0.0;
        for (const auto& [x, y] : pairs) {
            const auto tx = op(x), ty = op(y);
            std::vector<double> num(x.dim()), den(x.dim());
            for (std::size_t k = 0; k < x.dim(); ++k) {
                den[k] = x[k] - y[k];
                num[k] = b * den[k] + (tx[k] - ty[k]);
            }
            bool same = true;
            for (double d : den) same &= d == 0.0;
            if (same) continue;
            worst = std::max(worst, norm(RealVector(num), spec) / norm(RealVector(den), spec));
        }
        best.theta.push_back(worst);
        const double c = worst / (b + 1.0);
        if (c < best.c) {
            best.c = c;
            best.b = b;
        }
    }
    return best;
}

Outcome estimation() {
    Outcome o;
    const auto grid = make_b_grid(10.0, kGridStep);
    struct Case {
        std::string name;
        Operator op;
        NormSpec spec;
    };
    const std::vector<Case> cases{
        {"-x", Operator::affine(Matrix(1, {-1.0})), kAbs},
        {"2x", Operator::affine(Matrix(1, {2.0})), kAbs},
        {"L1 swap", Operator::affine(Matrix(2, {0.0, 0.4, 0.4, 0.0})), NormSpec(NormKind::l1)},
    };
    std::ostringstream summary;
    for (const auto& tc : cases) {
        const auto plan = SamplePlan::unit_box(tc.op.dim());
        const auto s = estimate(tc.op, tc.spec, plan, grid);
        const auto ref = oracle(tc.op, tc.spec, plan, grid);
        for (std::size_t k = 0; k < grid.size(); ++k)
            o.require(std::abs(s.grid[k].theta_hat - ref.theta[k]) <= kOracleAgreement * std::max(1.0, ref.theta[k]),
                      tc.name + ": theta_hat differs from oracle at b=" + fmt(grid[k]));
        const bool oracle_certifiable = ref.c < 1.0;
        o.require(s.certifiable() == oracle_certifiable, tc.name + ": certifiability differs from oracle");
        if (s.certifiable() && oracle_certifiable) o.require(s.certificate->b() == ref.b, tc.name + ": b differs from oracle");

        if (tc.name == "-x") {
            o.require(s.certifiable() && s.certificate->b() == 1.0 && s.certificate->c() <= kEstimateC,
                      "-x: expected b = 1, c <= 1e-9");
        } else if (tc.name == "2x") {
            o.require(!s.certifiable(), "2x: expected not-certifiable");
        } else {
            o.require(s.certifiable() && s.certificate->b() == 0.0 &&
                          std::abs(s.certificate->c() - 0.4) <= 0.4 * kThetaInflation + 1e-15,
                      "L1 swap: expected c = 0.4 at b = 0");
        }
        summary << tc.name << ": " << (s.certifiable() ? "b=" + fmt(s.certificate->b()) + " c=" + fmt(s.certificate->c())
                                                       : std::string("not certifiable"))
                << "; ";
    }
    if (o.passed) o.note = summary.str() + "oracle agrees";
    return o;
}

// 8. Two-norm (Maia) mode.
Outcome maia() {
    Outcome o;
    const auto p = load_problem(corpus_dir() + "/maia_affine.toml");
    const auto res = run_solve(p, Overrides{});
    o.require(res.solve && res.solve->converged(), "maia problem did not converge");
    if (res.solve) {
        const double dres = residual(p.op, res.solve->fixed_point, NormSpec(NormKind::l2));
        o.require(dres <= kMaiaResidual, "d residual " + fmt(dres));
        o.require(norm(res.solve->fixed_point, NormSpec(NormKind::l2)) <= kMaiaResidual, "limit is not the origin");
    }
    const NormSpec l1(NormKind::l1), l2(NormKind::l2);
    const auto fwd = validate_dominance({l2, l1}, 2, 1000, 42);
    const auto back = validate_dominance({l1, l2}, 2, 1000, 42);
    o.require(fwd.passed, "(d=L2, rho=L1) rejected");
    o.require(!back.passed, "(d=L1, rho=L2) accepted");
    o.require(back.witness && *back.witness == RealVector{1.0, 1.0}, "witness is not (1,1)");
    if (o.passed) o.note = "d residual <= 1e-10; swapped pair fails at (1,1)";
    return o;
}

// 9. Property suites.
Outcome properties() {
    Outcome o;
    std::mt19937_64 rng(20260101);

    // norm axioms
    for (const auto& spec : {NormSpec(NormKind::l1), NormSpec(NormKind::l2), NormSpec(NormKind::linf),
                             NormSpec(NormKind::l2, {0.5, 2.0, 4.0})}) {
        std::uniform_real_distribution<double> scalar(-10.0, 10.0);
        for (int i = 0; i < 10'000; ++i) {
            const auto u = random_vector(rng, 3, -5, 5), v = random_vector(rng, 3, -5, 5);
            const double a = scalar(rng), nu = norm(u, spec), nv = norm(v, spec);
            if (!(nu > 0.0) || std::abs(norm(combine(a, u, 0.0, u), spec) - std::abs(a) * nu) >
                                   kNormAxiomRel * std::abs(a) * nu ||
                norm(combine(1.0, u, 1.0, v), spec) > (nu + nv) * (1 + kNormAxiomRel)) {
                o.require(false, "norm axiom failed for " + spec.describe());
                break;
            }
        }
        o.require(norm(RealVector::zeros(3), spec) == 0.0, "norm of zero");
    }

    // step contraction on every certified corpus run
    for (const auto& path : corpus_files()) {
        const auto p = load_problem(path);
        if (!p.reference || p.reference->expect != Expectation::converged) continue;
        const auto res = run_solve(p, Overrides{});
        if (!res.solve) continue;
        const auto recs = res.solve->trace.records();
        const double c = res.solve->certificate.c();
        for (std::size_t k = 1; k < recs.size(); ++k) {
            const double floor = 16 * 2.220446049250313e-16 *
                                 (norm(recs[k].x, p.norm) + norm(recs[k - 1].x, p.norm));
            o.require(recs[k].step_norm <= c * recs[k - 1].step_norm * (1 + kBoundSlack) + floor,
                      p.name + ": step contraction at n=" + std::to_string(recs[k].n));
        }
    }

    // residual scaling of the averaged map
    {
        const auto op = Operator::affine(Matrix(2, {0.4, -1.3, 0.8, -0.2}), RealVector{1.0, -2.0});
        for (double lambda : {0.25, 0.5, 2.0 / 3.0}) {
            const auto tl = averaged(op, lambda);
            for (int i = 0; i < 1000; ++i) {
                const auto x = random_vector(rng, 2, -10, 10);
                const double full = residual(op, x, kAbs);
                if (std::abs(residual(tl, x, kAbs) - lambda * full) > kResidualScalingRel * lambda * full) {
                    o.require(false, "residual scaling at lambda=" + fmt(lambda));
                    break;
                }
            }
        }
    }

    // b = 0 is plain Picard, bit for bit
    {
        const auto op = Operator::affine(Matrix(2, {0.3, -0.2, 0.1, 0.4}), RealVector{1.0, -1.0});
        const auto rep = solve(op, EnrichmentCertificate(0.0, 0.6), kAbs, config(RealVector{5.0, -3.0}, 1e-14));
        RealVector x{5.0, -3.0};
        for (const auto& r : rep.trace.records()) {
            x = op(x);
            o.require(r.x == x, "Picard mismatch at n=" + std::to_string(r.n));
        }
    }

    // power composition
    {
        const auto a = Operator::affine(Matrix(2, {0.3, -0.7, 0.9, 0.1}), RealVector{0.25, -1.5});
        const auto t = Operator::threshold(2.0, 0.0, -1.0 / 3.0);
        for (const auto& op : {a, t})
            for (unsigned m = 1; m <= 5; ++m)
                for (unsigned n = 1; n <= 5; ++n) {
                    const auto x = random_vector(rng, op.dim(), -4, 4);
                    o.require(power(op, m + n)(x) == power(op, m)(power(op, n)(x)), "power composition");
                }
    }

    // determinism through the public API
    for (const auto& path : corpus_files()) {
        enfix_options opt;
        enfix_options_init(&opt);
        std::string docs[2];
        for (auto& doc : docs) {
            enfix_problem* p = nullptr;
            enfix_result* r = nullptr;
            if (enfix_problem_load_file(path.c_str(), &p) == ENFIX_OK && enfix_solve(p, &opt, &r) == ENFIX_OK)
                doc = enfix_result_json(r);
            enfix_result_free(r);
            enfix_problem_free(p);
        }
        o.require(!docs[0].empty() && docs[0] == docs[1], path.filename().string() + ": reports differ");
    }
    if (o.passed) o.note = "norm axioms, step contraction, residual scaling, Picard, power composition, determinism";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"reflection replication", reflection_replication},
        {"Picard failure at lambda = 1", picard_failure},
        {"bound validity over the corpus", bound_validity},
        {"a priori tightness on x/2", tightness},
        {"asymptotic threshold map", asymptotic_replication},
        {"local mode", local_mode},
        {"estimation vs brute-force oracle", estimation},
        {"two-norm mode", maia},
        {"property suites", properties},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.passed = false;
            o.note = std::string("exception: ") + e.what();
        }
        failures += o.passed ? 0 : 1;
        std::printf("%s criterion %zu: %s (%s)\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.note.c_str());
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
