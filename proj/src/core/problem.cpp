// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include "problem.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "problem_text.hpp"

namespace enfix {

const char* to_string(CertificateSource s) noexcept {
    switch (s) {
    case CertificateSource::declared: return "declared";
    case CertificateSource::estimate: return "estimate";
    case CertificateSource::analytic: return "analytic";
    }
    return "?";
}

const char* to_string(Expectation e) noexcept {
    switch (e) {
    case Expectation::converged: return "converged";
    case Expectation::diverged: return "diverged";
    case Expectation::max_iter: return "max-iter";
    case Expectation::escaped_ball: return "escaped-ball";
    case Expectation::precondition_failed: return "precondition-failed";
    case Expectation::not_certifiable: return "not-certifiable";
    }
    return "?";
}

Operator Problem::certified_operator() const {
    if (solve)
        if (const auto* asym = std::get_if<AsymptoticMode>(&solve->mode)) return power(op, asym->power);
    return op;
}

namespace {

using text::Table;
using text::Value;

// Typed, consumption-tracking view of one table; leftover keys are errors.
class Section {
public:
    Section(const text::Document& doc, const std::string& name, const Table& table)
        : doc_(doc), name_(name), table_(table) {}

    const std::string& name() const { return name_; }
    std::size_t line() const { return table_.line; }

    [[noreturn]] void fail(std::size_t line, const std::string& key, const std::string& msg) const {
        text::fail(doc_.origin, line, "[" + name_ + "] " + key + ": " + msg);
    }

    const Value* find(const std::string& key) {
        auto it = table_.entries.find(key);
        if (it == table_.entries.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    const Value& require(const std::string& key) {
        const Value* v = find(key);
        if (!v) text::fail(doc_.origin, table_.line, "[" + name_ + "] missing required key '" + key + "'");
        return *v;
    }

    double number(const Value& v, const std::string& key) const {
        if (!v.is_number()) fail(v.line, key, "expected a number");
        return v.number();
    }

    std::int64_t integer(const Value& v, const std::string& key, std::int64_t min) const {
        if (!v.is_integer()) fail(v.line, key, "expected an integer");
        const auto i = std::get<std::int64_t>(v.data);
        if (i < min) fail(v.line, key, "must be >= " + std::to_string(min));
        return i;
    }

    std::string string(const Value& v, const std::string& key) const {
        if (!v.is_string()) fail(v.line, key, "expected a string");
        return v.string();
    }

    std::vector<double> numbers(const Value& v, const std::string& key) const {
        if (!v.is_array()) fail(v.line, key, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& item : v.array()) {
            if (!item.is_number()) fail(v.line, key, "expected an array of numbers");
            out.push_back(item.number());
        }
        return out;
    }

    std::vector<double> vector_of(const Value& v, const std::string& key, std::size_t dim) const {
        auto out = numbers(v, key);
        if (out.size() != dim)
            fail(v.line, key, "expected " + std::to_string(dim) + " entries, got " + std::to_string(out.size()));
        return out;
    }

    void reject_unused() const {
        for (const auto& [key, value] : table_.entries)
            if (!used_.count(key)) fail(value.line, key, "unknown key");
    }

    void forbid(const std::string& key, const std::string& why) {
        if (const Value* v = find(key)) fail(v->line, key, why);
    }

private:
    const text::Document& doc_;
    std::string name_;
    const Table& table_;
    std::set<std::string> used_;
};

class Builder {
public:
    explicit Builder(const text::Document& doc) : doc_(doc) {}

    std::optional<Section> section(const std::string& name) {
        auto it = doc_.tables.find(name);
        if (it == doc_.tables.end()) return std::nullopt;
        consumed_.insert(name);
        return Section(doc_, name, it->second);
    }

    Section required(const std::string& name) {
        auto s = section(name);
        if (!s) text::fail(doc_.origin, 1, "missing required table [" + name + "]");
        return *s;
    }

    void reject_unknown_tables() const {
        for (const auto& [name, table] : doc_.tables)
            if (!consumed_.count(name)) text::fail(doc_.origin, table.line, "unknown table [" + name + "]");
    }

    NormSpec norm(Section& s, const char* kind_key, const char* weights_key, std::size_t dim) {
        const Value& kv = s.require(kind_key);
        const auto kind = parse_norm_kind(s.string(kv, kind_key));
        if (!kind) s.fail(kv.line, kind_key, "expected one of \"L1\", \"L2\", \"Linf\"");
        if (const Value* w = s.find(weights_key)) {
            auto weights = s.vector_of(*w, weights_key, dim);
            for (double x : weights)
                if (!(x > 0.0)) s.fail(w->line, weights_key, "weights must be strictly positive");
            return NormSpec(*kind, std::move(weights));
        }
        return NormSpec(*kind);
    }

    Operator op(const std::string& path, std::size_t dim) {
        auto sec = section(path);
        if (!sec) text::fail(doc_.origin, 1, "missing required table [" + path + "]");
        Section& s = *sec;
        const Value& fv = s.require("form");
        const std::string form = s.string(fv, "form");
        auto result = [&]() -> Operator {
            if (form == "affine") {
                const Value& mv = s.require("matrix");
                if (!mv.is_array() || mv.array().size() != dim)
                    s.fail(mv.line, "matrix", "expected " + std::to_string(dim) + " rows");
                std::vector<std::vector<double>> rows;
                for (const auto& r : mv.array()) rows.push_back(s.vector_of(r, "matrix", dim));
                std::vector<double> offset(dim, 0.0);
                if (const Value* ov = s.find("offset")) offset = s.vector_of(*ov, "offset", dim);
                return Operator::affine(Matrix::from_rows(rows), RealVector(std::move(offset)));
            }
            if (form == "reflection") {
                if (dim != 1) s.fail(fv.line, "form", "reflection acts on dimension 1 only");
                return Operator::reflection();
            }
            if (form == "threshold") {
                if (dim != 1) s.fail(fv.line, "form", "threshold acts on dimension 1 only");
                const double cut = s.number(s.require("cut"), "cut");
                const double low = s.number(s.require("low"), "low");
                const double high = s.number(s.require("high"), "high");
                return Operator::threshold(cut, low, high);
            }
            if (form == "power") {
                const auto e = s.integer(s.require("exponent"), "exponent", 1);
                if (e > 1'000'000) s.fail(s.require("exponent").line, "exponent", "exponent too large");
                return power(op(path + ".base", dim), static_cast<unsigned>(e));
            }
            if (form == "composed") {
                Operator outer = op(path + ".outer", dim);
                Operator inner = op(path + ".inner", dim);
                return Operator::composed(outer, inner);
            }
            s.fail(fv.line, "form", "unknown form '" + form +
                                        "' (expected affine, reflection, threshold, power or composed)");
        }();
        s.reject_unused();
        return result;
    }

private:
    const text::Document& doc_;
    std::set<std::string> consumed_;
};

nlohmann::json to_json(const Value& v) {
    return std::visit(
        [](const auto& x) -> nlohmann::json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Value::Array>) {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& item : x.items) arr.push_back(to_json(item));
                return arr;
            } else {
                return x;
            }
        },
        v.data);
}

nlohmann::json echo_of(const text::Document& doc) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [name, table] : doc.tables) {
        nlohmann::json* node = &out;
        std::stringstream ss(name);
        for (std::string part; std::getline(ss, part, '.');) node = &(*node)[part];
        for (const auto& [key, value] : table.entries) (*node)[key] = to_json(value);
    }
    return out;
}

Expectation parse_expectation(Section& s, const Value& v) {
    const std::string e = s.string(v, "expect");
    if (e == "converged") return Expectation::converged;
    if (e == "diverged") return Expectation::diverged;
    if (e == "max-iter") return Expectation::max_iter;
    if (e == "escaped-ball") return Expectation::escaped_ball;
    if (e == "precondition-failed") return Expectation::precondition_failed;
    if (e == "not-certifiable") return Expectation::not_certifiable;
    s.fail(v.line, "expect", "unknown expectation '" + e + "'");
}

}  // namespace

Problem parse_problem(std::string_view source, const std::string& origin) {
    const text::Document doc = text::parse(source, origin);
    Builder build(doc);

    std::string description;
    if (auto meta = build.section("problem")) {
        if (const Value* d = meta->find("description")) description = meta->string(*d, "description");
        meta->reject_unused();
    }

    Section space = build.required("space");
    const Value& dv = space.require("dimension");
    const auto dim = static_cast<std::size_t>(space.integer(dv, "dimension", 1));
    if (dim > 100'000) space.fail(dv.line, "dimension", "dimension too large");
    NormSpec norm = build.norm(space, "norm", "weights", dim);
    space.reject_unused();

    Operator op = build.op("operator", dim);

    std::optional<SolveConfig> solve;
    if (auto s = build.section("solve")) {
        SolveConfig cfg;
        std::string mode = "global";
        if (const Value* m = s->find("mode")) mode = s->string(*m, "mode");
        cfg.x0 = RealVector(s->vector_of(s->require("x0"), "x0", dim));
        if (const Value* t = s->find("tol")) {
            cfg.tol = s->number(*t, "tol");
            if (!(cfg.tol > 0.0)) s->fail(t->line, "tol", "must be > 0");
        }
        if (const Value* m = s->find("max_iter"))
            cfg.max_iter = static_cast<std::size_t>(s->integer(*m, "max_iter", 1));

        const std::string only = "only applies to mode ";
        if (mode != "local") s->forbid("radius", only + "local");
        if (mode != "asymptotic") s->forbid("power", only + "asymptotic");
        if (mode != "maia") {
            for (const char* k : {"d_norm", "d_weights", "dominance_samples", "dominance_seed"})
                s->forbid(k, only + "maia");
        }

        if (mode == "global") {
            cfg.mode = GlobalMode{};
        } else if (mode == "local") {
            const Value& r = s->require("radius");
            const double radius = s->number(r, "radius");
            if (!(radius > 0.0)) s->fail(r.line, "radius", "must be > 0");
            cfg.mode = LocalMode{radius};
        } else if (mode == "asymptotic") {
            const Value& p = s->require("power");
            const auto n = s->integer(p, "power", 1);
            if (n > 1'000'000) s->fail(p.line, "power", "too large");
            cfg.mode = AsymptoticMode{static_cast<unsigned>(n)};
        } else if (mode == "maia") {
            MaiaMode maia;
            maia.d = build.norm(*s, "d_norm", "d_weights", dim);
            if (const Value* n = s->find("dominance_samples"))
                maia.dominance_samples = static_cast<std::size_t>(s->integer(*n, "dominance_samples", 1));
            if (const Value* n = s->find("dominance_seed"))
                maia.dominance_seed = static_cast<std::uint64_t>(s->integer(*n, "dominance_seed", 0));
            cfg.mode = maia;
        } else {
            s->fail(s->find("mode")->line, "mode", "unknown mode '" + mode +
                                                       "' (expected global, local, asymptotic or maia)");
        }
        s->reject_unused();
        solve = std::move(cfg);
    }

    Problem problem{.name = std::filesystem::path(origin).stem().string(),
                    .origin = origin,
                    .description = std::move(description),
                    .norm = std::move(norm),
                    .op = std::move(op),
                    .certificate = std::nullopt,
                    .solve = std::move(solve),
                    .reference = std::nullopt,
                    .echo = echo_of(doc)};

    if (auto s = build.section("certificate")) {
        CertificateSpec cert;
        const Value& src = s->require("source");
        const std::string source = s->string(src, "source");
        if (source == "declared") cert.source = CertificateSource::declared;
        else if (source == "estimate") cert.source = CertificateSource::estimate;
        else if (source == "analytic") cert.source = CertificateSource::analytic;
        else s->fail(src.line, "source", "expected \"declared\", \"estimate\" or \"analytic\"");

        if (cert.source == CertificateSource::declared) {
            const Value& bv = s->require("b");
            const Value& tv = s->require("theta");
            cert.b = s->number(bv, "b");
            cert.theta = s->number(tv, "theta");
            if (cert.b < 0.0) s->fail(bv.line, "b", "must be >= 0");
            if (!admissible(cert.b, cert.theta))
                s->fail(tv.line, "theta", "inadmissible certificate: need 0 <= theta < b + 1");
            s->forbid("b_max", "only applies to estimated or analytic certificates");
            s->forbid("b_step", "only applies to estimated or analytic certificates");
        } else {
            s->forbid("b", "only applies to declared certificates");
            s->forbid("theta", "only applies to declared certificates");
            if (const Value* v = s->find("b_max")) {
                cert.b_max = s->number(*v, "b_max");
                if (cert.b_max < 0.0) s->fail(v->line, "b_max", "must be >= 0");
            }
            if (const Value* v = s->find("b_step")) {
                cert.b_step = s->number(*v, "b_step");
                if (!(cert.b_step > 0.0)) s->fail(v->line, "b_step", "must be > 0");
            }
        }
        cert.plan = SamplePlan::unit_box(dim);
        if (const Value* v = s->find("pairs"))
            cert.plan.pair_count = static_cast<std::size_t>(s->integer(*v, "pairs", 1));
        if (const Value* v = s->find("seed"))
            cert.plan.seed = static_cast<std::uint64_t>(s->integer(*v, "seed", 0));
        const Value* lo = s->find("low");
        const Value* hi = s->find("high");
        if (lo || hi) {
            if (!lo || !hi) s->fail(s->line(), lo ? "high" : "low", "low and high must be given together");
            cert.plan.low = s->vector_of(*lo, "low", dim);
            cert.plan.high = s->vector_of(*hi, "high", dim);
            for (std::size_t k = 0; k < dim; ++k)
                if (!(cert.plan.low[k] < cert.plan.high[k]))
                    s->fail(hi->line, "high", "sample box has zero volume (need low < high per coordinate)");
        }
        s->reject_unused();
        if (cert.source == CertificateSource::analytic && !as_affine(problem.certified_operator()))
            s->fail(src.line, "source", "analytic certificates need an affine operator");
        problem.certificate = std::move(cert);
    }

    if (auto s = build.section("reference")) {
        ReferenceSpec ref{RealVector(s->vector_of(s->require("point"), "point", dim))};
        if (const Value* t = s->find("tolerance")) {
            ref.tolerance = s->number(*t, "tolerance");
            if (ref.tolerance < 0.0) s->fail(t->line, "tolerance", "must be >= 0");
        }
        if (const Value* e = s->find("expect")) ref.expect = parse_expectation(*s, *e);
        s->reject_unused();
        problem.reference = std::move(ref);
    }

    build.reject_unknown_tables();
    return problem;
}

Problem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open problem file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str(), path.string());
}

}  // namespace enfix
