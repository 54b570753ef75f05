// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include "report.hpp"

#include <charconv>
#include <cmath>

namespace enfix {

std::string format_g17(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, end);
}

nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

nlohmann::json to_json(const RealVector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (double c : v.coords()) arr.push_back(json_number(c));
    return arr;
}

nlohmann::json to_json(const EnrichmentCertificate& cert) {
    nlohmann::json j{
        {"b", cert.b()},
        {"theta", cert.theta()},
        {"lambda", cert.lambda()},
        {"c", cert.c()},
        {"provenance", to_string(cert.provenance())},
    };
    if (cert.sample_count) j["sample_count"] = *cert.sample_count;
    if (cert.seed) j["seed"] = *cert.seed;
    if (cert.grid)
        j["b_grid"] = {{"b_min", cert.grid->b_min}, {"b_max", cert.grid->b_max}, {"points", cert.grid->points}};
    return j;
}

nlohmann::json to_json(const DominanceVerdict& verdict) {
    return {
        {"passed", verdict.passed},
        {"samples", verdict.samples},
        {"worst_ratio", json_number(verdict.worst_ratio)},
        {"witness", verdict.witness ? to_json(*verdict.witness) : nlohmann::json(nullptr)},
    };
}

nlohmann::json to_json(const CertificateVerdict& verdict) {
    nlohmann::json witness = nullptr;
    if (verdict.witness)
        witness = {{"x", to_json(verdict.witness->first)}, {"y", to_json(verdict.witness->second)}};
    return {
        {"passed", verdict.passed},
        {"pairs_tested", verdict.pairs_tested},
        {"worst_ratio", json_number(verdict.worst_ratio)},
        {"witness", witness},
    };
}

nlohmann::json to_json(const SolveReport& rep) {
    nlohmann::json j{
        {"fixed_point", to_json(rep.fixed_point)},
        {"iterations", rep.iterations},
        {"termination", to_string(rep.reason)},
        {"detail", rep.detail},
        {"converged", rep.converged()},
        {"lambda", rep.lambda},
        {"bounds_enabled", rep.bounds_enabled},
        {"max_iter", rep.max_iter},
        {"final_a_priori", json_number(rep.final_a_priori)},
        {"final_a_posteriori", json_number(rep.final_a_posteriori)},
        {"final_residual", json_number(rep.final_residual)},
        {"trace", {{"total", rep.trace.total()},
                   {"retained", rep.trace.records().size()},
                   {"truncated", rep.trace.truncated()}}},
    };
    if (rep.back_verification) {
        j["back_verification"] = {{"value", json_number(*rep.back_verification)},
                                  {"limit", json_number(rep.back_verification_limit.value_or(NAN))},
                                  {"passed", rep.back_verification_passed.value_or(false)}};
    } else {
        j["back_verification"] = nullptr;
    }
    if (rep.local) {
        const auto& l = *rep.local;
        j["local"] = {{"radius", l.radius},
                      {"displacement", l.displacement},
                      {"admission_limit", l.admission_limit},
                      {"admitted", l.admitted},
                      {"epsilon", l.epsilon},
                      {"max_distance", l.max_distance}};
    } else {
        j["local"] = nullptr;
    }
    j["dominance"] = rep.dominance ? to_json(*rep.dominance) : nlohmann::json(nullptr);
    return j;
}

std::string trace_csv(const IterationTrace& trace) {
    std::string out = "n,step_norm,a_priori,a_posteriori,residual\n";
    for (const auto& r : trace.records()) {
        out += std::to_string(r.n);
        for (double v : {r.step_norm, r.a_priori, r.a_posteriori, r.residual}) {
            out += ',';
            out += format_g17(v);
        }
        out += '\n';
    }
    return out;
}

std::string grid_csv(const std::vector<GridPoint>& grid) {
    std::string out = "b,theta_hat,c\n";
    for (const auto& g : grid) {
        out += format_g17(g.b);
        out += ',';
        out += format_g17(g.theta_hat);
        out += ',';
        out += format_g17(g.c);
        out += '\n';
    }
    return out;
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace enfix
