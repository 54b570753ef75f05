// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#ifndef ENFIX_CORE_REPORT_HPP_
#define ENFIX_CORE_REPORT_HPP_

#include <string>

#include <json.hpp>

#include "enrichment.hpp"
#include "solver.hpp"

namespace enfix {

/// Locale-independent decimal with 17 significant digits; "nan"/"inf" for
/// non-finite values.
std::string format_g17(double v);

/// Finite numbers as-is, non-finite as null.
nlohmann::json json_number(double v);
nlohmann::json to_json(const RealVector& v);
nlohmann::json to_json(const EnrichmentCertificate& cert);
nlohmann::json to_json(const SolveReport& rep);
nlohmann::json to_json(const CertificateVerdict& verdict);
nlohmann::json to_json(const DominanceVerdict& verdict);

/// Header `n,step_norm,a_priori,a_posteriori,residual`, one row per
/// retained iteration.
std::string trace_csv(const IterationTrace& trace);

/// Header `b,theta_hat,c`, one row per grid point.
std::string grid_csv(const std::vector<GridPoint>& grid);

/// Serialised form used for every JSON document the tools emit.
std::string dump_json(const nlohmann::json& doc);

}  // namespace enfix

#endif  // ENFIX_CORE_REPORT_HPP_
