// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include <doctest.h>

#include <string>

#include <nlohmann/json.hpp>

#include "enfix/enfix.h"
#include "test_support.hpp"

namespace {

struct Loaded {
    enfix_problem* p = nullptr;
    ~Loaded() { enfix_problem_free(p); }
};

struct Result {
    enfix_result* r = nullptr;
    ~Result() { enfix_result_free(r); }
};

}  // namespace

TEST_CASE("c api: solve a corpus problem") {
    Loaded prob;
    REQUIRE(enfix_problem_load_file(enfix::testing::corpus_path("reflection_b050.toml").c_str(), &prob.p) == ENFIX_OK);
    CHECK(enfix_problem_dimension(prob.p) == 1);
    CHECK(std::string(enfix_problem_name(prob.p)) == "reflection_b050");

    enfix_options opt;
    enfix_options_init(&opt);
    Result res;
    REQUIRE(enfix_solve(prob.p, &opt, &res.r) == ENFIX_OK);
    CHECK(enfix_result_exit_code(res.r) == ENFIX_EXIT_OK);
    double x = -1;
    CHECK(enfix_result_fixed_point(res.r, &x, 1) == 1);
    CHECK(std::abs(x - 0.5) <= 1e-10);
    const auto doc = nlohmann::json::parse(enfix_result_json(res.r));
    CHECK(doc["command"] == "solve");
    CHECK(doc["solve"]["converged"] == true);
    CHECK(std::string(enfix_result_trace_csv(res.r)).rfind("n,step_norm,", 0) == 0);
    CHECK(std::string(enfix_result_grid_csv(res.r)).empty());
}

TEST_CASE("c api: exit codes") {
    enfix_options opt;
    enfix_options_init(&opt);
    {
        Loaded prob;
        REQUIRE(enfix_problem_load_file(enfix::testing::corpus_path("local_reflection_rejected.toml").c_str(),
                                        &prob.p) == ENFIX_OK);
        Result res;
        REQUIRE(enfix_solve(prob.p, &opt, &res.r) == ENFIX_OK);
        CHECK(enfix_result_exit_code(res.r) == ENFIX_EXIT_PRECONDITION_FAILED);
        CHECK(enfix_result_fixed_point(res.r, nullptr, 0) == 1);
    }
    {
        Loaded prob;
        REQUIRE(enfix_problem_load_file(enfix::testing::corpus_path("expansion_not_certifiable.toml").c_str(),
                                        &prob.p) == ENFIX_OK);
        Result res;
        REQUIRE(enfix_solve(prob.p, &opt, &res.r) == ENFIX_OK);
        CHECK(enfix_result_exit_code(res.r) == ENFIX_EXIT_NOT_CERTIFIABLE);
        CHECK_FALSE(std::string(enfix_result_grid_csv(res.r)).empty());
    }
    {
        Loaded prob;
        REQUIRE(enfix_problem_load_file(enfix::testing::corpus_path("picard_divergence.toml").c_str(), &prob.p) ==
                ENFIX_OK);
        Result res;
        REQUIRE(enfix_solve(prob.p, &opt, &res.r) == ENFIX_OK);
        CHECK(enfix_result_exit_code(res.r) == ENFIX_EXIT_NOT_CONVERGED);
        Result chk;
        REQUIRE(enfix_check(prob.p, &opt, &chk.r) == ENFIX_OK);
        CHECK(enfix_result_exit_code(chk.r) == ENFIX_EXIT_CHECK_FAILED);
    }
}

TEST_CASE("c api: errors set a status and a message") {
    enfix_problem* p = nullptr;
    CHECK(enfix_problem_load_string("[space]\ndimension = 1\nnorm = 3\n", "bad.toml", &p) == ENFIX_E_PARSE);
    CHECK(p == nullptr);
    CHECK(std::string(enfix_last_error()).find("bad.toml:3") != std::string::npos);
    const auto err = nlohmann::json::parse(enfix_error_json(ENFIX_E_PARSE));
    CHECK(err["error"]["code"] == "parse-error");

    CHECK(enfix_problem_load_file("/nonexistent.toml", &p) == ENFIX_E_IO);
    CHECK(enfix_problem_load_string(nullptr, nullptr, &p) == ENFIX_E_INVALID_ARGUMENT);
    CHECK(enfix_problem_load_string("", nullptr, nullptr) == ENFIX_E_INVALID_ARGUMENT);
    CHECK(enfix_solve(nullptr, nullptr, nullptr) == ENFIX_E_INVALID_ARGUMENT);
    CHECK(std::string(enfix_status_name(ENFIX_E_NOT_CERTIFIABLE)) == "not-certifiable");
    CHECK(std::string(enfix_version()).size() > 0);
    enfix_problem_free(nullptr);
    enfix_result_free(nullptr);
}

TEST_CASE("c api: option validation") {
    Loaded prob;
    REQUIRE(enfix_problem_load_file(enfix::testing::corpus_path("halving.toml").c_str(), &prob.p) == ENFIX_OK);
    enfix_options opt;
    enfix_options_init(&opt);
    opt.has_tol = 1;
    opt.tol = -1.0;
    enfix_result* r = nullptr;
    CHECK(enfix_solve(prob.p, &opt, &r) == ENFIX_E_INVALID_ARGUMENT);
    CHECK(r == nullptr);

    enfix_options_init(&opt);
    opt.has_lambda_override = 1;
    opt.lambda_override = 0.5;
    Result res;
    REQUIRE(enfix_solve(prob.p, &opt, &res.r) == ENFIX_OK);
    const auto doc = nlohmann::json::parse(enfix_result_json(res.r));
    CHECK(doc["solve"]["bounds_enabled"] == false);
    CHECK(doc["solve"]["lambda"] == 0.5);
}

TEST_CASE("c api: bench isolates a broken file") {
    enfix_options opt;
    enfix_options_init(&opt);
    Result res;
    REQUIRE(enfix_bench_file("/nonexistent.toml", &opt, &res.r) == ENFIX_OK);
    CHECK(enfix_result_exit_code(res.r) != ENFIX_EXIT_OK);
    const auto doc = nlohmann::json::parse(enfix_result_json(res.r));
    CHECK(doc["passed"] == false);

    Result good;
    REQUIRE(enfix_bench_file(enfix::testing::corpus_path("halving.toml").c_str(), &opt, &good.r) == ENFIX_OK);
    CHECK(enfix_result_exit_code(good.r) == ENFIX_EXIT_OK);
}
