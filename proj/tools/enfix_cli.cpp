// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors
//
// enfix: command-line front end to the enfix C library.
//
//   enfix solve    PROBLEM  [--tol T] [--max-iter N] [--trace-out F] ...
//   enfix estimate PROBLEM  [--pairs N] [--seed S] [--b-max B] [--b-step H] [--grid-out F]
//   enfix check    PROBLEM  [--pairs N] [--seed S]
//   enfix bench    DIR      [--jobs J] [--out F]

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "enfix/enfix.h"

namespace fs = std::filesystem;

namespace {

struct ProblemDeleter {
    void operator()(enfix_problem* p) const { enfix_problem_free(p); }
};
struct ResultDeleter {
    void operator()(enfix_result* r) const { enfix_result_free(r); }
};
using ProblemHandle = std::unique_ptr<enfix_problem, ProblemDeleter>;
using ResultHandle = std::unique_ptr<enfix_result, ResultDeleter>;

struct Flags {
    std::optional<double> tol;
    std::optional<std::uint64_t> max_iter;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> pairs;
    std::optional<double> b_max;
    std::optional<double> b_step;
    std::optional<double> lambda_override;
    bool timing = false;
    std::string out;
    std::string trace_out;
    std::string grid_out;
    unsigned jobs = 0;

    enfix_options options() const {
        enfix_options o;
        enfix_options_init(&o);
        if (tol) { o.has_tol = 1; o.tol = *tol; }
        if (max_iter) { o.has_max_iter = 1; o.max_iter = *max_iter; }
        if (seed) { o.has_seed = 1; o.seed = *seed; }
        if (pairs) { o.has_pairs = 1; o.pairs = *pairs; }
        if (b_max) { o.has_b_max = 1; o.b_max = *b_max; }
        if (b_step) { o.has_b_step = 1; o.b_step = *b_step; }
        if (lambda_override) { o.has_lambda_override = 1; o.lambda_override = *lambda_override; }
        o.include_timing = timing ? 1 : 0;
        return o;
    }
};

int fail(const std::string& code, const std::string& message) {
    std::cerr << nlohmann::json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
    return ENFIX_EXIT_USAGE;
}

int fail_status(enfix_status status) {
    std::cerr << enfix_error_json(status) << '\n';
    return ENFIX_EXIT_USAGE;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

// Writes `content` to `path`, or stdout when path is empty.
int emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return ENFIX_EXIT_OK;
    }
    if (!write_file(path, content)) return fail("io-error", "cannot write '" + path + "'");
    return ENFIX_EXIT_OK;
}

using Command = enfix_status (*)(const enfix_problem*, const enfix_options*, enfix_result**);

int run_problem_command(Command command, const std::string& problem_path, const Flags& flags) {
    enfix_problem* raw = nullptr;
    if (auto st = enfix_problem_load_file(problem_path.c_str(), &raw); st != ENFIX_OK) return fail_status(st);
    ProblemHandle problem(raw);

    const enfix_options opts = flags.options();
    enfix_result* rraw = nullptr;
    if (auto st = command(problem.get(), &opts, &rraw); st != ENFIX_OK) return fail_status(st);
    ResultHandle result(rraw);

    if (int rc = emit(flags.out, enfix_result_json(result.get())); rc != ENFIX_EXIT_OK) return rc;
    if (!flags.trace_out.empty() && !write_file(flags.trace_out, enfix_result_trace_csv(result.get())))
        return fail("io-error", "cannot write '" + flags.trace_out + "'");
    if (!flags.grid_out.empty() && !write_file(flags.grid_out, enfix_result_grid_csv(result.get())))
        return fail("io-error", "cannot write '" + flags.grid_out + "'");
    return enfix_result_exit_code(result.get());
}

std::string cell(const nlohmann::json& j, const char* key, int precision = 6) {
    if (!j.contains(key) || j[key].is_null()) return "-";
    const auto& v = j[key];
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os << std::setprecision(precision) << v.get<double>();
        return os.str();
    }
    return v.dump();
}

int run_bench(const std::string& dir, const Flags& flags) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return fail("usage", "corpus directory '" + dir + "' does not exist");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".toml") files.push_back(entry.path().string());
    if (files.empty()) return fail("usage", "corpus directory '" + dir + "' contains no .toml problem files");
    std::sort(files.begin(), files.end());

    const enfix_options opts = flags.options();
    const unsigned jobs = flags.jobs ? flags.jobs : std::max(1u, std::thread::hardware_concurrency());

    auto run_one = [&opts](const std::string& path) -> nlohmann::json {
        enfix_result* raw = nullptr;
        if (auto st = enfix_bench_file(path.c_str(), &opts, &raw); st != ENFIX_OK) {
            return {{"name", fs::path(path).filename().string()},
                    {"path", path},
                    {"passed", false},
                    {"failures", {enfix_last_error()}},
                    {"summary", {{"problem", fs::path(path).filename().string()}, {"status", "error"}}},
                    {"report", nullptr}};
        }
        ResultHandle result(raw);
        return nlohmann::json::parse(enfix_result_json(result.get()));
    };

    // ordered merge: rows[i] always belongs to files[i]
    std::vector<nlohmann::json> rows(files.size());
    for (std::size_t start = 0; start < files.size(); start += jobs) {
        std::vector<std::future<nlohmann::json>> batch;
        const std::size_t end = std::min(files.size(), start + jobs);
        for (std::size_t i = start; i < end; ++i) batch.push_back(std::async(std::launch::async, run_one, files[i]));
        for (std::size_t i = start; i < end; ++i) rows[i] = batch[i - start].get();
    }

    std::size_t failed = 0;
    std::size_t name_width = 8;
    for (const auto& row : rows) name_width = std::max(name_width, cell(row["summary"], "problem").size() + 2);
    std::ostringstream table;
    table << std::left << std::setw(int(name_width)) << "problem" << std::setw(10) << "b" << std::setw(12) << "theta"
          << std::setw(12) << "c" << std::setw(8) << "iters" << std::setw(22) << "termination"
          << std::setw(14) << "final_error" << std::setw(8) << "bounds" << "status\n";
    for (const auto& row : rows) {
        const auto& s = row["summary"];
        table << std::left << std::setw(int(name_width)) << cell(s, "problem") << std::setw(10) << cell(s, "b", 4)
              << std::setw(12) << cell(s, "theta", 6) << std::setw(12) << cell(s, "c", 6) << std::setw(8)
              << cell(s, "iterations") << std::setw(22) << cell(s, "termination") << std::setw(14)
              << cell(s, "final_error", 3) << std::setw(8) << cell(s, "bounds_held") << cell(s, "status") << '\n';
        if (!row["passed"].get<bool>()) {
            ++failed;
            for (const auto& f : row["failures"]) table << "    - " << f.get<std::string>() << '\n';
        }
    }
    table << rows.size() - failed << " passed, " << failed << " failed\n";
    std::cout << table.str();

    if (!flags.out.empty()) {
        nlohmann::json doc{{"version", enfix_version()},
                           {"command", "bench"},
                           {"corpus", dir},
                           {"passed", rows.size() - failed},
                           {"failed", failed},
                           {"problems", rows}};
        if (!write_file(flags.out, doc.dump(2) + "\n")) return fail("io-error", "cannot write '" + flags.out + "'");
    }
    return failed == 0 ? ENFIX_EXIT_OK : ENFIX_EXIT_NOT_CONVERGED;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"enfix: certified fixed points of enriched contractions"};
    app.set_version_flag("--version", std::string(enfix_version()));
    app.require_subcommand(1);

    Flags flags;
    std::string target;

    auto add_sampling = [&](CLI::App* sub) {
        sub->add_option("--seed", flags.seed, "Seed for every sampled quantity (default 42)");
        sub->add_option("--pairs", flags.pairs, "Sample pairs for certificate estimation/checking")
            ->check(CLI::PositiveNumber);
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--b-max", flags.b_max, "Largest b on the search grid (default 10)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--b-step", flags.b_step, "Grid spacing in b (default 0.05)")->check(CLI::PositiveNumber);
        sub->add_option("--grid-out", flags.grid_out, "Write the c(b) grid as CSV");
    };

    auto* solve = app.add_subcommand("solve", "Find the fixed point of a problem file");
    solve->add_option("problem", target, "Problem file")->required();
    solve->add_option("--tol", flags.tol, "Guaranteed bound on ||x_n - p||")->check(CLI::PositiveNumber);
    solve->add_option("--max-iter", flags.max_iter, "Iteration budget")->check(CLI::PositiveNumber);
    solve->add_option("--lambda-override", flags.lambda_override,
                      "Expert: force the averaging weight in (0,1]; disables error bounds");
    solve->add_option("--out", flags.out, "Write the JSON report here instead of stdout");
    solve->add_option("--trace-out", flags.trace_out, "Write the iteration trace as CSV");
    solve->add_flag("--timing", flags.timing, "Include wall-clock timing in the report");
    add_sampling(solve);
    add_grid(solve);

    auto* est = app.add_subcommand("estimate", "Estimate an enrichment certificate by sampling");
    est->add_option("problem", target, "Problem file")->required();
    est->add_option("--out", flags.out, "Write the JSON report here instead of stdout");
    est->add_flag("--timing", flags.timing, "Include wall-clock timing in the report");
    add_sampling(est);
    add_grid(est);

    auto* check = app.add_subcommand("check", "Test a declared certificate on sampled pairs");
    check->add_option("problem", target, "Problem file")->required();
    check->add_option("--out", flags.out, "Write the JSON report here instead of stdout");
    add_sampling(check);

    auto* bench = app.add_subcommand("bench", "Run every problem in a corpus directory");
    bench->add_option("corpus", target, "Directory of .toml problem files")->required();
    bench->add_option("--out", flags.out, "Write all per-problem reports as one JSON document");
    bench->add_option("--jobs", flags.jobs, "Problems run concurrently (default: hardware threads)");
    bench->add_option("--tol", flags.tol, "Override every problem's tolerance")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fail("usage", e.what());
    }

    if (flags.lambda_override && !(*flags.lambda_override > 0.0 && *flags.lambda_override <= 1.0))
        return fail("usage", "--lambda-override must lie in (0, 1]");

    if (solve->parsed()) return run_problem_command(enfix_solve, target, flags);
    if (est->parsed()) return run_problem_command(enfix_estimate, target, flags);
    if (check->parsed()) return run_problem_command(enfix_check, target, flags);
    return run_bench(target, flags);
}
