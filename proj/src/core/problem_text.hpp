// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#ifndef ENFIX_CORE_PROBLEM_TEXT_HPP_
#define ENFIX_CORE_PROBLEM_TEXT_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "error.hpp"

namespace enfix::text {

// Reader for the small TOML subset used by problem files: [dotted.table]
// headers, `key = value` lines, '#' comments, and values that are numbers,
// "strings", booleans or (possibly nested, possibly multi-line) arrays.
// Every value remembers its line for error messages.

struct Value {
    struct Array {
        std::vector<Value> items;
    };
    std::variant<double, std::int64_t, bool, std::string, Array> data;
    std::size_t line = 0;

    bool is_number() const noexcept { return data.index() <= 1; }
    bool is_integer() const noexcept { return data.index() == 1; }
    bool is_string() const noexcept { return data.index() == 3; }
    bool is_bool() const noexcept { return data.index() == 2; }
    bool is_array() const noexcept { return data.index() == 4; }

    double number() const;
    const std::string& string() const { return std::get<std::string>(data); }
    const std::vector<Value>& array() const { return std::get<Array>(data).items; }
};

struct Table {
    std::size_t line = 0;  // header line; 0 for the implicit root table
    std::map<std::string, Value> entries;
};

struct Document {
    std::string origin;                    // file name used in messages
    std::map<std::string, Table> tables;   // keyed by dotted name
};

/// Throws Error(ErrorCode::parse) with "origin:line: message".
Document parse(std::string_view source, std::string origin);

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& message);

}  // namespace enfix::text

#endif  // ENFIX_CORE_PROBLEM_TEXT_HPP_
