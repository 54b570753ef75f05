// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#ifndef ENFIX_CORE_ERROR_HPP_
#define ENFIX_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace enfix {

enum class ErrorCode {
    invalid_argument,
    parse,
    dimension_mismatch,
    non_finite,
    inadmissible_certificate,
    not_certifiable,
    degenerate_plan,
    non_convergence,
    io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the core carries one of the codes above; the C
/// layer maps them onto enfix_status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace enfix

#endif  // ENFIX_CORE_ERROR_HPP_
