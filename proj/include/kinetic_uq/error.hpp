// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace kuq {

enum class ErrorCode {
    invalid_argument = 1,
    not_admissible = 2,
    solver = 3,
    io = 4,
    config = 5,
    internal = 6,
};

/// Base exception for the library. The code maps one-to-one onto the C API
/// status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace kuq
