// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mfusion {

// Values line up with the CLI exit codes and the C API status codes.
enum class ErrorKind {
    Io = 1,
    DimensionMismatch = 2,
    DegenerateInput = 3,
    InvalidConfig = 4,
    InvalidArgument = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace mfusion
