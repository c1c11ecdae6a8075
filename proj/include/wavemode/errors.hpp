#pragma once

#include <stdexcept>
#include <string>

namespace wavemode {

/// Raised for malformed input, bad arguments, or configuration problems.
/// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a computation cannot proceed numerically (rank collapse,
/// non-positive structure functions, ...). The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace wavemode
