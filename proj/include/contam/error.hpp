#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace contam {

enum class ErrorCode {
    invalid_argument,
    unsupported_point,
    incomparable_support,
    unsupported_family,
    invalid_ordering,
    singular_system,
    infeasible_params,
    degenerate_region,
    empty_region,
    unbounded_region,
    no_valid_threshold,
    config,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every recoverable failure in the library is reported through this type; the
// code lets callers (and the CLI exit path) distinguish the failure classes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace contam
