#include "contam/error.hpp"

namespace contam {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::unsupported_point: return "unsupported-point";
    case ErrorCode::incomparable_support: return "incomparable-support";
    case ErrorCode::unsupported_family: return "unsupported-family";
    case ErrorCode::invalid_ordering: return "invalid-ordering";
    case ErrorCode::singular_system: return "singular-system";
    case ErrorCode::infeasible_params: return "infeasible-params";
    case ErrorCode::degenerate_region: return "degenerate-region";
    case ErrorCode::empty_region: return "empty-region";
    case ErrorCode::unbounded_region: return "unbounded-region";
    case ErrorCode::no_valid_threshold: return "no-valid-threshold";
    case ErrorCode::config: return "config";
    }
    return "unknown";
}

} // namespace contam
