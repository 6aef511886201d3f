#include "nhpb/errors.hpp"

namespace nhpb {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::excitation_mismatch: return "excitation_mismatch";
    case ErrorCode::not_symmetric: return "not_symmetric";
    case ErrorCode::exceptional_point: return "exceptional_point";
    case ErrorCode::no_accessible_state: return "no_accessible_state";
    case ErrorCode::singular_resolvent: return "singular_resolvent";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::dimension_limit: return "dimension_limit";
    case ErrorCode::non_unique_steady_state: return "non_unique_steady_state";
    case ErrorCode::zero_intensity: return "zero_intensity";
    case ErrorCode::config_error: return "config_error";
    case ErrorCode::unknown_preset: return "unknown_preset";
    case ErrorCode::unknown_case: return "unknown_case";
    case ErrorCode::io_error: return "io_error";
    }
    return "unknown";
}

} // namespace nhpb
