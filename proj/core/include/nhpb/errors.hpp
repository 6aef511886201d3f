// errors.hpp — Error codes and the single exception type thrown by nhpb

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nhpb {

enum class ErrorCode {
    excitation_mismatch,
    not_symmetric,
    exceptional_point,
    no_accessible_state,
    singular_resolvent,
    domain_error,
    dimension_limit,
    non_unique_steady_state,
    zero_intensity,
    config_error,
    unknown_preset,
    unknown_case,
    io_error,
};

// Stable snake_case name, also used as the reason code in dataset rows.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace nhpb
