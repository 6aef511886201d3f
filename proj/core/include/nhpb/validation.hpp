// validation.hpp — Named self-checks of the numerics against closed forms and the oracle

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nhpb {

struct Assertion {
    std::string name;
    double measured{0.0};
    std::string relation; // "<", "<=", ">=", "in", "=="
    double bound{0.0};
    double bound_high{0.0}; // upper end for "in"
    bool pass{false};

    std::string describe() const;
};

struct ValidationReport {
    std::string case_name;
    std::vector<Assertion> assertions;
    double seconds{0.0};

    bool passed() const;
};

// Case names in execution order.
std::vector<std::string> validation_cases();

// Throws Error(unknown_case). "all" is handled by run_all_validations.
ValidationReport run_validation(std::string_view case_name);
std::vector<ValidationReport> run_all_validations();

// fig3 preset point (hybrid figure parameters, d = 1/10, Δω_L = 0), frozen from an
// oracle-confirmed run.
inline constexpr double kFig3FrozenG2 = 3.505650597e-3;

} // namespace nhpb
