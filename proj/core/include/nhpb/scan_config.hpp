// scan_config.hpp — Sweep configuration and its JSON form
//
// A config is one JSON document with lower_snake_case keys:
//   {
//     "name": "fig3",
//     "model": "hybrid",
//     "params": {"gamma_e": 1e-5, "gamma_1": 1e-3, "g_2": 0.0667, "d": 0.1, ...},
//     "drive": {"pump_target": "a1", "detect_target": "a1", "omega_l_detuning": 0.0},
//     "axes": [{"parameter": "omega_l_detuning", "from": -1.5, "to": 1.5, "steps": 301, "linear": true}],
//     "outputs": ["I", "g2", "g3", "two_state", "tampered"],
//     "oracle": {"enabled": false, "omega": 1e-7, "n_max": [4, 4]},
//     "accessibility_threshold": 1e-6,
//     "ties": [{"target": "g_1", "source": "d", "scale": 0.011976}],
//     "threshold_line": false
//   }
// Unknown keys anywhere are rejected. Parameters left out keep the defaults of
// QuadraticParams / HybridParams.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nhpb/eigensolver.hpp"
#include "nhpb/nh_hamiltonian.hpp"

namespace nhpb {

inline constexpr std::string_view kDetuningAxis = "omega_l_detuning";

struct ScanAxis {
    std::string parameter; // a model parameter or "omega_l_detuning"
    double from{0.0};
    double to{1.0};
    int steps{2};
    bool linear{true}; // false: logarithmic spacing, needs from > 0

    std::vector<double> values() const;
};

enum class Output { intensity, g2, g3, eigs, components, two_state, tampered, analytic };

std::string_view to_string(Output o) noexcept;
std::optional<Output> parse_output(std::string_view s) noexcept;

struct OracleSettings {
    bool enabled{false};
    std::optional<double> omega;             // default: 10⁻² × narrowest rate
    std::optional<std::vector<int>> n_max;   // default: see default_truncation
};

// target = scale × source, applied after axis values are set.
struct ParameterTie {
    std::string target;
    std::string source;
    double scale{1.0};
};

struct ScanConfig {
    std::string name{"scan"};
    ModelParams params{HybridParams{}};
    DriveSpec drive{};
    std::vector<ScanAxis> axes;
    std::set<Output> outputs{Output::intensity, Output::g2};
    OracleSettings oracle;
    double accessibility_threshold{kDefaultAccessibilityThreshold};
    std::vector<ParameterTie> ties;
    bool threshold_line{false}; // adds the d_threshold column (hybrid)

    bool wants(Output o) const { return outputs.count(o) != 0; }
};

// Field-level checks; throws Error(config_error) naming the offending field.
void validate_config(const ScanConfig& config);

ScanConfig parse_config(std::string_view json_text);
ScanConfig load_config(const std::string& path);
std::string config_to_json(const ScanConfig& config, int indent = 2);

} // namespace nhpb
