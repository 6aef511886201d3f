// presets.hpp — Named sweep configurations for the published figures

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nhpb/scan_config.hpp"

namespace nhpb {

// Shared hybrid parameters of every figure: γ_1 = 1e-3, γ_e = 1e-5, g_1 = 0,
// g_2 = 1/15, zero detunings, d = 1/10 (all in units of γ_2 = 1).
HybridParams figure_base_params();

// The d/g_1 ratio used when g_1 follows d.
inline constexpr double kDipoleRatio = 83.5;

// "fig2", "fig3", "figS1" ... "figS5". Throws Error(unknown_preset).
ScanConfig figure_preset(std::string_view name);
std::vector<std::string> figure_names();

} // namespace nhpb
