#include "nhpb/presets.hpp"

#include "nhpb/errors.hpp"

namespace nhpb {

namespace {

ScanAxis detuning_axis() { return {std::string(kDetuningAxis), -1.5, 1.5, 301, true}; }
ScanAxis d_axis() { return {"d", 0.0, 0.2, 201, true}; }

ScanConfig base(std::string_view name) {
    ScanConfig c;
    c.name = std::string(name);
    c.params = figure_base_params();
    c.drive = default_drive(c.params);
    return c;
}

} // namespace

HybridParams figure_base_params() {
    HybridParams p;
    p.gamma_e = 1e-5;
    p.gamma_1 = 1e-3;
    p.gamma_2 = 1.0;
    p.g_1 = 0.0;
    p.g_2 = 1.0 / 15.0;
    p.d = 0.1;
    p.delta_e = 0.0;
    p.delta_2 = 0.0;
    return p;
}

std::vector<std::string> figure_names() { return {"fig2", "fig3", "figS1", "figS2", "figS3", "figS4", "figS5"}; }

ScanConfig figure_preset(std::string_view name) {
    ScanConfig c = base(name);
    if (name == "fig2") {
        c.axes = {detuning_axis(), d_axis()};
        c.outputs = {Output::intensity, Output::g2, Output::eigs, Output::components};
    } else if (name == "fig3") {
        c.axes = {detuning_axis()};
        c.outputs = {Output::intensity, Output::g2, Output::g3, Output::two_state, Output::tampered};
    } else if (name == "figS1") {
        set_parameter(c.params, "d", 1.0 / 15.0);
        c.axes = {detuning_axis(), {"g_2", 0.0, 0.2, 201, true}};
        c.outputs = {Output::intensity, Output::g2, Output::components};
    } else if (name == "figS2") {
        c.axes = {{"g_2", 0.0, 0.2, 201, true}, d_axis()};
        c.outputs = {Output::g2};
        c.threshold_line = true;
    } else if (name == "figS3") {
        c.axes = {detuning_axis(), d_axis()};
        c.ties = {{"g_1", "d", 1.0 / kDipoleRatio}};
        c.outputs = {Output::intensity, Output::g2, Output::eigs};
    } else if (name == "figS4") {
        c.axes = {detuning_axis(), {"delta_2", -2.0, 2.0, 201, true}};
        c.outputs = {Output::g2, Output::eigs, Output::components};
    } else if (name == "figS5") {
        c.axes = {detuning_axis(), {"delta_e", -2.0, 2.0, 201, true}};
        c.outputs = {Output::intensity, Output::g2, Output::components};
    } else {
        throw Error(ErrorCode::unknown_preset, "no figure preset named '" + std::string(name) + "'");
    }
    validate_config(c);
    return c;
}

} // namespace nhpb
