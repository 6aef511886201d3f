#include "nhpb/scan_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json_support.hpp"
#include "nhpb/errors.hpp"

namespace nhpb {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::config_error, field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        fail(where, "expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) {
            if (key == a) ok = true;
        }
        if (!ok) {
            fail(where.empty() ? key : where + "." + key, "unknown key");
        }
    }
}

double number_at(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        fail(path, "expected a number");
    }
    return v.get<double>();
}

int integer_at(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return v.get<int>();
}

std::string string_at(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_string()) {
        fail(path, "expected a string");
    }
    return v.get<std::string>();
}

bool bool_at(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_boolean()) {
        fail(path, "expected true or false");
    }
    return v.get<bool>();
}

} // namespace

std::vector<double> ScanAxis::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(steps - 1);
        if (linear) {
            out.push_back(k == steps - 1 ? to : from + (to - from) * t);
        } else {
            out.push_back(k == steps - 1 ? to : from * std::pow(to / from, t));
        }
    }
    return out;
}

std::string_view to_string(Output o) noexcept {
    switch (o) {
    case Output::intensity: return "I";
    case Output::g2: return "g2";
    case Output::g3: return "g3";
    case Output::eigs: return "eigs";
    case Output::components: return "components";
    case Output::two_state: return "two_state";
    case Output::tampered: return "tampered";
    case Output::analytic: return "analytic";
    }
    return "?";
}

std::optional<Output> parse_output(std::string_view s) noexcept {
    for (Output o : {Output::intensity, Output::g2, Output::g3, Output::eigs, Output::components, Output::two_state,
                     Output::tampered, Output::analytic}) {
        if (s == to_string(o)) return o;
    }
    return std::nullopt;
}

void validate_config(const ScanConfig& c) {
    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos) {
        fail("name", "must be a non-empty file stem without path separators");
    }
    try {
        validate(c.params);
    } catch (const Error& e) {
        fail("params", e.what());
    }
    if (!std::isfinite(c.drive.omega_L_detuning)) {
        fail("drive.omega_l_detuning", "must be finite");
    }
    if (c.axes.size() > 2) {
        fail("axes", "at most two scan axes are supported");
    }
    for (std::size_t k = 0; k < c.axes.size(); ++k) {
        const auto& a = c.axes[k];
        const std::string where = "axes[" + std::to_string(k) + "]";
        if (a.parameter != kDetuningAxis && !has_parameter(c.params, a.parameter)) {
            fail(where + ".parameter", "'" + a.parameter + "' is not a parameter of model " +
                                           std::string(model_name(c.params)));
        }
        if (a.steps < 2) fail(where + ".steps", "must be >= 2");
        if (!std::isfinite(a.from) || !std::isfinite(a.to) || !(a.from < a.to)) {
            fail(where, "requires finite from < to");
        }
        if (!a.linear && !(a.from > 0.0)) fail(where + ".from", "logarithmic axes need from > 0");
        for (std::size_t j = 0; j < k; ++j) {
            if (c.axes[j].parameter == a.parameter) fail(where + ".parameter", "duplicate axis");
        }
    }
    for (std::size_t k = 0; k < c.ties.size(); ++k) {
        const auto& t = c.ties[k];
        const std::string where = "ties[" + std::to_string(k) + "]";
        if (!has_parameter(c.params, t.target)) fail(where + ".target", "unknown parameter '" + t.target + "'");
        if (!has_parameter(c.params, t.source)) fail(where + ".source", "unknown parameter '" + t.source + "'");
        if (!std::isfinite(t.scale)) fail(where + ".scale", "must be finite");
        for (const auto& a : c.axes) {
            if (a.parameter == t.target) fail(where + ".target", "tied parameter is also a scan axis");
        }
    }
    if (!(c.accessibility_threshold >= 0.0 && c.accessibility_threshold < 1.0)) {
        fail("accessibility_threshold", "must lie in [0, 1)");
    }
    if (c.oracle.omega && !(*c.oracle.omega > 0.0)) fail("oracle.omega", "must be > 0");
    if (c.oracle.n_max) {
        if (c.oracle.n_max->size() != layout_of(c.params).mode_count()) {
            fail("oracle.n_max", "needs one entry per bosonic mode");
        }
        for (int n : *c.oracle.n_max) {
            if (n < 2) fail("oracle.n_max", "entries must be >= 2");
        }
    }
    if (c.threshold_line && !std::holds_alternative<HybridParams>(c.params)) {
        fail("threshold_line", "only defined for the hybrid model");
    }
}

ScanConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::config_error, std::string("malformed JSON: ") + e.what());
    }
    reject_unknown(doc, "", {"name", "model", "params", "drive", "axes", "outputs", "oracle",
                             "accessibility_threshold", "ties", "threshold_line"});

    ScanConfig c;
    if (doc.contains("name")) c.name = string_at(doc, "name", "name");
    if (!doc.contains("model")) fail("model", "missing (\"hybrid\" or \"quadratic\")");
    const std::string model = string_at(doc, "model", "model");
    if (model == "hybrid") {
        c.params = HybridParams{};
    } else if (model == "quadratic") {
        c.params = QuadraticParams{};
    } else {
        fail("model", "must be \"hybrid\" or \"quadratic\", got \"" + model + "\"");
    }

    if (doc.contains("params")) {
        const auto& p = doc.at("params");
        if (!p.is_object()) fail("params", "expected an object");
        for (const auto& [key, value] : p.items()) {
            if (!has_parameter(c.params, key)) fail("params." + key, "unknown key for model " + model);
            if (!value.is_number()) fail("params." + key, "expected a number");
            set_parameter(c.params, key, value.get<double>());
        }
    }

    c.drive = default_drive(c.params);
    if (doc.contains("drive")) {
        const auto& d = doc.at("drive");
        reject_unknown(d, "drive", {"pump_target", "detect_target", "omega_l_detuning"});
        try {
            if (d.contains("pump_target")) c.drive.pump = parse_port(c.params, string_at(d, "pump_target", "drive.pump_target"));
            if (d.contains("detect_target"))
                c.drive.detect = parse_port(c.params, string_at(d, "detect_target", "drive.detect_target"));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::config_error) fail("drive", e.what());
            throw;
        }
        if (d.contains("omega_l_detuning")) {
            c.drive.omega_L_detuning = number_at(d, "omega_l_detuning", "drive.omega_l_detuning");
        }
    }

    if (doc.contains("axes")) {
        const auto& axes = doc.at("axes");
        if (!axes.is_array()) fail("axes", "expected an array");
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const auto& a = axes[k];
            const std::string where = "axes[" + std::to_string(k) + "]";
            reject_unknown(a, where, {"parameter", "from", "to", "steps", "linear"});
            for (const char* key : {"parameter", "from", "to", "steps"}) {
                if (!a.contains(key)) fail(where + "." + key, "missing");
            }
            ScanAxis axis;
            axis.parameter = string_at(a, "parameter", where + ".parameter");
            axis.from = number_at(a, "from", where + ".from");
            axis.to = number_at(a, "to", where + ".to");
            axis.steps = integer_at(a, "steps", where + ".steps");
            if (a.contains("linear")) axis.linear = bool_at(a, "linear", where + ".linear");
            c.axes.push_back(axis);
        }
    }

    if (doc.contains("outputs")) {
        const auto& outs = doc.at("outputs");
        if (!outs.is_array()) fail("outputs", "expected an array");
        c.outputs.clear();
        for (const auto& o : outs) {
            if (!o.is_string()) fail("outputs", "entries must be strings");
            auto parsed = parse_output(o.get<std::string>());
            if (!parsed) fail("outputs", "unknown output \"" + o.get<std::string>() + "\"");
            c.outputs.insert(*parsed);
        }
    }

    if (doc.contains("oracle")) {
        const auto& o = doc.at("oracle");
        reject_unknown(o, "oracle", {"enabled", "omega", "n_max"});
        if (o.contains("enabled")) c.oracle.enabled = bool_at(o, "enabled", "oracle.enabled");
        if (o.contains("omega")) c.oracle.omega = number_at(o, "omega", "oracle.omega");
        if (o.contains("n_max")) {
            const auto& n = o.at("n_max");
            if (!n.is_array()) fail("oracle.n_max", "expected an array of integers");
            std::vector<int> v;
            for (const auto& x : n) {
                if (!x.is_number_integer()) fail("oracle.n_max", "expected an array of integers");
                v.push_back(x.get<int>());
            }
            c.oracle.n_max = v;
        }
    }

    if (doc.contains("accessibility_threshold")) {
        c.accessibility_threshold = number_at(doc, "accessibility_threshold", "accessibility_threshold");
    }

    if (doc.contains("ties")) {
        const auto& ties = doc.at("ties");
        if (!ties.is_array()) fail("ties", "expected an array");
        for (std::size_t k = 0; k < ties.size(); ++k) {
            const auto& t = ties[k];
            const std::string where = "ties[" + std::to_string(k) + "]";
            reject_unknown(t, where, {"target", "source", "scale"});
            for (const char* key : {"target", "source", "scale"}) {
                if (!t.contains(key)) fail(where + "." + key, "missing");
            }
            c.ties.push_back({string_at(t, "target", where + ".target"), string_at(t, "source", where + ".source"),
                              number_at(t, "scale", where + ".scale")});
        }
    }

    if (doc.contains("threshold_line")) c.threshold_line = bool_at(doc, "threshold_line", "threshold_line");

    validate_config(c);
    return c;
}

ScanConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io_error, "cannot open config file " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace detail {

ordered_json config_json(const ScanConfig& c) {
    ordered_json j;
    j["name"] = c.name;
    j["model"] = std::string(model_name(c.params));
    ordered_json params = ordered_json::object();
    for (const auto& name : parameter_names(c.params)) {
        params[name] = get_parameter(c.params, name);
    }
    j["params"] = params;
    j["drive"] = {{"pump_target", port_name(c.params, c.drive.pump)},
                  {"detect_target", port_name(c.params, c.drive.detect)},
                  {"omega_l_detuning", c.drive.omega_L_detuning}};
    ordered_json axes = ordered_json::array();
    for (const auto& a : c.axes) {
        axes.push_back({{"parameter", a.parameter}, {"from", a.from}, {"to", a.to}, {"steps", a.steps}, {"linear", a.linear}});
    }
    j["axes"] = axes;
    ordered_json outs = ordered_json::array();
    for (Output o : c.outputs) outs.push_back(std::string(to_string(o)));
    j["outputs"] = outs;
    ordered_json oracle = {{"enabled", c.oracle.enabled}};
    if (c.oracle.omega) oracle["omega"] = *c.oracle.omega;
    if (c.oracle.n_max) oracle["n_max"] = *c.oracle.n_max;
    j["oracle"] = oracle;
    j["accessibility_threshold"] = c.accessibility_threshold;
    ordered_json ties = ordered_json::array();
    for (const auto& t : c.ties) ties.push_back({{"target", t.target}, {"source", t.source}, {"scale", t.scale}});
    j["ties"] = ties;
    j["threshold_line"] = c.threshold_line;
    return j;
}

} // namespace detail

std::string config_to_json(const ScanConfig& config, int indent) { return detail::config_json(config).dump(indent); }

} // namespace nhpb
