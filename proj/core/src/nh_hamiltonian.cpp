#include "nhpb/nh_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhpb/errors.hpp"

namespace nhpb {

namespace {

constexpr cplx I{0.0, 1.0};

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(ErrorCode::domain_error, what);
    }
}

void require_rate(double v, const char* name) {
    require(std::isfinite(v) && v >= 0.0, std::string(name) + " must be a finite non-negative rate");
}

void require_coupling(double v, const char* name) {
    require(std::isfinite(v) && v >= 0.0, std::string(name) + " must be a finite non-negative coupling");
}

void require_finite(double v, const char* name) {
    require(std::isfinite(v), std::string(name) + " must be finite");
}

template <class P>
struct Field {
    const char* name;
    double P::*member;
};

constexpr Field<QuadraticParams> kQuadraticFields[] = {
    {"gamma_a", &QuadraticParams::gamma_a},
    {"gamma_b", &QuadraticParams::gamma_b},
    {"g", &QuadraticParams::g},
    {"delta_a", &QuadraticParams::delta_a},
};

constexpr Field<HybridParams> kHybridFields[] = {
    {"gamma_e", &HybridParams::gamma_e}, {"gamma_1", &HybridParams::gamma_1},
    {"gamma_2", &HybridParams::gamma_2}, {"g_1", &HybridParams::g_1},
    {"g_2", &HybridParams::g_2},         {"d", &HybridParams::d},
    {"delta_e", &HybridParams::delta_e}, {"delta_2", &HybridParams::delta_2},
};

template <class P, std::size_t N>
double P::*find_field(const Field<P> (&fields)[N], std::string_view name) {
    for (const auto& f : fields) {
        if (name == f.name) {
            return f.member;
        }
    }
    return nullptr;
}

} // namespace

void QuadraticParams::validate() const {
    require_rate(gamma_a, "gamma_a");
    require_rate(gamma_b, "gamma_b");
    require_coupling(g, "g");
    require_finite(delta_a, "delta_a");
}

void HybridParams::validate() const {
    require_rate(gamma_e, "gamma_e");
    require_rate(gamma_1, "gamma_1");
    require_rate(gamma_2, "gamma_2");
    require_coupling(g_1, "g_1");
    require_coupling(g_2, "g_2");
    require_coupling(d, "d");
    require_finite(delta_e, "delta_e");
    require_finite(delta_2, "delta_2");
}

std::string_view model_name(const ModelParams& params) noexcept {
    return std::holds_alternative<QuadraticParams>(params) ? "quadratic" : "hybrid";
}

ModeLayout layout_of(const ModelParams& params) {
    return std::holds_alternative<QuadraticParams>(params) ? ModeLayout::quadratic() : ModeLayout::hybrid();
}

void validate(const ModelParams& params) {
    std::visit([](const auto& p) { p.validate(); }, params);
}

std::vector<std::string> parameter_names(const ModelParams& params) {
    std::vector<std::string> names;
    if (std::holds_alternative<QuadraticParams>(params)) {
        for (const auto& f : kQuadraticFields) names.emplace_back(f.name);
    } else {
        for (const auto& f : kHybridFields) names.emplace_back(f.name);
    }
    return names;
}

bool has_parameter(const ModelParams& params, std::string_view name) {
    if (const auto* q = std::get_if<QuadraticParams>(&params)) {
        (void)q;
        return find_field(kQuadraticFields, name) != nullptr;
    }
    return find_field(kHybridFields, name) != nullptr;
}

double get_parameter(const ModelParams& params, std::string_view name) {
    if (const auto* q = std::get_if<QuadraticParams>(&params)) {
        if (auto m = find_field(kQuadraticFields, name)) return q->*m;
    } else if (const auto* h = std::get_if<HybridParams>(&params)) {
        if (auto m = find_field(kHybridFields, name)) return h->*m;
    }
    throw Error(ErrorCode::config_error,
                "unknown parameter '" + std::string(name) + "' for model " + std::string(model_name(params)));
}

void set_parameter(ModelParams& params, std::string_view name, double value) {
    if (auto* q = std::get_if<QuadraticParams>(&params)) {
        if (auto m = find_field(kQuadraticFields, name)) {
            q->*m = value;
            return;
        }
    } else if (auto* h = std::get_if<HybridParams>(&params)) {
        if (auto m = find_field(kHybridFields, name)) {
            h->*m = value;
            return;
        }
    }
    throw Error(ErrorCode::config_error,
                "unknown parameter '" + std::string(name) + "' for model " + std::string(model_name(params)));
}

ModelParams scaled(const ModelParams& params, double lambda) {
    ModelParams out = params;
    for (const auto& name : parameter_names(params)) {
        set_parameter(out, name, lambda * get_parameter(params, name));
    }
    return out;
}

double narrowest_rate(const ModelParams& params) {
    if (const auto* q = std::get_if<QuadraticParams>(&params)) {
        return std::min(q->gamma_a, q->gamma_b);
    }
    const auto& h = std::get<HybridParams>(params);
    return std::min({h.gamma_e, h.gamma_1, h.gamma_2});
}

OperatorSpec Port::lowering() const {
    return kind == Kind::emitter ? OperatorSpec::sigma_minus() : OperatorSpec::lower(mode);
}

Port parse_port(const ModelParams& params, std::string_view name) {
    if (std::holds_alternative<QuadraticParams>(params)) {
        if (name == "a") return Port::mode_port(0);
        if (name == "b") return Port::mode_port(1);
    } else {
        if (name == "emitter") return Port::emitter_port();
        if (name == "a1") return Port::mode_port(0);
        if (name == "a2") return Port::mode_port(1);
    }
    throw Error(ErrorCode::config_error,
                "unknown port '" + std::string(name) + "' for model " + std::string(model_name(params)));
}

std::string port_name(const ModelParams& params, const Port& port) {
    if (port.kind == Port::Kind::emitter) {
        return "emitter";
    }
    if (std::holds_alternative<QuadraticParams>(params)) {
        return port.mode == 0 ? "a" : "b";
    }
    return port.mode == 0 ? "a1" : "a2";
}

DriveSpec default_drive(const ModelParams& params, double omega_L_detuning) {
    const Port p = std::holds_alternative<QuadraticParams>(params) ? Port::mode_port(1) : Port::mode_port(0);
    return DriveSpec{p, p, omega_L_detuning};
}

namespace {

ComplexMatrix quadratic_block(const QuadraticParams& p, const ManifoldBasis& basis) {
    const auto a_num = operator_block(OperatorSpec::number(0), basis);
    const auto b_num = operator_block(OperatorSpec::number(1), basis);
    const auto coupling = OperatorSpec::raise(0) * OperatorSpec::lower(1) * OperatorSpec::lower(1);
    ComplexMatrix h = (p.delta_a - 0.5 * I * p.gamma_a) * a_num + (-0.5 * I * p.gamma_b) * b_num;
    h += p.g * (operator_block(coupling, basis) + operator_block(coupling.adjoint(), basis));
    return h;
}

ComplexMatrix hybrid_block(const HybridParams& p, const ManifoldBasis& basis) {
    const auto sp = OperatorSpec::sigma_plus();
    const auto sm = OperatorSpec::sigma_minus();
    ComplexMatrix h = (p.delta_e - 0.5 * I * p.gamma_e) * operator_block(OperatorSpec::sigma_z_projector(), basis);
    h += (-0.5 * I * p.gamma_1) * operator_block(OperatorSpec::number(0), basis);
    h += (p.delta_2 - 0.5 * I * p.gamma_2) * operator_block(OperatorSpec::number(1), basis);
    const double g[2] = {p.g_1, p.g_2};
    for (int n = 0; n < 2; ++n) {
        h += g[n] * (operator_block(sp * OperatorSpec::lower(n), basis) +
                     operator_block(OperatorSpec::raise(n) * sm, basis));
    }
    h += p.d * (operator_block(OperatorSpec::raise(0) * OperatorSpec::lower(1), basis) +
                operator_block(OperatorSpec::raise(1) * OperatorSpec::lower(0), basis));
    return h;
}

} // namespace

ComplexMatrix build_manifold_hamiltonian(const ModelParams& params, const ManifoldBasis& basis) {
    if (!(basis.layout == layout_of(params))) {
        throw Error(ErrorCode::domain_error, "basis layout does not match the model");
    }
    if (const auto* q = std::get_if<QuadraticParams>(&params)) {
        return quadratic_block(*q, basis);
    }
    return hybrid_block(std::get<HybridParams>(params), basis);
}

ComplexMatrix build_manifold_hamiltonian(const ModelParams& params, int q) {
    return build_manifold_hamiltonian(params, enumerate_manifold(layout_of(params), q));
}

ComplexMatrix detuned_hamiltonian(const ComplexMatrix& h_q, int q, double laser_offset) {
    ComplexMatrix out = h_q;
    out.diagonal().array() -= static_cast<double>(q) * laser_offset;
    return out;
}

std::pair<ComplexMatrix, ComplexMatrix> reference_matrices_hybrid(const HybridParams& p) {
    const double s2 = std::sqrt(2.0);
    const double g1 = p.g_1;
    const double g2 = p.g_2;
    const double d = p.d;
    const cplx we = p.delta_e - 0.5 * I * p.gamma_e;
    const cplx w1 = -0.5 * I * p.gamma_1;
    const cplx w2 = p.delta_2 - 0.5 * I * p.gamma_2;

    // Basis {σ+|0>, a1†|0>, a2†|0>}.
    ComplexMatrix h1(3, 3);
    h1 << we, g1, g2,
          g1, w1, d,
          g2, d,  w2;

    // Basis {σ+a1†, σ+a2†, a1†²/√2, a1†a2†, a2†²/√2}.
    ComplexMatrix h2(5, 5);
    h2 << we + w1, d,       s2 * g1,  g2,      0.0,
          d,       we + w2, 0.0,      g1,      s2 * g2,
          s2 * g1, 0.0,     2.0 * w1, s2 * d,  0.0,
          g2,      g1,      s2 * d,   w1 + w2, s2 * d,
          0.0,     s2 * g2, 0.0,      s2 * d,  2.0 * w2;
    return {h1, h2};
}

} // namespace nhpb
