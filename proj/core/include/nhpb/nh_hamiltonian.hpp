// nh_hamiltonian.hpp — Model parameters and manifold-restricted non-Hermitian Hamiltonians
//
// Two models are supported:
//   quadratic: H = w̃_a a†a + w̃_b b†b + g (a† b² + b†² a), modes (a, b) with weights (2, 1)
//   hybrid:    H = w̃_e σ+σ- + Σ_n [w̃_n a_n†a_n + g_n (σ+ a_n + a_n† σ-)] + d (a1†a2 + a2†a1)
// with w̃ = w - iγ/2. Frequencies are stored as detunings from an origin (mode b for the
// quadratic model, mode 1 for the hybrid model), so only detunings enter the matrices.
// All rates are in units of the broad decay rate (γ_a resp. γ_2), which defaults to 1.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nhpb/fock_basis.hpp"

namespace nhpb {

struct QuadraticParams {
    double gamma_a{1.0};
    double gamma_b{1e-3};
    double g{0.1};
    double delta_a{0.0}; // detuning of a from two-photon resonance 2ω_b

    void validate() const;
};

struct HybridParams {
    double gamma_e{1e-5};
    double gamma_1{1e-3}; // narrow (Fabry-Pérot) mode
    double gamma_2{1.0};  // broad (plasmonic) mode
    double g_1{0.0};
    double g_2{1.0 / 15.0};
    double d{0.1};
    double delta_e{0.0}; // ω_e - ω_1
    double delta_2{0.0}; // ω_2 - ω_1

    void validate() const;
};

using ModelParams = std::variant<QuadraticParams, HybridParams>;

std::string_view model_name(const ModelParams& params) noexcept;
ModeLayout layout_of(const ModelParams& params);
void validate(const ModelParams& params);

// Named parameter access used by scan axes ("gamma_1", "d", "g", ...).
std::vector<std::string> parameter_names(const ModelParams& params);
bool has_parameter(const ModelParams& params, std::string_view name);
double get_parameter(const ModelParams& params, std::string_view name);
void set_parameter(ModelParams& params, std::string_view name, double value);

// Multiplies every rate, coupling and detuning by lambda.
ModelParams scaled(const ModelParams& params, double lambda);

// Smallest decay rate among those present (γ_e, γ_1, γ_2 or γ_a, γ_b).
double narrowest_rate(const ModelParams& params);

// A drive or detection port: a bosonic mode or the emitter.
struct Port {
    enum class Kind { mode, emitter };
    Kind kind{Kind::mode};
    int mode{0};

    static Port mode_port(int k) { return Port{Kind::mode, k}; }
    static Port emitter_port() { return Port{Kind::emitter, 0}; }

    OperatorSpec lowering() const;
    OperatorSpec raising() const { return lowering().adjoint(); }

    bool operator==(const Port&) const = default;
};

// Port names: quadratic "a", "b"; hybrid "emitter", "a1", "a2".
Port parse_port(const ModelParams& params, std::string_view name);
std::string port_name(const ModelParams& params, const Port& port);

struct DriveSpec {
    Port pump;
    Port detect;
    // Axis variable Δω_L = ω_origin - ω_L, the convention of the plotted maps.
    double omega_L_detuning{0.0};

    // Laser frequency measured from the origin, ω_L - ω_origin. This is the one
    // place where the axis sign convention is converted.
    double laser_offset() const noexcept { return -omega_L_detuning; }
};

// Pump and detect mode b (quadratic) or mode a1 (hybrid).
DriveSpec default_drive(const ModelParams& params, double omega_L_detuning = 0.0);

// H restricted to the q-excitation manifold on the canonical basis.
ComplexMatrix build_manifold_hamiltonian(const ModelParams& params, const ManifoldBasis& basis);
ComplexMatrix build_manifold_hamiltonian(const ModelParams& params, int q);

// H_q - q * laser_offset * 1, i.e. ΔH = H - ω_L N on the manifold.
ComplexMatrix detuned_hamiltonian(const ComplexMatrix& h_q, int q, double laser_offset);

// The first- and second-manifold hybrid matrices written out entry by entry, with
// detunings on the diagonal. Independent of build_manifold_hamiltonian.
std::pair<ComplexMatrix, ComplexMatrix> reference_matrices_hybrid(const HybridParams& p);

} // namespace nhpb
