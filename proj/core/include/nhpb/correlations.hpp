// correlations.hpp — Weak-drive photon statistics from manifold Hamiltonians
//
// In the weak-drive limit the steady state is the Born series
//   |Ψ> = Σ_q Ω^q c_q,   c_q = -(ΔH_q)^{-1} V↑ c_{q-1},   c_0 = |0>,
// where V↑ is the raising part of the pump operator and ΔH_q = H_q - q ω_L.
// Intensity and zero-delay correlations follow from the detected amplitudes
//   I = |<0|E+ c_1>|²,  G2 = |<0|E+E+ c_2>|²,  G3 = |<0|E+E+E+ c_3>|²
// with E+ the lowering operator of the detected port (unit proportionality).
// All quantities are per power of Ω: intensity_rel = I / |Ω|².

#pragma once

#include <optional>
#include <vector>

#include "nhpb/eigensolver.hpp"
#include "nhpb/fock_basis.hpp"
#include "nhpb/nh_hamiltonian.hpp"

namespace nhpb {

inline constexpr int kMaxManifold = 3;

struct BornCoefficients {
    std::vector<ManifoldBasis> bases;    // q = 0..q_max
    std::vector<ComplexVector> c;        // c[q] on bases[q]
    double omega_L_detuning{0.0};
    int q_max{0};
};

// Throws Error(singular_resolvent) when some ΔH_q is numerically singular.
BornCoefficients born_coefficients(const ModelParams& params, const DriveSpec& drive, int q_max);

// |<0|E+ c_1>|², the intensity per |Ω|².
double intensity(const BornCoefficients& bc, const DriveSpec& drive);
// |<0|(E+)^n c_n>|² for n <= q_max, the unnormalized G^(n) per |Ω|^(2n).
double detected_weight(const BornCoefficients& bc, const DriveSpec& drive, int n);

double intensity_full(const ModelParams& params, const DriveSpec& drive);
double g2_full(const ModelParams& params, const DriveSpec& drive);
double g3_full(const ModelParams& params, const DriveSpec& drive);

// One manifold resolved into eigenstates, with pump and detection blocks.
struct ManifoldSpectrum {
    ManifoldBasis basis;
    ComplexMatrix hamiltonian; // undetuned H_q
    Eigensystem eig;
    ComplexMatrix pump_up;     // V↑ block, manifold q-1 -> q (empty for q = 0)
    ComplexMatrix detect_down; // E+ block, manifold q -> q-1 (empty for q = 0)
};

// Eigenstate resolution of manifolds 0..q_max for one parameter set. The laser
// frequency only shifts eigenvalues, so one instance serves every Δω_L.
class SpectralModel {
public:
    SpectralModel(const ModelParams& params, const Port& pump, const Port& detect, int q_max,
                  double accessibility_threshold = kDefaultAccessibilityThreshold);

    int q_max() const noexcept { return q_max_; }
    const ManifoldSpectrum& manifold(int q) const { return manifolds_.at(static_cast<std::size_t>(q)); }
    const ModelParams& params() const noexcept { return params_; }

    // Narrowest pump-accessible state of manifold q >= 1, reached from the
    // previously selected state (the vacuum for q = 1).
    std::size_t narrowest(int q) const { return narrowest_.at(static_cast<std::size_t>(q)); }
    // c-product pump amplitudes (j|V|p_{q-1}) of every eigenstate in manifold q.
    const ComplexVector& access_amplitudes(int q) const { return access_.at(static_cast<std::size_t>(q)); }

    // Eigenstate sums for the detected weights |<0|(E+)^n ψ_n>|², n = 1..q_max,
    // evaluated as Σ_{m,n} conj(β_m) M_mn β_n with M_mn = <r_m|E-..E+..|r_n>.
    // The optional override replaces every eigenvalue of manifold q by override[q][j].
    std::vector<double> detected_weights(double laser_offset,
                                         const std::vector<std::vector<cplx>>* eigenvalue_override = nullptr) const;

    // Eigenvalues with Ẽ_j -> E_j - (i/2) q Γ_p1, Γ_p1 the width of the untampered p1.
    std::vector<std::vector<cplx>> tampered_eigenvalues() const;

private:
    ModelParams params_;
    int q_max_;
    std::vector<ManifoldSpectrum> manifolds_;
    std::vector<ComplexVector> access_;
    std::vector<std::size_t> narrowest_;
    std::vector<ComplexMatrix> gram_; // M for each q >= 1
};

struct CorrelationSet {
    double intensity_rel{0.0};
    double g2{0.0};
    std::optional<double> g3;
};

// Eigenstate-sum route to the same quantities as the Born amplitudes.
CorrelationSet spectral_correlations(const SpectralModel& model, double laser_offset);

// Literal two-state approximation with c-products:
//   |(Ẽ_p1 - ω_L)/(Ẽ_p2/2 - ω_L)|² · |(p2|V|p1)|²/(2|(p1|V|0>|²) · |(p2|E-E-E+E+|p2)|/(2|(p1|E-E+|p1)|²)
double g2_two_state(const SpectralModel& model, double laser_offset);
double g2_two_state(const ModelParams& params, const DriveSpec& drive);

// Eigenstate sums with every width replaced by q Γ_p1.
CorrelationSet tampered_correlations(const SpectralModel& model, double laser_offset);
CorrelationSet g2_tampered(const ModelParams& params, const DriveSpec& drive);

// Closed forms of the quadratic model at ω_L = ω_b, η = 4g²/(γ_a γ_b).
double cooperativity(const QuadraticParams& p);
double g2_quadratic_analytic(const QuadraticParams& p);      // 1/(1+η)²
double intensity_quadratic_analytic(const QuadraticParams& p); // 4/γ_b²
// 2 γ_b (1 + η); Error(domain_error) unless g < γ_a / (2√2).
double gamma_p2_weak_coupling(const QuadraticParams& p);

// Second-order hybrid estimate at ω_L = ω_e with η = 4d²/(γ_1 γ_2):
//   (1/η²) [g_2²/d² + 2 + 4 (g_2/γ_2)² (g_2²/d² - 1)]². Error(domain_error) at d = 0.
double cooperativity(const HybridParams& p);
double g2_hybrid_analytic(const HybridParams& p);

// Minimal d for antibunching: (γ_1/γ_2 (g_2⁴ + g_2² γ_2²/4))^{1/4}.
double nhpb_threshold_d(double g_2, double gamma_1, double gamma_2);

// Everything the scan needs at one (params, Δω_L) point.
struct PointOptions {
    bool g3{true};
    bool two_state{false};
    bool tampered{false};
    bool components{false};
    double accessibility_threshold{kDefaultAccessibilityThreshold};
};

struct CorrelationPoint {
    double omega_L_detuning{0.0};
    double intensity_rel{0.0};
    double g2{0.0};
    std::optional<double> g3;
    double gamma_p1{0.0};
    double gamma_p2{0.0};
    double energy_p1{0.0};
    double energy_p2{0.0};
    std::optional<double> n1_p1, n1_p2, n2_p1, n2_p2; // mode components (hybrid)
    std::optional<double> g2_two_state;
    std::optional<CorrelationSet> tampered;
    std::vector<double> widths_q1, widths_q2; // Γ_j of every eigenstate
};

CorrelationPoint evaluate_point(const ModelParams& params, const DriveSpec& drive, const PointOptions& options = {});

} // namespace nhpb
