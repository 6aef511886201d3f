// lindblad_oracle.hpp — Brute-force master-equation steady state in a truncated Fock space
//
// Independent of the manifold machinery: operators are Kronecker products of local
// matrices, the drive enters the Hamiltonian at finite amplitude Ω, and losses enter
// as Lindblad dissipators γ D[c]. The steady state is the trace-one kernel vector of
// the vectorized generator, solved densely.

#pragma once

#include <vector>

#include "nhpb/fock_basis.hpp"
#include "nhpb/nh_hamiltonian.hpp"

namespace nhpb {

struct TruncationSpec {
    std::vector<int> n_max;      // per bosonic mode, each >= 2; the emitter is always two-level
    double drive_amplitude{0.0}; // Ω in units of the reference rate
};

// Default truncation: n_max = 4 per mode (hybrid), (3, 4) for (a, b) (quadratic),
// Ω = 10⁻² × the smallest positive decay rate.
TruncationSpec default_truncation(const ModelParams& params);
double default_drive_amplitude(const ModelParams& params);

// Product space emitter ⊗ mode_0 ⊗ mode_1 (emitter factor only when present).
struct FullSpace {
    ModeLayout layout;
    std::vector<int> n_max;
    std::vector<int> factor_dims;
    std::vector<int> excitation; // weighted excitation of each basis state

    std::size_t dimension() const noexcept { return excitation.size(); }
    ComplexMatrix lowering(const Port& port) const;
    ComplexMatrix weighted_number() const;
};

FullSpace make_full_space(const ModelParams& params, const std::vector<int>& n_max);

// Laser-free non-Hermitian H_0 on the full truncated space (detunings only).
ComplexMatrix full_space_nh_hamiltonian(const ModelParams& params, const FullSpace& space);

struct Liouvillian {
    FullSpace space;
    ComplexMatrix generator; // acts on column-major vec(ρ)
    double drive_amplitude{0.0};
    double narrowest_rate{0.0};
};

inline constexpr std::size_t kMaxSuperoperatorRows = 10000;

// Throws Error(dimension_limit) beyond kMaxSuperoperatorRows.
Liouvillian build_liouvillian(const ModelParams& params, const DriveSpec& drive, const TruncationSpec& trunc);

struct DensityOperator {
    FullSpace space;
    ComplexMatrix rho;
    double hermiticity_deviation{0.0}; // ‖ρ - ρ†‖ before symmetrization
    double trace_deviation{0.0};
    double min_eigenvalue{0.0};
    double residual{0.0}; // ‖L vec(ρ)‖
};

// Throws Error(non_unique_steady_state) when the kernel is not one-dimensional.
DensityOperator steady_state(const Liouvillian& liouvillian);

struct OracleCorrelations {
    double intensity{0.0}; // <c†c>, absolute (not divided by Ω²)
    double g2{0.0};
    double g3{0.0};
};

// Throws Error(zero_intensity) when <c†c> vanishes.
OracleCorrelations oracle_correlations(const DensityOperator& rho, const DriveSpec& drive);

// Convenience: build, solve, measure.
OracleCorrelations run_oracle(const ModelParams& params, const DriveSpec& drive, const TruncationSpec& trunc);

struct ConvergenceReport {
    std::vector<std::vector<int>> truncations;
    std::vector<OracleCorrelations> results;
    std::vector<double> relative_differences; // successive |Δg2| / g2
    bool converged{false};
    double drive_sensitivity{0.0}; // |g2(Ω) - g2(Ω/2)| / g2(Ω/2) at the last truncation
    bool non_perturbative{false};
};

struct ConvergenceOptions {
    double truncation_bound{1e-3};
    double drive_bound{1e-2};
};

ConvergenceReport convergence_check(const ModelParams& params, const DriveSpec& drive,
                                    const std::vector<TruncationSpec>& truncations,
                                    const ConvergenceOptions& options = {});

} // namespace nhpb
