// eigensolver.hpp — Complex-symmetric eigendecomposition with c-product normalization
//
// For a complex-symmetric H (H = Hᵀ) the left eigenvector belonging to Ẽ_j is the
// transpose of the right one, so the c-product (u|v) = uᵀv (no conjugation) is the
// natural pairing and the spectral resolution reads H = Σ_j Ẽ_j v_j v_jᵀ.

#pragma once

#include <cstddef>
#include <vector>

#include "nhpb/fock_basis.hpp"
#include "nhpb/nh_hamiltonian.hpp"

namespace nhpb {

struct Eigensystem {
    std::vector<cplx> eigenvalues; // Ẽ_j = E_j - (i/2) Γ_j, ascending in Γ_j
    ComplexMatrix vectors;         // column j is v_j with v_jᵀ v_j = 1

    std::size_t dimension() const noexcept { return eigenvalues.size(); }
    double width(std::size_t j) const { return -2.0 * eigenvalues[j].imag(); }
    double energy(std::size_t j) const { return eigenvalues[j].real(); }
    ComplexVector vector(std::size_t j) const { return vectors.col(static_cast<Eigen::Index>(j)); }
};

struct EigenOptions {
    double symmetry_tolerance{1e-12};         // relative; larger asymmetry is rejected
    double self_orthogonality_tolerance{1e-10}; // |vᵀv| below this (for ‖v‖ = 1) is an exceptional point
};

// Throws Error(not_symmetric) or Error(exceptional_point).
Eigensystem eigendecompose(const ComplexMatrix& h, const EigenOptions& options = {});

inline constexpr double kDefaultAccessibilityThreshold = 1e-6;

// Index of the narrowest state among those with
// |access[j]| > threshold * max_k |access[k]|. Ties in Γ go to the larger access
// amplitude, then the lower index. Throws Error(no_accessible_state).
std::size_t narrowest_accessible(const Eigensystem& es, const ComplexVector& access,
                                 double threshold = kDefaultAccessibilityThreshold);

// |v_jᵀ N v_j| for a number operator N on the same manifold basis.
double mode_component(const Eigensystem& es, std::size_t j, const ComplexMatrix& number_block);

// First-order analysis of the narrow first-manifold state of the hybrid model
// around γ_e = γ_1 = g_1 = 0, where it is ∝ (-d, g_2, 0).
struct ConditionReport {
    double lhs_1{0.0}; // |γ_1 - γ_e| / 4
    double rhs_1{0.0}; // 2 (g_2² + d²) / γ_2
    double lhs_2{0.0}; // g_1 |d² - g_2²|
    double rhs_2{0.0}; // 2 (g_2² + d²)² / γ_2
    cplx a_plus;
    cplx a_minus;
    double correction_norm{0.0};
};

// c-normalized (-d, g_2, 0) on the basis {σ+, a1†, a2†}.
ComplexVector p1_zeroth_order(const HybridParams& p);
// The first-order correction vector (in g_1, γ_1, γ_e) to p1_zeroth_order.
ComplexVector p1_first_order_correction(const HybridParams& p);
// Requires g_2 or d nonzero.
ConditionReport p1_perturbation_diagnostics(const HybridParams& p);

} // namespace nhpb
