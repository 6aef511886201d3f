// fock_basis.hpp — Excitation manifolds of a truncated Fock space and operator blocks between them
//
// A layout is an optional two-level emitter plus a handful of bosonic modes. Each
// mode quantum contributes `weight` to the excitation number q, the emitter
// contributes 1. Since the effective Hamiltonians commute with the weighted number
// operator, everything downstream works one manifold (fixed q) at a time.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nhpb {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct ModeLayout {
    bool emitter_present{false};
    std::vector<int> excitation_weights; // one entry per bosonic mode, each >= 1

    std::size_t mode_count() const noexcept { return excitation_weights.size(); }

    // Emitter + two modes with unit weights: (sigma, a1, a2).
    static ModeLayout hybrid();
    // Modes (a, b) with weights (2, 1): one quantum of a is worth two of b.
    static ModeLayout quadratic();

    bool operator==(const ModeLayout&) const = default;
};

struct OccupationState {
    int emitter{0};               // 0 or 1; always 0 when the layout has no emitter
    std::vector<int> occupations; // per bosonic mode

    bool operator==(const OccupationState&) const = default;
};

int total_excitation(const ModeLayout& layout, const OccupationState& state);

std::string describe(const ModeLayout& layout, const OccupationState& state);

struct ManifoldBasis {
    ModeLayout layout;
    int q{0};
    std::vector<OccupationState> states; // canonical order

    std::size_t size() const noexcept { return states.size(); }
    std::optional<std::size_t> index_of(const OccupationState& state) const;
};

// All states with total excitation q, sorted descending lexicographically by
// (emitter, n_0, n_1, ...). For the hybrid layout this is the ordering
// {σ+a1†, σ+a2†, a1†², a1†a2†, a2†²} used by the manifold matrices.
ManifoldBasis enumerate_manifold(const ModeLayout& layout, int q);

enum class OpKind {
    lower_mode,
    raise_mode,
    number_mode,
    sigma_minus,
    sigma_plus,
    sigma_z_projector, // σ+σ-, projector on the excited emitter state
};

struct OpFactor {
    OpKind kind;
    int mode{0}; // ignored for emitter operators
};

// Ordered operator product. factors.front() is the leftmost operator, so the
// rightmost factor acts first on a ket.
class OperatorSpec {
public:
    OperatorSpec() = default; // identity
    explicit OperatorSpec(std::vector<OpFactor> factors) : factors_(std::move(factors)) {}

    static OperatorSpec lower(int mode) { return OperatorSpec({{OpKind::lower_mode, mode}}); }
    static OperatorSpec raise(int mode) { return OperatorSpec({{OpKind::raise_mode, mode}}); }
    static OperatorSpec number(int mode) { return OperatorSpec({{OpKind::number_mode, mode}}); }
    static OperatorSpec sigma_minus() { return OperatorSpec({{OpKind::sigma_minus, 0}}); }
    static OperatorSpec sigma_plus() { return OperatorSpec({{OpKind::sigma_plus, 0}}); }
    static OperatorSpec sigma_z_projector() { return OperatorSpec({{OpKind::sigma_z_projector, 0}}); }

    // Operator product: (*this) * rhs.
    OperatorSpec operator*(const OperatorSpec& rhs) const;
    OperatorSpec adjoint() const;

    int excitation_change(const ModeLayout& layout) const;
    const std::vector<OpFactor>& factors() const noexcept { return factors_; }

    // Applies the product to one basis state; nullopt when the result vanishes.
    std::optional<std::pair<double, OccupationState>> apply(const ModeLayout& layout,
                                                            OccupationState state) const;

private:
    std::vector<OpFactor> factors_;
};

// |to| x |from| matrix of `op` between two manifolds. Throws
// Error(excitation_mismatch) unless to.q - from.q == op.excitation_change.
ComplexMatrix operator_block(const OperatorSpec& op, const ManifoldBasis& from,
                             const ManifoldBasis& to);

// Convenience for excitation-conserving operators.
ComplexMatrix operator_block(const OperatorSpec& op, const ManifoldBasis& basis);

} // namespace nhpb
