// test_eigensolver.cpp — c-normalized eigendecomposition and state selection

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nhpb/eigensolver.hpp"
#include "nhpb/errors.hpp"
#include "nhpb/presets.hpp"

using namespace nhpb;

namespace {

const cplx I{0.0, 1.0};

ComplexMatrix random_symmetric(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            a(i, j) = a(j, i) = cplx(g(rng), g(rng));
        }
    }
    return a;
}

double min_sign_distance(const ComplexVector& a, const ComplexVector& b) {
    return std::min((a - b).norm(), (a + b).norm());
}

} // namespace

TEST(Eigendecompose, DiagonalSortedByWidth) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = 1.0 - 0.5 * I;
    h(1, 1) = 2.0 - 0.1 * I;
    const auto es = eigendecompose(h);
    EXPECT_NEAR(std::abs(es.eigenvalues[0] - (2.0 - 0.1 * I)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(es.eigenvalues[1] - (1.0 - 0.5 * I)), 0.0, 1e-15);
    EXPECT_NEAR(es.width(0), 0.2, 1e-15);
    EXPECT_NEAR(std::abs(es.vector(0)(1)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(es.vector(1)(0)), 1.0, 1e-15);
}

TEST(Eigendecompose, RealSymmetricCoupling) {
    const double g = 0.3;
    ComplexMatrix h(2, 2);
    h << 0.0, g, g, 0.0;
    const auto es = eigendecompose(h);
    EXPECT_NEAR(es.eigenvalues[0].real(), -g, 1e-15);
    EXPECT_NEAR(es.eigenvalues[1].real(), g, 1e-15);
}

// Closed form of the 2×2 quadratic-model block: λ = m ± sqrt(δ² + 2g²).
TEST(Eigendecompose, QuadraticSecondManifoldClosedForm) {
    QuadraticParams p;
    p.gamma_a = 1.0;
    p.gamma_b = 1e-3;
    p.g = 0.05;
    const auto es = eigendecompose(build_manifold_hamiltonian(p, 2));
    const cplx ha = -0.5 * I * p.gamma_a;
    const cplx hb = -I * p.gamma_b;
    const cplx m = 0.5 * (ha + hb);
    const cplx root = std::sqrt(0.25 * (ha - hb) * (ha - hb) + 2.0 * p.g * p.g);
    const cplx narrow = std::abs((m + root).imag()) < std::abs((m - root).imag()) ? m + root : m - root;
    EXPECT_NEAR(std::abs(es.eigenvalues[0] - narrow), 0.0, 1e-15);
    EXPECT_NEAR(es.width(0), 0.022456, 5e-6);
}

TEST(Eigendecompose, SpectralResolutionAndBiorthogonality) {
    std::mt19937_64 rng(5);
    for (int n : {1, 3, 5, 9}) {
        const ComplexMatrix h = random_symmetric(rng, n);
        const auto es = eigendecompose(h);
        const ComplexMatrix& v = es.vectors;
        ComplexMatrix rebuilt = ComplexMatrix::Zero(n, n);
        for (int j = 0; j < n; ++j) rebuilt += es.eigenvalues[static_cast<std::size_t>(j)] * v.col(j) * v.col(j).transpose();
        EXPECT_LT((rebuilt - h).norm(), 1e-12 * h.norm());
        EXPECT_LT((v.transpose() * v - ComplexMatrix::Identity(n, n)).norm(), 1e-12);
        for (int j = 1; j < n; ++j) EXPECT_LE(es.width(j - 1), es.width(j));
    }
}

TEST(Eigendecompose, DegenerateClusterIsCOrthonormalized) {
    // Two identical uncoupled modes plus a third coupled to neither: a 2-fold cluster.
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = h(1, 1) = -0.5 * I;
    h(2, 2) = 1.0 - 0.1 * I;
    const auto es = eigendecompose(h);
    EXPECT_LT((es.vectors.transpose() * es.vectors - ComplexMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(Eigendecompose, RejectsAsymmetric) {
    ComplexMatrix h(2, 2);
    h << 0.0, 1.0, 0.5, 0.0;
    try {
        eigendecompose(h);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_symmetric);
    }
}

// [[1, i], [i, -1]] is defective; its only eigenvector (1, i) is self-orthogonal.
TEST(Eigendecompose, ReportsExceptionalPoint) {
    ComplexMatrix h(2, 2);
    h << 1.0, I, I, -1.0;
    try {
        eigendecompose(h);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::exceptional_point);
    }
}

TEST(NarrowestAccessible, PicksSmallestWidth) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = -0.25 * I; // Γ = 0.5
    h(1, 1) = -0.05 * I; // Γ = 0.1
    const auto es = eigendecompose(h);
    ComplexVector access(2);
    access << 1.0, 0.8;
    EXPECT_NEAR(es.width(narrowest_accessible(es, access)), 0.1, 1e-15);
}

TEST(NarrowestAccessible, SkipsDarkState) {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = -0.005 * I;
    h(1, 1) = -0.05 * I;
    h(2, 2) = -0.5 * I;
    const auto es = eigendecompose(h);
    ComplexVector access(3);
    access << 1e-9, 0.3, 1.0; // narrowest state is dark to the pump
    EXPECT_EQ(narrowest_accessible(es, access), 1u);
}

TEST(NarrowestAccessible, TiesGoToLargerAmplitude) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = 0.1 - 0.05 * I;
    h(1, 1) = 0.2 - 0.05 * I;
    const auto es = eigendecompose(h);
    ComplexVector access(2);
    access << 0.3, 0.9;
    EXPECT_EQ(narrowest_accessible(es, access), 1u);
}

TEST(NarrowestAccessible, NothingAccessibleThrows) {
    const auto es = eigendecompose(ComplexMatrix::Identity(2, 2) * (-0.5 * I));
    try {
        narrowest_accessible(es, ComplexVector::Zero(2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::no_accessible_state);
    }
}

TEST(ModeComponent, PureModeStateIsOne) {
    HybridParams p = figure_base_params();
    p.g_1 = p.g_2 = p.d = 0.0;
    const auto basis = enumerate_manifold(ModeLayout::hybrid(), 1);
    const auto es = eigendecompose(build_manifold_hamiltonian(p, basis));
    const auto n1 = operator_block(OperatorSpec::number(0), basis);
    double best = 0.0;
    for (std::size_t j = 0; j < es.dimension(); ++j) best = std::max(best, mode_component(es, j, n1));
    EXPECT_NEAR(best, 1.0, 1e-15);
}

TEST(ModeComponent, NarrowStateAvoidsPlasmonicMode) {
    const HybridParams p = figure_base_params();
    const auto basis = enumerate_manifold(ModeLayout::hybrid(), 1);
    const auto es = eigendecompose(build_manifold_hamiltonian(p, basis));
    // Narrowest of the three states; all three are pumped through a1.
    EXPECT_LT(mode_component(es, 0, operator_block(OperatorSpec::number(1), basis)), 1e-3);
}

TEST(Perturbation, CorrectionVanishesWithoutAsymmetry) {
    HybridParams p = figure_base_params();
    p.g_1 = 0.0;
    p.gamma_e = p.gamma_1 = 2e-3;
    EXPECT_NEAR(p1_perturbation_diagnostics(p).correction_norm, 0.0, 1e-15);
}

TEST(Perturbation, FigureParametersSatisfyConditions) {
    const auto r = p1_perturbation_diagnostics(figure_base_params());
    EXPECT_LT(r.lhs_1 / r.rhs_1, 1e-2);
    EXPECT_EQ(r.lhs_2, 0.0);
    EXPECT_NEAR(r.lhs_1, (1e-3 - 1e-5) / 4.0, 1e-15);
}

TEST(Perturbation, ZerothOrderIsExactAtTheUnperturbedPoint) {
    HybridParams p = figure_base_params();
    p.gamma_e = p.gamma_1 = p.g_1 = 0.0;
    const auto es = eigendecompose(build_manifold_hamiltonian(p, 1));
    EXPECT_LT(std::abs(es.eigenvalues[0]), 1e-15);
    EXPECT_LT(min_sign_distance(es.vector(0), p1_zeroth_order(p)), 1e-14);
}

// The residual after adding the first-order correction must shrink quadratically.
// The partner state A+/4 is only ~0.06 wide here, so ε has to stay well below that.
TEST(Perturbation, FirstOrderCorrectionIsSecondOrderAccurate) {
    double previous = 0.0;
    for (double eps : {1e-4, 1e-5}) {
        HybridParams p = figure_base_params();
        p.gamma_e = 0.1 * eps;
        p.gamma_1 = eps;
        p.g_1 = 0.5 * eps;
        const auto es = eigendecompose(build_manifold_hamiltonian(p, 1));
        const ComplexVector v0 = p1_zeroth_order(p);
        const ComplexVector v1 = p1_first_order_correction(p);
        const double zeroth = min_sign_distance(es.vector(0), v0);
        const double first = min_sign_distance(es.vector(0), v0 + v1);
        EXPECT_LT(first, 0.1 * zeroth) << "eps = " << eps;
        if (previous > 0.0) EXPECT_LT(first, 0.02 * previous);
        previous = first;
    }
}
