// test_lindblad_oracle.cpp — Master-equation steady states and the weak-drive cross-check

#include <gtest/gtest.h>

#include <cmath>

#include "nhpb/correlations.hpp"
#include "nhpb/errors.hpp"
#include "nhpb/lindblad_oracle.hpp"
#include "nhpb/presets.hpp"

using namespace nhpb;

namespace {

ComplexVector vec(const ComplexMatrix& m) { return Eigen::Map<const ComplexVector>(m.data(), m.size()); }

HybridParams uncoupled() {
    HybridParams h = figure_base_params();
    h.g_1 = h.g_2 = h.d = 0.0;
    return h;
}

QuadraticParams headline_quadratic() {
    QuadraticParams q;
    q.gamma_a = 1.0;
    q.gamma_b = 1e-3;
    q.g = 0.1;
    return q;
}

} // namespace

TEST(Liouvillian, UndrivenVacuumIsStationary) {
    const ModelParams p = figure_base_params();
    const auto l = build_liouvillian(p, default_drive(p), {{3, 3}, 0.0});
    const auto n = static_cast<Eigen::Index>(l.space.dimension());
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    rho(0, 0) = 1.0;
    EXPECT_LT((l.generator * vec(rho)).norm(), 1e-15);
}

TEST(Liouvillian, PreservesTrace) {
    const ModelParams p = figure_base_params();
    const auto l = build_liouvillian(p, default_drive(p), {{3, 3}, 0.05});
    const auto n = static_cast<Eigen::Index>(l.space.dimension());
    const ComplexVector id = vec(ComplexMatrix::Identity(n, n));
    EXPECT_LT((id.transpose() * l.generator).norm(), 1e-12);
}

TEST(Liouvillian, DimensionLimit) {
    const ModelParams p = figure_base_params();
    try {
        build_liouvillian(p, default_drive(p), {{20, 20}, 1e-3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::dimension_limit);
    }
}

TEST(SteadyState, UndrivenIsVacuumProjector) {
    const ModelParams p = figure_base_params();
    const auto rho = steady_state(build_liouvillian(p, default_drive(p), {{3, 3}, 0.0}));
    EXPECT_NEAR(rho.rho(0, 0).real(), 1.0, 1e-12);
    EXPECT_NEAR(rho.rho.norm(), 1.0, 1e-12);
}

// Single driven lossy mode: coherent state with <n> = 4Ω²/γ² at resonance.
TEST(SteadyState, DrivenLossyModeIsCoherent) {
    const HybridParams h = uncoupled();
    const ModelParams p = h;
    const double omega = 1e-5;
    const auto oc = run_oracle(p, default_drive(p), {{4, 2}, omega});
    EXPECT_NEAR(oc.intensity / (4.0 * omega * omega / (h.gamma_1 * h.gamma_1)), 1.0, 1e-8);
    EXPECT_NEAR(oc.g2, 1.0, 1e-6);
    EXPECT_NEAR(oc.g3, 1.0, 1e-5);
}

TEST(SteadyState, TwoLevelEmitterNeverEmitsPairs) {
    const ModelParams p = uncoupled();
    DriveSpec drive = default_drive(p);
    drive.pump = drive.detect = Port::emitter_port();
    const auto oc = run_oracle(p, drive, {{2, 2}, 1e-7});
    EXPECT_GT(oc.intensity, 0.0);
    EXPECT_EQ(oc.g2, 0.0);
}

TEST(SteadyState, NonUniqueKernelIsReported) {
    HybridParams h = uncoupled();
    h.gamma_e = 0.0; // the excited emitter never decays and is not coupled
    const ModelParams p = h;
    try {
        steady_state(build_liouvillian(p, default_drive(p), {{2, 2}, 0.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::non_unique_steady_state);
    }
}

TEST(SteadyState, PhysicalDensityOperator) {
    const ModelParams p = headline_quadratic();
    const auto rho = steady_state(build_liouvillian(p, default_drive(p), default_truncation(p)));
    EXPECT_LT(rho.hermiticity_deviation, 1e-12);
    EXPECT_LT(rho.trace_deviation, 1e-12);
    EXPECT_GT(rho.min_eigenvalue, -1e-12);
    EXPECT_LT(rho.residual, 1e-12);
}

TEST(OracleCorrelations, FockOneMixedWithVacuum) {
    const ModelParams p = headline_quadratic();
    const FullSpace space = make_full_space(p, {2, 3});
    const auto n = static_cast<Eigen::Index>(space.dimension());
    DensityOperator d{space, ComplexMatrix::Zero(n, n)};
    d.rho(0, 0) = 0.7;
    d.rho(1, 1) = 0.3; // b in |1>, a in vacuum: index n_a * 4 + n_b
    const auto oc = oracle_correlations(d, default_drive(p));
    EXPECT_NEAR(oc.intensity, 0.3, 1e-15);
    EXPECT_EQ(oc.g2, 0.0);
}

TEST(OracleCorrelations, CoherentState) {
    const ModelParams p = headline_quadratic();
    const FullSpace space = make_full_space(p, {2, 40});
    const auto n = static_cast<Eigen::Index>(space.dimension());
    const double alpha = 0.5;
    ComplexVector psi = ComplexVector::Zero(n);
    double amp = std::exp(-0.5 * alpha * alpha);
    for (int k = 0; k <= 40; ++k) {
        psi(k) = amp;
        amp *= alpha / std::sqrt(k + 1.0);
    }
    DensityOperator d{space, psi * psi.adjoint()};
    const auto oc = oracle_correlations(d, default_drive(p));
    EXPECT_NEAR(oc.intensity, alpha * alpha, 1e-12);
    EXPECT_NEAR(oc.g2, 1.0, 1e-10);
    EXPECT_NEAR(oc.g3, 1.0, 1e-10);
}

TEST(OracleCorrelations, VacuumHasNoIntensity) {
    const ModelParams p = headline_quadratic();
    const FullSpace space = make_full_space(p, {2, 2});
    const auto n = static_cast<Eigen::Index>(space.dimension());
    DensityOperator d{space, ComplexMatrix::Zero(n, n)};
    d.rho(0, 0) = 1.0;
    try {
        oracle_correlations(d, default_drive(p));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::zero_intensity);
    }
}

// The oracle is the independent check of the weak-drive machinery.
TEST(OracleCrossCheck, QuadraticMatchesClosedForm) {
    const QuadraticParams q = headline_quadratic();
    const ModelParams p = q;
    const auto oc = run_oracle(p, default_drive(p), {{3, 4}, 1e-5});
    EXPECT_LT(std::abs(oc.g2 - 1.0 / 1681.0) * 1681.0, 2e-2);
    const double g3 = g3_full(p, default_drive(p));
    EXPECT_LT(std::abs(oc.g3 - g3) / g3, 5e-2);
}

TEST(OracleCrossCheck, HybridMatchesBornSeries) {
    const ModelParams p = figure_base_params();
    const auto drive = default_drive(p, 0.02);
    const auto oc = run_oracle(p, drive, {{3, 3}, 1e-7});
    EXPECT_LT(std::abs(oc.g2 - g2_full(p, drive)) / g2_full(p, drive), 1e-2);
    EXPECT_LT(std::abs(oc.intensity / 1e-14 - intensity_full(p, drive)) / intensity_full(p, drive), 1e-2);
}

TEST(Convergence, QuadraticTruncations) {
    const ModelParams p = headline_quadratic();
    const double omega = 1e-5;
    const auto r = convergence_check(p, default_drive(p), {{{2, 2}, omega}, {{3, 3}, omega}, {{4, 4}, omega}});
    EXPECT_LT(r.relative_differences.front(), 1e-3);
    EXPECT_TRUE(r.converged);
    EXPECT_FALSE(r.non_perturbative);
}

TEST(Convergence, StrongDriveIsFlagged) {
    const QuadraticParams q = headline_quadratic();
    const ModelParams p = q;
    const double omega = q.gamma_b;
    const auto r = convergence_check(p, default_drive(p), {{{3, 4}, omega}, {{4, 6}, omega}});
    EXPECT_TRUE(r.non_perturbative);
}
