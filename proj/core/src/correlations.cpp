#include "nhpb/correlations.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "nhpb/errors.hpp"

namespace nhpb {

namespace {

// Reciprocal-condition floor below which a resolvent counts as singular.
constexpr double kSingularRcond = 1e-14;

void require_unit_weight(const ModeLayout& layout, const Port& port, const char* role) {
    if (port.kind == Port::Kind::emitter) {
        if (!layout.emitter_present) {
            throw Error(ErrorCode::domain_error, std::string(role) + " port refers to a missing emitter");
        }
        return;
    }
    if (port.mode < 0 || static_cast<std::size_t>(port.mode) >= layout.mode_count()) {
        throw Error(ErrorCode::domain_error, std::string(role) + " port refers to a missing mode");
    }
    if (layout.excitation_weights[static_cast<std::size_t>(port.mode)] != 1) {
        throw Error(ErrorCode::domain_error, std::string(role) + " port must carry unit excitation weight");
    }
}

void require_q_max(int q_max) {
    if (q_max < 1 || q_max > kMaxManifold) {
        throw Error(ErrorCode::domain_error, "q_max must lie in [1, 3]");
    }
}

double checked_ratio(double num, double den) {
    if (!(den > 0.0)) {
        throw Error(ErrorCode::zero_intensity, "detected intensity vanishes");
    }
    return num / den;
}

} // namespace

BornCoefficients born_coefficients(const ModelParams& params, const DriveSpec& drive, int q_max) {
    validate(params);
    require_q_max(q_max);
    const ModeLayout layout = layout_of(params);
    require_unit_weight(layout, drive.pump, "pump");
    require_unit_weight(layout, drive.detect, "detect");

    BornCoefficients bc;
    bc.omega_L_detuning = drive.omega_L_detuning;
    bc.q_max = q_max;
    bc.bases.push_back(enumerate_manifold(layout, 0));
    bc.c.push_back(ComplexVector::Ones(1));

    const OperatorSpec raise = drive.pump.raising();
    for (int q = 1; q <= q_max; ++q) {
        bc.bases.push_back(enumerate_manifold(layout, q));
        const auto& from = bc.bases[static_cast<std::size_t>(q - 1)];
        const auto& to = bc.bases[static_cast<std::size_t>(q)];
        const ComplexMatrix dh =
            detuned_hamiltonian(build_manifold_hamiltonian(params, to), q, drive.laser_offset());
        const ComplexVector rhs = operator_block(raise, from, to) * bc.c.back();
        Eigen::PartialPivLU<ComplexMatrix> lu(dh);
        const double rcond = lu.rcond();
        if (!(rcond > kSingularRcond)) {
            throw Error(ErrorCode::singular_resolvent,
                        "manifold " + std::to_string(q) + " resolvent is singular (rcond " + std::to_string(rcond) + ")");
        }
        bc.c.push_back(-lu.solve(rhs));
    }
    return bc;
}

double detected_weight(const BornCoefficients& bc, const DriveSpec& drive, int n) {
    if (n < 1 || n > bc.q_max) {
        throw Error(ErrorCode::domain_error, "detected order exceeds the computed Born order");
    }
    const OperatorSpec lower = drive.detect.lowering();
    ComplexVector v = bc.c[static_cast<std::size_t>(n)];
    for (int q = n; q >= 1; --q) {
        v = operator_block(lower, bc.bases[static_cast<std::size_t>(q)], bc.bases[static_cast<std::size_t>(q - 1)]) * v;
    }
    return std::norm(v(0));
}

double intensity(const BornCoefficients& bc, const DriveSpec& drive) { return detected_weight(bc, drive, 1); }

double intensity_full(const ModelParams& params, const DriveSpec& drive) {
    return intensity(born_coefficients(params, drive, 1), drive);
}

double g2_full(const ModelParams& params, const DriveSpec& drive) {
    const auto bc = born_coefficients(params, drive, 2);
    const double i1 = detected_weight(bc, drive, 1);
    return checked_ratio(detected_weight(bc, drive, 2), i1 * i1);
}

double g3_full(const ModelParams& params, const DriveSpec& drive) {
    const auto bc = born_coefficients(params, drive, 3);
    const double i1 = detected_weight(bc, drive, 1);
    return checked_ratio(detected_weight(bc, drive, 3), i1 * i1 * i1);
}

SpectralModel::SpectralModel(const ModelParams& params, const Port& pump, const Port& detect, int q_max,
                             double accessibility_threshold)
    : params_(params), q_max_(q_max) {
    validate(params);
    require_q_max(q_max);
    const ModeLayout layout = layout_of(params);
    require_unit_weight(layout, pump, "pump");
    require_unit_weight(layout, detect, "detect");

    const OperatorSpec raise = pump.raising();
    const OperatorSpec lower = detect.lowering();

    // Row vector mapping manifold q to the vacuum through (E+)^q.
    ComplexMatrix to_vacuum = ComplexMatrix::Ones(1, 1);
    for (int q = 0; q <= q_max; ++q) {
        ManifoldSpectrum m;
        m.basis = enumerate_manifold(layout, q);
        m.hamiltonian = build_manifold_hamiltonian(params, m.basis);
        m.eig = eigendecompose(m.hamiltonian);
        if (q > 0) {
            const auto& prev = manifolds_.back();
            m.pump_up = operator_block(raise, prev.basis, m.basis);
            m.detect_down = operator_block(lower, m.basis, prev.basis);
            to_vacuum = to_vacuum * m.detect_down;

            const ComplexVector prev_state =
                q == 1 ? ComplexVector(ComplexVector::Ones(1)) : prev.eig.vector(narrowest_.back());
            ComplexVector access = m.eig.vectors.transpose() * (m.pump_up * prev_state);
            access_.push_back(access);
            narrowest_.push_back(narrowest_accessible(m.eig, access, accessibility_threshold));

            const ComplexMatrix projected = to_vacuum * m.eig.vectors; // 1 x N_q
            gram_.push_back(projected.adjoint() * projected);
        } else {
            access_.push_back(ComplexVector::Ones(1));
            narrowest_.push_back(0);
            gram_.push_back(ComplexMatrix::Ones(1, 1));
        }
        manifolds_.push_back(std::move(m));
    }
}

std::vector<double> SpectralModel::detected_weights(double laser_offset,
                                                    const std::vector<std::vector<cplx>>* eigenvalue_override) const {
    std::vector<double> weights;
    ComplexVector beta = ComplexVector::Ones(1);
    for (int q = 1; q <= q_max_; ++q) {
        const auto& prev = manifolds_[static_cast<std::size_t>(q - 1)];
        const auto& m = manifolds_[static_cast<std::size_t>(q)];
        // c-product pump elements (m|V|i) between eigenstates.
        const ComplexMatrix pump = m.eig.vectors.transpose() * m.pump_up * prev.eig.vectors;
        ComplexVector next = pump * beta;
        double scale = 0.0;
        for (std::size_t j = 0; j < m.eig.dimension(); ++j) {
            scale = std::max(scale, std::abs(m.eig.eigenvalues[j]));
        }
        scale = std::max(scale, std::abs(q * laser_offset));
        for (std::size_t j = 0; j < m.eig.dimension(); ++j) {
            const cplx e = eigenvalue_override ? (*eigenvalue_override)[static_cast<std::size_t>(q)][j]
                                               : m.eig.eigenvalues[j];
            const cplx denom = e - static_cast<double>(q) * laser_offset;
            if (!(std::abs(denom) > 1e-14 * scale)) {
                throw Error(ErrorCode::singular_resolvent,
                            "laser resonant with a lossless eigenstate of manifold " + std::to_string(q));
            }
            next(static_cast<Eigen::Index>(j)) /= -denom;
        }
        beta = next;
        const cplx w = (beta.adjoint() * gram_[static_cast<std::size_t>(q)] * beta)(0, 0);
        weights.push_back(std::abs(w));
    }
    return weights;
}

std::vector<std::vector<cplx>> SpectralModel::tampered_eigenvalues() const {
    const double gamma_p1 = manifolds_[1].eig.width(narrowest_[1]);
    std::vector<std::vector<cplx>> out;
    for (int q = 0; q <= q_max_; ++q) {
        std::vector<cplx> values;
        for (const cplx e : manifolds_[static_cast<std::size_t>(q)].eig.eigenvalues) {
            values.emplace_back(e.real(), -0.5 * q * gamma_p1);
        }
        out.push_back(std::move(values));
    }
    return out;
}

namespace {

CorrelationSet normalize(const std::vector<double>& w) {
    CorrelationSet out;
    out.intensity_rel = w[0];
    if (w.size() >= 2) {
        out.g2 = checked_ratio(w[1], w[0] * w[0]);
    }
    if (w.size() >= 3) {
        out.g3 = checked_ratio(w[2], w[0] * w[0] * w[0]);
    }
    return out;
}

} // namespace

CorrelationSet spectral_correlations(const SpectralModel& model, double laser_offset) {
    return normalize(model.detected_weights(laser_offset));
}

CorrelationSet tampered_correlations(const SpectralModel& model, double laser_offset) {
    const auto values = model.tampered_eigenvalues();
    return normalize(model.detected_weights(laser_offset, &values));
}

double g2_two_state(const SpectralModel& model, double laser_offset) {
    if (model.q_max() < 2) {
        throw Error(ErrorCode::domain_error, "two-state g2 needs manifolds up to q = 2");
    }
    const auto& m1 = model.manifold(1);
    const auto& m2 = model.manifold(2);
    const std::size_t p1 = model.narrowest(1);
    const std::size_t p2 = model.narrowest(2);
    const ComplexVector v1 = m1.eig.vector(p1);
    const ComplexVector v2 = m2.eig.vector(p2);
    const cplx e1 = m1.eig.eigenvalues[p1];
    const cplx e2 = m2.eig.eigenvalues[p2];

    const double lorentz = std::norm((e1 - laser_offset) / (0.5 * e2 - laser_offset));

    const cplx v21 = (v2.transpose() * m2.pump_up * v1)(0, 0);
    const cplx v10 = (v1.transpose() * m1.pump_up)(0, 0);
    const double pump = std::norm(v21) / (2.0 * std::norm(v10));

    // E-E+ on manifold 1 and E-E-E+E+ on manifold 2, as matrices on each basis.
    const ComplexMatrix ee1 = m1.detect_down.adjoint() * m1.detect_down;
    const ComplexMatrix down2 = m1.detect_down * m2.detect_down;
    const ComplexMatrix ee2 = down2.adjoint() * down2;
    const cplx d1 = (v1.transpose() * ee1 * v1)(0, 0);
    const cplx d2 = (v2.transpose() * ee2 * v2)(0, 0);
    const double detect = std::abs(d2) / (2.0 * std::norm(d1));

    return lorentz * pump * detect;
}

double g2_two_state(const ModelParams& params, const DriveSpec& drive) {
    const SpectralModel model(params, drive.pump, drive.detect, 2);
    return g2_two_state(model, drive.laser_offset());
}

CorrelationSet g2_tampered(const ModelParams& params, const DriveSpec& drive) {
    const SpectralModel model(params, drive.pump, drive.detect, 3);
    return tampered_correlations(model, drive.laser_offset());
}

double cooperativity(const QuadraticParams& p) { return 4.0 * p.g * p.g / (p.gamma_a * p.gamma_b); }

double g2_quadratic_analytic(const QuadraticParams& p) {
    const double eta = cooperativity(p);
    return 1.0 / ((1.0 + eta) * (1.0 + eta));
}

double intensity_quadratic_analytic(const QuadraticParams& p) { return 4.0 / (p.gamma_b * p.gamma_b); }

double gamma_p2_weak_coupling(const QuadraticParams& p) {
    if (!(p.g < p.gamma_a / (2.0 * std::sqrt(2.0)))) {
        throw Error(ErrorCode::domain_error, "weak-coupling width needs g < gamma_a / (2 sqrt 2)");
    }
    return 2.0 * p.gamma_b * (1.0 + cooperativity(p));
}

double cooperativity(const HybridParams& p) { return 4.0 * p.d * p.d / (p.gamma_1 * p.gamma_2); }

double g2_hybrid_analytic(const HybridParams& p) {
    if (p.d == 0.0) {
        throw Error(ErrorCode::domain_error, "hybrid estimate divides by d = 0");
    }
    const double eta = cooperativity(p);
    const double r = p.g_2 * p.g_2 / (p.d * p.d);
    const double k = p.g_2 / p.gamma_2;
    const double bracket = r + 2.0 + 4.0 * k * k * (r - 1.0);
    return bracket * bracket / (eta * eta);
}

double nhpb_threshold_d(double g_2, double gamma_1, double gamma_2) {
    const double g2sq = g_2 * g_2;
    return std::pow(gamma_1 / gamma_2 * (g2sq * g2sq + g2sq * gamma_2 * gamma_2 / 4.0), 0.25);
}

CorrelationPoint evaluate_point(const ModelParams& params, const DriveSpec& drive, const PointOptions& options) {
    const int q_max = options.g3 ? 3 : 2;
    CorrelationPoint pt;
    pt.omega_L_detuning = drive.omega_L_detuning;

    const auto bc = born_coefficients(params, drive, q_max);
    const double w1 = detected_weight(bc, drive, 1);
    pt.intensity_rel = w1;
    pt.g2 = checked_ratio(detected_weight(bc, drive, 2), w1 * w1);
    if (options.g3) {
        pt.g3 = checked_ratio(detected_weight(bc, drive, 3), w1 * w1 * w1);
    }

    const SpectralModel model(params, drive.pump, drive.detect, q_max, options.accessibility_threshold);
    const auto& m1 = model.manifold(1);
    const auto& m2 = model.manifold(2);
    const std::size_t p1 = model.narrowest(1);
    const std::size_t p2 = model.narrowest(2);
    pt.gamma_p1 = m1.eig.width(p1);
    pt.gamma_p2 = m2.eig.width(p2);
    pt.energy_p1 = m1.eig.energy(p1);
    pt.energy_p2 = m2.eig.energy(p2);
    for (std::size_t j = 0; j < m1.eig.dimension(); ++j) pt.widths_q1.push_back(m1.eig.width(j));
    for (std::size_t j = 0; j < m2.eig.dimension(); ++j) pt.widths_q2.push_back(m2.eig.width(j));

    if (options.components && std::holds_alternative<HybridParams>(params)) {
        const auto n1_q1 = operator_block(OperatorSpec::number(0), m1.basis);
        const auto n2_q1 = operator_block(OperatorSpec::number(1), m1.basis);
        const auto n1_q2 = operator_block(OperatorSpec::number(0), m2.basis);
        const auto n2_q2 = operator_block(OperatorSpec::number(1), m2.basis);
        pt.n1_p1 = mode_component(m1.eig, p1, n1_q1);
        pt.n2_p1 = mode_component(m1.eig, p1, n2_q1);
        pt.n1_p2 = mode_component(m2.eig, p2, n1_q2);
        pt.n2_p2 = mode_component(m2.eig, p2, n2_q2);
    }
    if (options.two_state) {
        pt.g2_two_state = g2_two_state(model, drive.laser_offset());
    }
    if (options.tampered) {
        pt.tampered = tampered_correlations(model, drive.laser_offset());
    }
    return pt;
}

} // namespace nhpb
