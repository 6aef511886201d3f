#include "nhpb/lindblad_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "nhpb/errors.hpp"

namespace nhpb {

namespace {

constexpr cplx I{0.0, 1.0};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix local_lowering(int dim) {
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

// Embeds a local operator acting on factor `which` into the product space.
ComplexMatrix embed(const std::vector<int>& dims, std::size_t which, const ComplexMatrix& local) {
    ComplexMatrix out = ComplexMatrix::Ones(1, 1);
    for (std::size_t f = 0; f < dims.size(); ++f) {
        out = kron(out, f == which ? local : ComplexMatrix::Identity(dims[f], dims[f]));
    }
    return out;
}

struct Term {
    double rate;
    ComplexMatrix lowering;
};

// Hermitian (laser-free, rotating at the origin) Hamiltonian and the loss channels.
struct SystemTerms {
    ComplexMatrix hermitian;
    std::vector<Term> losses;
};

SystemTerms system_terms(const ModelParams& params, const FullSpace& space) {
    SystemTerms t;
    const auto n = static_cast<Eigen::Index>(space.dimension());
    t.hermitian = ComplexMatrix::Zero(n, n);
    if (const auto* q = std::get_if<QuadraticParams>(&params)) {
        const ComplexMatrix a = space.lowering(Port::mode_port(0));
        const ComplexMatrix b = space.lowering(Port::mode_port(1));
        const ComplexMatrix coupling = a.adjoint() * b * b;
        t.hermitian += q->delta_a * (a.adjoint() * a);
        t.hermitian += q->g * (coupling + coupling.adjoint());
        t.losses.push_back({q->gamma_a, a});
        t.losses.push_back({q->gamma_b, b});
        return t;
    }
    const auto& h = std::get<HybridParams>(params);
    const ComplexMatrix sm = space.lowering(Port::emitter_port());
    const ComplexMatrix a1 = space.lowering(Port::mode_port(0));
    const ComplexMatrix a2 = space.lowering(Port::mode_port(1));
    t.hermitian += h.delta_e * (sm.adjoint() * sm);
    t.hermitian += h.delta_2 * (a2.adjoint() * a2);
    t.hermitian += h.g_1 * (sm.adjoint() * a1 + a1.adjoint() * sm);
    t.hermitian += h.g_2 * (sm.adjoint() * a2 + a2.adjoint() * sm);
    t.hermitian += h.d * (a1.adjoint() * a2 + a2.adjoint() * a1);
    t.losses.push_back({h.gamma_e, sm});
    t.losses.push_back({h.gamma_1, a1});
    t.losses.push_back({h.gamma_2, a2});
    return t;
}

double smallest_positive_rate(const ModelParams& params) {
    std::vector<double> rates;
    if (const auto* q = std::get_if<QuadraticParams>(&params)) {
        rates = {q->gamma_a, q->gamma_b};
    } else {
        const auto& h = std::get<HybridParams>(params);
        rates = {h.gamma_e, h.gamma_1, h.gamma_2};
    }
    double best = std::numeric_limits<double>::infinity();
    for (double r : rates) {
        if (r > 0.0) best = std::min(best, r);
    }
    return std::isfinite(best) ? best : 0.0;
}

} // namespace

double default_drive_amplitude(const ModelParams& params) { return 1e-2 * smallest_positive_rate(params); }

TruncationSpec default_truncation(const ModelParams& params) {
    TruncationSpec t;
    t.n_max = std::holds_alternative<QuadraticParams>(params) ? std::vector<int>{3, 4} : std::vector<int>{4, 4};
    t.drive_amplitude = default_drive_amplitude(params);
    return t;
}

ComplexMatrix FullSpace::lowering(const Port& port) const {
    if (port.kind == Port::Kind::emitter) {
        if (!layout.emitter_present) {
            throw Error(ErrorCode::domain_error, "port refers to a missing emitter");
        }
        return embed(factor_dims, 0, local_lowering(2));
    }
    if (port.mode < 0 || static_cast<std::size_t>(port.mode) >= layout.mode_count()) {
        throw Error(ErrorCode::domain_error, "port refers to a missing mode");
    }
    const std::size_t f = static_cast<std::size_t>(port.mode) + (layout.emitter_present ? 1 : 0);
    return embed(factor_dims, f, local_lowering(factor_dims[f]));
}

ComplexMatrix FullSpace::weighted_number() const {
    const auto n = static_cast<Eigen::Index>(dimension());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i, i) = excitation[static_cast<std::size_t>(i)];
    }
    return out;
}

FullSpace make_full_space(const ModelParams& params, const std::vector<int>& n_max) {
    FullSpace s;
    s.layout = layout_of(params);
    if (n_max.size() != s.layout.mode_count()) {
        throw Error(ErrorCode::domain_error, "truncation needs one n_max per bosonic mode");
    }
    for (int n : n_max) {
        if (n < 2) {
            throw Error(ErrorCode::domain_error, "n_max must be at least 2");
        }
    }
    s.n_max = n_max;
    if (s.layout.emitter_present) {
        s.factor_dims.push_back(2);
    }
    for (int n : n_max) {
        s.factor_dims.push_back(n + 1);
    }
    std::size_t total = 1;
    for (int d : s.factor_dims) total *= static_cast<std::size_t>(d);
    s.excitation.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        int q = 0;
        for (std::size_t f = s.factor_dims.size(); f-- > 0;) {
            const int local = static_cast<int>(rest % static_cast<std::size_t>(s.factor_dims[f]));
            rest /= static_cast<std::size_t>(s.factor_dims[f]);
            if (s.layout.emitter_present && f == 0) {
                q += local;
            } else {
                const std::size_t mode = f - (s.layout.emitter_present ? 1 : 0);
                q += s.layout.excitation_weights[mode] * local;
            }
        }
        s.excitation[idx] = q;
    }
    return s;
}

ComplexMatrix full_space_nh_hamiltonian(const ModelParams& params, const FullSpace& space) {
    validate(params);
    const SystemTerms t = system_terms(params, space);
    ComplexMatrix h = t.hermitian;
    for (const auto& loss : t.losses) {
        h -= 0.5 * I * loss.rate * (loss.lowering.adjoint() * loss.lowering);
    }
    return h;
}

Liouvillian build_liouvillian(const ModelParams& params, const DriveSpec& drive, const TruncationSpec& trunc) {
    validate(params);
    if (!(trunc.drive_amplitude >= 0.0) || !std::isfinite(trunc.drive_amplitude)) {
        throw Error(ErrorCode::domain_error, "drive amplitude must be finite and non-negative");
    }
    FullSpace space = make_full_space(params, trunc.n_max);
    const std::size_t dim = space.dimension();
    if (dim * dim > kMaxSuperoperatorRows) {
        throw Error(ErrorCode::dimension_limit, "superoperator would have " + std::to_string(dim * dim) +
                                                    " rows (limit " + std::to_string(kMaxSuperoperatorRows) + ")");
    }

    const SystemTerms t = system_terms(params, space);
    const ComplexMatrix pump = space.lowering(drive.pump);
    // Rotating frame: H - ω_L N with frequencies measured from the origin.
    ComplexMatrix h = t.hermitian - drive.laser_offset() * space.weighted_number() +
                      trunc.drive_amplitude * (pump + pump.adjoint());

    // Lρ = -i(Kρ - ρK†) + Σ γ CρC†, K = H - (i/2) Σ γ C†C.
    ComplexMatrix k = h;
    for (const auto& loss : t.losses) {
        k -= 0.5 * I * loss.rate * (loss.lowering.adjoint() * loss.lowering);
    }

    const auto n = static_cast<Eigen::Index>(dim);
    auto vec = [n](Eigen::Index row, Eigen::Index col) { return row + col * n; };
    ComplexMatrix gen = ComplexMatrix::Zero(n * n, n * n);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index c = 0; c < n; ++c) {
            for (Eigen::Index a = 0; a < n; ++a) {
                if (k(m, a) != 0.0) gen(vec(m, c), vec(a, c)) += -I * k(m, a);
                if (k(c, a) != 0.0) gen(vec(m, c), vec(m, a)) += I * std::conj(k(c, a));
            }
        }
    }
    for (const auto& loss : t.losses) {
        if (loss.rate == 0.0) continue;
        std::vector<std::tuple<Eigen::Index, Eigen::Index, cplx>> nz;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (loss.lowering(i, j) != 0.0) nz.emplace_back(i, j, loss.lowering(i, j));
            }
        }
        for (const auto& [m, a, cma] : nz) {
            for (const auto& [c, b, ccb] : nz) {
                gen(vec(m, c), vec(a, b)) += loss.rate * cma * std::conj(ccb);
            }
        }
    }

    return Liouvillian{std::move(space), std::move(gen), trunc.drive_amplitude, smallest_positive_rate(params)};
}

DensityOperator steady_state(const Liouvillian& liouvillian) {
    const FullSpace& space = liouvillian.space;
    const auto n = static_cast<Eigen::Index>(space.dimension());
    const Eigen::Index nn = n * n;

    // Weak-drive equilibration: ρ_mn scales like s^(q_m + q_n) with s ~ Ω/γ, so solve
    // for ρ̃ = S⁻¹ρ with the exact diagonal similarity S. Unscaled, the multi-photon
    // elements sit far below the roundoff of the vacuum population.
    double s = 1.0;
    if (liouvillian.drive_amplitude > 0.0 && liouvillian.narrowest_rate > 0.0) {
        s = std::min(1.0, liouvillian.drive_amplitude / liouvillian.narrowest_rate);
    }
    std::vector<double> weight(static_cast<std::size_t>(nn));
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const int e = space.excitation[static_cast<std::size_t>(r)] + space.excitation[static_cast<std::size_t>(c)];
            weight[static_cast<std::size_t>(r + c * n)] = std::pow(s, e);
        }
    }

    ComplexMatrix a(nn, nn);
    for (Eigen::Index col = 0; col < nn; ++col) {
        const double wc = weight[static_cast<std::size_t>(col)];
        for (Eigen::Index row = 0; row < nn; ++row) {
            a(row, col) = liouvillian.generator(row, col) * (wc / weight[static_cast<std::size_t>(row)]);
        }
    }
    // Trace-preservation makes the equations linearly dependent; trade the vacuum
    // population equation for tr ρ = 1.
    ComplexVector rhs = ComplexVector::Zero(nn);
    a.row(0).setZero();
    for (Eigen::Index m = 0; m < n; ++m) {
        a(0, m + m * n) = weight[static_cast<std::size_t>(m + m * n)];
    }
    rhs(0) = 1.0;

    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    // The rcond estimate alone misses exactly zero pivots, which Eigen skips.
    const double rcond = lu.rcond();
    const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double pivot_ratio = pivots.minCoeff() / pivots.maxCoeff();
    if (!(rcond > 1e-13) || !(pivot_ratio > 1e-13)) {
        throw Error(ErrorCode::non_unique_steady_state,
                    "bordered steady-state system is singular (rcond " + std::to_string(rcond) +
                        ", pivot ratio " + std::to_string(pivot_ratio) + ")");
    }
    const ComplexVector scaled = lu.solve(rhs);
    ComplexVector flat(nn);
    for (Eigen::Index k = 0; k < nn; ++k) {
        flat(k) = scaled(k) * weight[static_cast<std::size_t>(k)];
    }

    DensityOperator out;
    out.space = space;
    out.residual = (liouvillian.generator * flat).norm();
    ComplexMatrix rho = Eigen::Map<const ComplexMatrix>(flat.data(), n, n);
    out.hermiticity_deviation = (rho - rho.adjoint()).norm();
    rho = 0.5 * (rho + rho.adjoint());
    out.trace_deviation = std::abs(rho.trace() - 1.0);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    out.rho = std::move(rho);
    return out;
}

OracleCorrelations oracle_correlations(const DensityOperator& state, const DriveSpec& drive) {
    const ComplexMatrix c = state.space.lowering(drive.detect);
    ComplexMatrix power = c;
    double moments[3] = {0.0, 0.0, 0.0};
    for (int order = 0; order < 3; ++order) {
        if (order > 0) power = c * power;
        // tr((c†)^n c^n ρ) = tr(c^n ρ (c^n)†)
        moments[order] = (power * state.rho * power.adjoint()).trace().real();
    }
    const double i1 = moments[0];
    if (!(i1 > 0.0)) {
        throw Error(ErrorCode::zero_intensity, "oracle intensity vanishes");
    }
    return OracleCorrelations{i1, moments[1] / (i1 * i1), moments[2] / (i1 * i1 * i1)};
}

OracleCorrelations run_oracle(const ModelParams& params, const DriveSpec& drive, const TruncationSpec& trunc) {
    return oracle_correlations(steady_state(build_liouvillian(params, drive, trunc)), drive);
}

ConvergenceReport convergence_check(const ModelParams& params, const DriveSpec& drive,
                                    const std::vector<TruncationSpec>& truncations,
                                    const ConvergenceOptions& options) {
    if (truncations.size() < 2) {
        throw Error(ErrorCode::domain_error, "convergence check needs at least two truncations");
    }
    ConvergenceReport report;
    for (const auto& t : truncations) {
        report.truncations.push_back(t.n_max);
        report.results.push_back(run_oracle(params, drive, t));
    }
    for (std::size_t k = 1; k < report.results.size(); ++k) {
        const double prev = report.results[k - 1].g2;
        const double cur = report.results[k].g2;
        report.relative_differences.push_back(std::abs(cur - prev) / std::abs(cur));
    }
    report.converged = report.relative_differences.back() <= options.truncation_bound;

    TruncationSpec halved = truncations.back();
    halved.drive_amplitude *= 0.5;
    const double g2_half = run_oracle(params, drive, halved).g2;
    report.drive_sensitivity = std::abs(report.results.back().g2 - g2_half) / std::abs(g2_half);
    report.non_perturbative = report.drive_sensitivity > options.drive_bound;
    return report;
}

} // namespace nhpb
