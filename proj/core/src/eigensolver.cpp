#include "nhpb/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "nhpb/errors.hpp"

namespace nhpb {

namespace {

cplx c_dot(const ComplexVector& u, const ComplexVector& v) { return (u.transpose() * v)(0, 0); }

// Pivoted Gram-Schmidt under the c-product inside one cluster of (numerically)
// degenerate eigenvalues. Columns are replaced by a c-orthonormal basis of their span.
void c_orthonormalize(ComplexMatrix& vecs, const std::vector<std::size_t>& cluster, double tol) {
    std::vector<ComplexVector> pending;
    for (auto idx : cluster) {
        pending.push_back(vecs.col(static_cast<Eigen::Index>(idx)));
    }
    std::vector<ComplexVector> done;
    while (!pending.empty()) {
        for (auto& v : pending) {
            for (const auto& u : done) {
                v -= c_dot(u, v) * u;
            }
            const double n = v.norm();
            if (n > 0.0) {
                v /= n;
            }
        }
        std::size_t best = 0;
        double best_val = -1.0;
        for (std::size_t k = 0; k < pending.size(); ++k) {
            const double val = std::abs(c_dot(pending[k], pending[k]));
            if (val > best_val) {
                best_val = val;
                best = k;
            }
        }
        if (best_val < tol && pending.size() > 1) {
            // Every remaining vector is self-orthogonal; a pairwise sum is not,
            // unless the span itself is degenerate under the c-product.
            ComplexVector combo = pending[0] + pending[1];
            const double n = combo.norm();
            if (n > 0.0) {
                combo /= n;
            }
            if (std::abs(c_dot(combo, combo)) >= tol) {
                pending[0] = combo;
                best = 0;
                best_val = std::abs(c_dot(combo, combo));
            }
        }
        if (best_val < tol) {
            throw Error(ErrorCode::exceptional_point,
                        "self-orthogonal eigenvector (|v^T v| = " + std::to_string(best_val) + ")");
        }
        ComplexVector v = pending[best];
        v /= std::sqrt(c_dot(v, v));
        done.push_back(v);
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    }
    for (std::size_t k = 0; k < cluster.size(); ++k) {
        vecs.col(static_cast<Eigen::Index>(cluster[k])) = done[k];
    }
}

// Sign convention: the largest-magnitude component has positive real part.
void fix_sign(Eigen::Ref<ComplexVector> v) {
    Eigen::Index k = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double m = std::abs(v(i));
        if (m > best * (1.0 + 1e-12)) {
            best = m;
            k = i;
        }
    }
    const cplx c = v(k);
    if (c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0)) {
        v = -v;
    }
}

} // namespace

Eigensystem eigendecompose(const ComplexMatrix& h, const EigenOptions& options) {
    if (h.rows() != h.cols()) {
        throw Error(ErrorCode::domain_error, "eigendecompose: matrix must be square");
    }
    const Eigen::Index n = h.rows();
    Eigensystem es;
    if (n == 0) {
        return es;
    }

    const double scale = h.norm();
    const double asym = (h - h.transpose()).norm();
    if (asym > options.symmetry_tolerance * std::max(scale, std::numeric_limits<double>::min())) {
        throw Error(ErrorCode::not_symmetric,
                    "matrix is not complex-symmetric (relative asymmetry " + std::to_string(asym / scale) + ")");
    }
    const ComplexMatrix sym = 0.5 * (h + h.transpose());

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(sym, true);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::exceptional_point, "eigensolver did not converge");
    }
    std::vector<cplx> values(solver.eigenvalues().begin(), solver.eigenvalues().end());
    ComplexMatrix vecs = solver.eigenvectors();

    // Group numerically degenerate eigenvalues (transitively).
    const double cluster_tol = 1e-10 * std::max(scale, 1e-300);
    std::vector<std::size_t> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i];
        return i;
    };
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            if (std::abs(values[i] - values[j]) <= cluster_tol) {
                parent[find(j)] = find(i);
            }
        }
    }
    std::vector<bool> visited(values.size(), false);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t root = find(i);
        if (visited[root]) continue;
        visited[root] = true;
        std::vector<std::size_t> cluster;
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (find(j) == root) cluster.push_back(j);
        }
        c_orthonormalize(vecs, cluster, options.self_orthogonality_tolerance);
    }

    for (Eigen::Index j = 0; j < n; ++j) {
        fix_sign(vecs.col(j));
    }

    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double wa = -values[a].imag();
        const double wb = -values[b].imag();
        if (wa != wb) return wa < wb;
        return values[a].real() < values[b].real();
    });

    es.eigenvalues.reserve(values.size());
    es.vectors.resize(n, n);
    for (std::size_t k = 0; k < order.size(); ++k) {
        es.eigenvalues.push_back(values[order[k]]);
        es.vectors.col(static_cast<Eigen::Index>(k)) = vecs.col(static_cast<Eigen::Index>(order[k]));
    }
    return es;
}

std::size_t narrowest_accessible(const Eigensystem& es, const ComplexVector& access, double threshold) {
    if (static_cast<std::size_t>(access.size()) != es.dimension()) {
        throw Error(ErrorCode::domain_error, "access amplitude count does not match the eigensystem");
    }
    double max_access = 0.0;
    double max_eig = 0.0;
    for (std::size_t j = 0; j < es.dimension(); ++j) {
        max_access = std::max(max_access, std::abs(access(static_cast<Eigen::Index>(j))));
        max_eig = std::max(max_eig, std::abs(es.eigenvalues[j]));
    }
    if (max_access == 0.0) {
        throw Error(ErrorCode::no_accessible_state, "no eigenstate is reachable by the pump");
    }
    const double tie_tol = 1e-12 * max_eig;
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < es.dimension(); ++j) {
        const double a = std::abs(access(static_cast<Eigen::Index>(j)));
        if (!(a > threshold * max_access)) continue;
        if (!best) {
            best = j;
            continue;
        }
        const double wj = es.width(j);
        const double wb = es.width(*best);
        if (wj < wb - tie_tol) {
            best = j;
        } else if (std::abs(wj - wb) <= tie_tol && a > std::abs(access(static_cast<Eigen::Index>(*best)))) {
            best = j;
        }
    }
    if (!best) {
        throw Error(ErrorCode::no_accessible_state, "no eigenstate passes the accessibility threshold");
    }
    return *best;
}

double mode_component(const Eigensystem& es, std::size_t j, const ComplexMatrix& number_block) {
    const ComplexVector v = es.vector(j);
    if (number_block.rows() != v.size() || number_block.cols() != v.size()) {
        throw Error(ErrorCode::domain_error, "number operator dimension does not match the eigenvector");
    }
    return std::abs((v.transpose() * number_block * v)(0, 0));
}

ComplexVector p1_zeroth_order(const HybridParams& p) {
    const double s = std::hypot(p.d, p.g_2);
    if (s == 0.0) {
        throw Error(ErrorCode::domain_error, "p1 zeroth-order state needs g_2 or d nonzero");
    }
    ComplexVector v(3);
    v << -p.d / s, p.g_2 / s, 0.0;
    return v;
}

namespace {

struct ZerothOrder {
    double s2; // d² + g_2²
    cplx a_plus;
    cplx a_minus;
    cplx x; // g_1 (d² - g_2²) + i d g_2 (γ_1 - γ_e)/2
};

ZerothOrder zeroth_order(const HybridParams& p) {
    ZerothOrder z;
    z.s2 = p.d * p.d + p.g_2 * p.g_2;
    if (z.s2 == 0.0) {
        throw Error(ErrorCode::domain_error, "p1 diagnostics need g_2 or d nonzero");
    }
    const cplx root = std::sqrt(cplx(16.0 * z.s2 - p.gamma_2 * p.gamma_2, 0.0));
    z.a_plus = cplx(0.0, -p.gamma_2) + root;
    z.a_minus = cplx(0.0, -p.gamma_2) - root;
    z.x = cplx(p.g_1 * (p.d * p.d - p.g_2 * p.g_2), 0.5 * p.d * p.g_2 * (p.gamma_1 - p.gamma_e));
    return z;
}

} // namespace

ComplexVector p1_first_order_correction(const HybridParams& p) {
    const ZerothOrder z = zeroth_order(p);
    ComplexVector out = ComplexVector::Zero(3);
    for (const cplx a : {z.a_plus, z.a_minus}) {
        // Unnormalized partner eigenvector (4g_2, 4d, A) of eigenvalue A/4; the
        // c-normalization √(A² + 16 s²) appears squared, so no branch choice enters.
        ComplexVector u(3);
        u << 4.0 * p.g_2, 4.0 * p.d, a;
        const cplx coeff = 16.0 * z.x / (a * std::sqrt(z.s2) * (a * a + 16.0 * z.s2));
        out += coeff * u;
    }
    return out;
}

ConditionReport p1_perturbation_diagnostics(const HybridParams& p) {
    const ZerothOrder z = zeroth_order(p);
    ConditionReport r;
    r.lhs_1 = std::abs(p.gamma_1 - p.gamma_e) / 4.0;
    r.rhs_1 = 2.0 * z.s2 / p.gamma_2;
    r.lhs_2 = p.g_1 * std::abs(p.d * p.d - p.g_2 * p.g_2);
    r.rhs_2 = 2.0 * z.s2 * z.s2 / p.gamma_2;
    r.a_plus = z.a_plus;
    r.a_minus = z.a_minus;
    r.correction_norm = p1_first_order_correction(p).norm();
    return r;
}

} // namespace nhpb
