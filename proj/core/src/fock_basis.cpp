#include "nhpb/fock_basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nhpb/errors.hpp"

namespace nhpb {

ModeLayout ModeLayout::hybrid() { return ModeLayout{true, {1, 1}}; }

ModeLayout ModeLayout::quadratic() { return ModeLayout{false, {2, 1}}; }

int total_excitation(const ModeLayout& layout, const OccupationState& state) {
    int q = layout.emitter_present ? state.emitter : 0;
    for (std::size_t k = 0; k < layout.mode_count(); ++k) {
        q += layout.excitation_weights[k] * state.occupations[k];
    }
    return q;
}

std::string describe(const ModeLayout& layout, const OccupationState& state) {
    std::ostringstream os;
    os << '(';
    if (layout.emitter_present) {
        os << "e=" << state.emitter << (layout.mode_count() > 0 ? "," : "");
    }
    for (std::size_t k = 0; k < state.occupations.size(); ++k) {
        os << state.occupations[k] << (k + 1 < state.occupations.size() ? "," : "");
    }
    os << ')';
    return os.str();
}

std::optional<std::size_t> ManifoldBasis::index_of(const OccupationState& state) const {
    auto it = std::find(states.begin(), states.end(), state);
    if (it == states.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - states.begin());
}

namespace {

void fill_modes(const ModeLayout& layout, std::size_t mode, int remaining, OccupationState& current,
                std::vector<OccupationState>& out) {
    if (mode == layout.mode_count()) {
        if (remaining == 0) {
            out.push_back(current);
        }
        return;
    }
    const int w = layout.excitation_weights[mode];
    // Descending occupation gives the canonical order directly.
    for (int n = remaining / w; n >= 0; --n) {
        current.occupations[mode] = n;
        fill_modes(layout, mode + 1, remaining - n * w, current, out);
    }
    current.occupations[mode] = 0;
}

} // namespace

ManifoldBasis enumerate_manifold(const ModeLayout& layout, int q) {
    if (q < 0) {
        throw Error(ErrorCode::domain_error, "manifold index must be non-negative");
    }
    for (int w : layout.excitation_weights) {
        if (w < 1) {
            throw Error(ErrorCode::domain_error, "excitation weights must be >= 1");
        }
    }
    ManifoldBasis basis{layout, q, {}};
    OccupationState current{0, std::vector<int>(layout.mode_count(), 0)};
    const int emitter_max = layout.emitter_present ? 1 : 0;
    for (int e = std::min(emitter_max, q); e >= 0; --e) {
        current.emitter = e;
        fill_modes(layout, 0, q - e, current, basis.states);
    }
    return basis;
}

OperatorSpec OperatorSpec::operator*(const OperatorSpec& rhs) const {
    std::vector<OpFactor> f = factors_;
    f.insert(f.end(), rhs.factors_.begin(), rhs.factors_.end());
    return OperatorSpec(std::move(f));
}

OperatorSpec OperatorSpec::adjoint() const {
    std::vector<OpFactor> f;
    f.reserve(factors_.size());
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
        OpFactor g = *it;
        switch (g.kind) {
        case OpKind::lower_mode: g.kind = OpKind::raise_mode; break;
        case OpKind::raise_mode: g.kind = OpKind::lower_mode; break;
        case OpKind::sigma_minus: g.kind = OpKind::sigma_plus; break;
        case OpKind::sigma_plus: g.kind = OpKind::sigma_minus; break;
        case OpKind::number_mode:
        case OpKind::sigma_z_projector: break;
        }
        f.push_back(g);
    }
    return OperatorSpec(std::move(f));
}

namespace {

void check_factor(const ModeLayout& layout, const OpFactor& f) {
    switch (f.kind) {
    case OpKind::lower_mode:
    case OpKind::raise_mode:
    case OpKind::number_mode:
        if (f.mode < 0 || static_cast<std::size_t>(f.mode) >= layout.mode_count()) {
            throw Error(ErrorCode::domain_error, "operator refers to a mode the layout lacks");
        }
        break;
    default:
        if (!layout.emitter_present) {
            throw Error(ErrorCode::domain_error, "emitter operator on a layout without emitter");
        }
        break;
    }
}

} // namespace

int OperatorSpec::excitation_change(const ModeLayout& layout) const {
    int change = 0;
    for (const auto& f : factors_) {
        check_factor(layout, f);
        switch (f.kind) {
        case OpKind::lower_mode: change -= layout.excitation_weights[f.mode]; break;
        case OpKind::raise_mode: change += layout.excitation_weights[f.mode]; break;
        case OpKind::sigma_minus: change -= 1; break;
        case OpKind::sigma_plus: change += 1; break;
        case OpKind::number_mode:
        case OpKind::sigma_z_projector: break;
        }
    }
    return change;
}

std::optional<std::pair<double, OccupationState>> OperatorSpec::apply(const ModeLayout& layout,
                                                                      OccupationState state) const {
    double amplitude = 1.0;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
        const OpFactor& f = *it;
        check_factor(layout, f);
        switch (f.kind) {
        case OpKind::lower_mode: {
            int& n = state.occupations[f.mode];
            if (n == 0) {
                return std::nullopt;
            }
            amplitude *= std::sqrt(static_cast<double>(n));
            --n;
            break;
        }
        case OpKind::raise_mode: {
            int& n = state.occupations[f.mode];
            ++n;
            amplitude *= std::sqrt(static_cast<double>(n));
            break;
        }
        case OpKind::number_mode:
            if (state.occupations[f.mode] == 0) {
                return std::nullopt;
            }
            amplitude *= static_cast<double>(state.occupations[f.mode]);
            break;
        case OpKind::sigma_minus:
            if (state.emitter == 0) {
                return std::nullopt;
            }
            state.emitter = 0;
            break;
        case OpKind::sigma_plus:
            if (state.emitter == 1) {
                return std::nullopt;
            }
            state.emitter = 1;
            break;
        case OpKind::sigma_z_projector:
            if (state.emitter == 0) {
                return std::nullopt;
            }
            break;
        }
    }
    return std::make_pair(amplitude, std::move(state));
}

ComplexMatrix operator_block(const OperatorSpec& op, const ManifoldBasis& from,
                             const ManifoldBasis& to) {
    if (!(from.layout == to.layout)) {
        throw Error(ErrorCode::domain_error, "operator block between different layouts");
    }
    const int change = op.excitation_change(from.layout);
    if (to.q - from.q != change) {
        throw Error(ErrorCode::excitation_mismatch,
                    "operator changes excitation by " + std::to_string(change) + " but manifolds differ by " +
                        std::to_string(to.q - from.q));
    }
    ComplexMatrix block = ComplexMatrix::Zero(static_cast<Eigen::Index>(to.size()),
                                              static_cast<Eigen::Index>(from.size()));
    for (std::size_t col = 0; col < from.size(); ++col) {
        auto image = op.apply(from.layout, from.states[col]);
        if (!image) {
            continue;
        }
        auto row = to.index_of(image->second);
        if (!row) {
            // Cannot happen for consistent manifolds; keeps the invariant explicit.
            throw Error(ErrorCode::excitation_mismatch, "image state missing from target manifold");
        }
        block(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) += image->first;
    }
    return block;
}

ComplexMatrix operator_block(const OperatorSpec& op, const ManifoldBasis& basis) {
    return operator_block(op, basis, basis);
}

} // namespace nhpb
