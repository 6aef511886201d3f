#include "nhpb/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "nhpb/correlations.hpp"
#include "nhpb/dataset_io.hpp"
#include "nhpb/eigensolver.hpp"
#include "nhpb/errors.hpp"
#include "nhpb/lindblad_oracle.hpp"
#include "nhpb/presets.hpp"
#include "nhpb/scan.hpp"

namespace nhpb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rel_err(double measured, double expected) { return std::abs(measured - expected) / std::abs(expected); }

std::vector<double> log_grid(double from, double to, int n) {
    return ScanAxis{"x", from, to, n, false}.values();
}

// Comparisons against NaN fail, which is what a missing measurement should do.
Assertion less(std::string name, double measured, double bound) {
    return {std::move(name), measured, "<", bound, 0.0, measured < bound};
}
Assertion at_most(std::string name, double measured, double bound) {
    return {std::move(name), measured, "<=", bound, 0.0, measured <= bound};
}
Assertion within(std::string name, double measured, double lo, double hi) {
    return {std::move(name), measured, "in", lo, hi, measured >= lo && measured <= hi};
}
Assertion holds(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, "==", 1.0, 0.0, ok}; }

HybridParams fig3_params() { return figure_base_params(); }

QuadraticParams headline_quadratic() {
    QuadraticParams p;
    p.gamma_a = 1.0;
    p.gamma_b = 1e-3;
    p.g = 0.1;
    return p;
}

ValidationReport quadratic_resonance() {
    ValidationReport r;
    double worst_g2 = 0.0;
    double worst_i = 0.0;
    for (double gamma_a : log_grid(0.5, 2.0, 5)) {
        for (double ratio_b : log_grid(1e-3, 1.0, 5)) {
            for (double ratio_g : log_grid(0.01, 0.5, 5)) {
                QuadraticParams p;
                p.gamma_a = gamma_a;
                p.gamma_b = ratio_b * gamma_a;
                p.g = ratio_g * gamma_a;
                const ModelParams mp = p;
                const auto drive = default_drive(mp);
                worst_g2 = std::max(worst_g2, rel_err(g2_full(mp, drive), g2_quadratic_analytic(p)));
                worst_i = std::max(worst_i, rel_err(intensity_full(mp, drive), intensity_quadratic_analytic(p)));
            }
        }
    }
    r.assertions.push_back(less("g2_full vs 1/(1+eta)^2, max relative error", worst_g2, 1e-8));
    r.assertions.push_back(less("intensity_rel vs 4/gamma_b^2, max relative error", worst_i, 1e-8));

    // Single-point scan with eta = 40.
    ScanConfig c;
    c.name = "quadratic-eta40";
    c.params = headline_quadratic();
    c.drive = default_drive(c.params);
    const auto ds = run_scan(c, 1);
    r.assertions.push_back(less("scan g2 at eta = 40 vs 1/1681, relative error", rel_err(ds.number(0, "g2"), 1.0 / 1681.0), 1e-8));
    return r;
}

ValidationReport width_law() {
    ValidationReport r;
    for (auto [g, bound] : {std::pair{0.05, 0.02}, std::pair{0.1, 0.10}}) {
        QuadraticParams p;
        p.gamma_a = 1.0;
        p.gamma_b = 1e-3;
        p.g = g;
        const ModelParams mp = p;
        const auto drive = default_drive(mp);
        const SpectralModel model(mp, drive.pump, drive.detect, 2);
        const double width = model.manifold(2).eig.width(model.narrowest(2));
        std::ostringstream name;
        name << "Gamma_p2 vs 2 gamma_b (1 + eta) at g = " << g << " (measured " << width << ", law "
             << gamma_p2_weak_coupling(p) << "), relative error";
        r.assertions.push_back(less(name.str(), rel_err(width, gamma_p2_weak_coupling(p)), bound));
    }
    return r;
}

ValidationReport second_order_consistency() {
    ValidationReport r;
    std::vector<double> gaps;
    for (double gamma_1 : {1e-2, 1e-3, 1e-4}) {
        HybridParams p = fig3_params();
        p.gamma_e = 0.0;
        p.gamma_1 = gamma_1;
        const ModelParams mp = p;
        const double full = g2_full(mp, default_drive(mp));
        gaps.push_back(rel_err(full, g2_hybrid_analytic(p)));
    }
    r.assertions.push_back(less("g2_full vs second-order estimate at gamma_1 = 1e-3, relative gap", gaps[1], 0.30));
    HybridParams p = fig3_params();
    p.gamma_e = 0.0;
    r.assertions.push_back(
        less("second-order estimate vs 3.70e-3, relative error", rel_err(g2_hybrid_analytic(p), 3.70e-3), 5e-3));
    r.assertions.push_back(less("gap(1e-3) - gap(1e-2) (monotone shrink)", gaps[1] - gaps[0], 0.0));
    r.assertions.push_back(less("gap(1e-4) - gap(1e-3) (monotone shrink)", gaps[2] - gaps[1], 0.0));
    return r;
}

// Returns the oracle g2 at the largest truncation.
double oracle_case(ValidationReport& r, const ModelParams& params, const std::vector<std::vector<int>>& truncations) {
    const auto drive = default_drive(params);
    const double omega = default_drive_amplitude(params);
    std::vector<TruncationSpec> specs;
    for (const auto& n : truncations) specs.push_back({n, omega});
    const auto report = convergence_check(params, drive, specs);
    const auto& last = report.results.back();
    const double g2 = g2_full(params, drive);
    const double g3 = g3_full(params, drive);
    r.assertions.push_back(less("|g2_oracle - g2_full| / g2_full", rel_err(last.g2, g2), 1e-2));
    r.assertions.push_back(less("|g3_oracle - g3_full| / g3_full", rel_err(last.g3, g3), 5e-2));
    r.assertions.push_back(less("successive truncation difference in g2", report.relative_differences.back(), 1e-3));
    r.assertions.push_back(
        less("oracle intensity / Omega^2 vs intensity_rel, relative error",
             rel_err(last.intensity / (omega * omega), intensity_full(params, drive)), 1e-2));
    r.assertions.push_back(less("g2 change under Omega -> Omega/2", report.drive_sensitivity, 1e-2));
    return last.g2;
}

ValidationReport oracle_quadratic() {
    ValidationReport r;
    oracle_case(r, headline_quadratic(), {{3, 4}, {4, 5}});
    return r;
}

ValidationReport oracle_hybrid() {
    ValidationReport r;
    const ModelParams p = fig3_params();
    const double g2_oracle = oracle_case(r, p, {{3, 3}, {4, 4}});
    r.assertions.push_back(
        less("frozen fig3 g2 vs oracle, relative difference", rel_err(g2_oracle, kFig3FrozenG2), 1e-5));
    return r;
}

ValidationReport fig3_phenomenology() {
    ValidationReport r;
    const ModelParams p = fig3_params();
    const auto drive = default_drive(p);
    PointOptions opts;
    opts.two_state = true;
    opts.tampered = true;
    const auto pt = evaluate_point(p, drive, opts);
    r.assertions.push_back(less("(a) |g2_two_state - g2_full| / g2_full", rel_err(*pt.g2_two_state, pt.g2), 0.10));
    r.assertions.push_back(within("(b) g2_tampered", pt.tampered->g2, 0.5, 2.0));
    r.assertions.push_back(less("(c) g3_full - g2_full", *pt.g3 - pt.g2, 0.0));
    r.assertions.push_back(less("(d) g2_full", pt.g2, 1e-2));
    r.assertions.push_back(less("g2_full vs frozen value, relative difference", rel_err(pt.g2, kFig3FrozenG2), 1e-8));
    return r;
}

ValidationReport supp_matrices() {
    ValidationReport r;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> rate(0.0, 1.0), coupling(0.0, 0.3), detuning(-1.0, 1.0);
    double worst_entry = 0.0;
    double worst_trace = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        HybridParams p;
        p.gamma_e = rate(rng);
        p.gamma_1 = rate(rng);
        p.gamma_2 = rate(rng);
        p.g_1 = coupling(rng);
        p.g_2 = coupling(rng);
        p.d = coupling(rng);
        p.delta_e = detuning(rng);
        p.delta_2 = detuning(rng);
        const auto [ref1, ref2] = reference_matrices_hybrid(p);
        const ComplexMatrix h1 = build_manifold_hamiltonian(p, 1);
        const ComplexMatrix h2 = build_manifold_hamiltonian(p, 2);
        worst_entry = std::max({worst_entry, (h1 - ref1).cwiseAbs().maxCoeff(), (h2 - ref2).cwiseAbs().maxCoeff()});
        for (const ComplexMatrix* h : {&h1, &h2}) {
            const auto es = eigendecompose(*h);
            cplx sum{0.0, 0.0};
            for (auto e : es.eigenvalues) sum += e;
            worst_trace = std::max(worst_trace, std::abs(sum - h->trace()));
        }
    }
    r.assertions.push_back(less("assembled vs transcribed manifold matrices, max entry difference", worst_entry, 1e-14));
    r.assertions.push_back(less("eigenvalue sum vs trace, max difference", worst_trace, 1e-10));

    HybridParams p = fig3_params();
    p.gamma_e = 0.0;
    p.gamma_1 = 0.0;
    p.g_1 = 0.0;
    const auto es = eigendecompose(build_manifold_hamiltonian(p, 1));
    std::size_t j0 = 0;
    for (std::size_t j = 1; j < es.dimension(); ++j) {
        if (std::abs(es.eigenvalues[j]) < std::abs(es.eigenvalues[j0])) j0 = j;
    }
    const ComplexVector z = p1_zeroth_order(p);
    const ComplexVector v = es.vector(j0);
    const double diff = std::min((v - z).norm(), (v + z).norm());
    r.assertions.push_back(less("|smallest q=1 eigenvalue| with gamma_e = gamma_1 = g_1 = 0", std::abs(es.eigenvalues[j0]), 1e-10));
    r.assertions.push_back(less("its eigenvector vs (-d, g_2, 0) normalized", diff, 1e-10));
    return r;
}

ValidationReport decoupling() {
    ValidationReport r;
    const ScanConfig fig2 = figure_preset("fig2");
    const auto d_values = fig2.axes.at(1).values();
    PointOptions opts;
    opts.g3 = false;
    opts.components = true;
    double max_n2_p1 = 0.0;
    double worst_step = std::numeric_limits<double>::infinity();
    double prev = kNaN;
    for (double d : d_values) {
        ModelParams p = fig2.params;
        set_parameter(p, "d", d);
        const auto pt = evaluate_point(p, default_drive(p), opts);
        max_n2_p1 = std::max(max_n2_p1, *pt.n2_p1);
        if (d >= 0.02 - 1e-12) {
            if (!std::isnan(prev)) worst_step = std::min(worst_step, *pt.n2_p2 - prev);
            prev = *pt.n2_p2;
        }
    }
    r.assertions.push_back(less("max N2(p1) over the fig2 d-axis", max_n2_p1, 1e-3));
    r.assertions.push_back({"smallest step of N2(p2) over d in [0.02, 0.2]", worst_step, ">", 0.0, 0.0, worst_step > 0.0});
    return r;
}

ValidationReport threshold_line() {
    ValidationReport r;
    const ScanConfig cfg = figure_preset("figS2");
    const Dataset ds = run_scan(cfg);
    const auto g2_values = cfg.axes[0].values();
    const auto d_values = cfg.axes[1].values();
    const std::size_t nd = d_values.size();
    double worst = 0.0;
    std::size_t columns_checked = 0;
    std::size_t missing = 0;
    for (std::size_t i = 0; i < g2_values.size(); ++i) {
        const double g_2 = g2_values[i];
        if (g_2 < 0.03 - 1e-12 || g_2 > 0.15 + 1e-12) continue;
        ++columns_checked;
        // First d where g2 drops from >= 1 to < 1, linearly interpolated.
        double crossing = kNaN;
        for (std::size_t k = 1; k < nd; ++k) {
            const double a = ds.number(i * nd + k - 1, "g2");
            const double b = ds.number(i * nd + k, "g2");
            if (a >= 1.0 && b < 1.0) {
                crossing = d_values[k - 1] + (a - 1.0) / (a - b) * (d_values[k] - d_values[k - 1]);
                break;
            }
        }
        const double expected = ds.number(i * nd, "d_threshold");
        if (std::isnan(crossing)) {
            ++missing;
            worst = std::numeric_limits<double>::infinity();
        } else {
            worst = std::max(worst, rel_err(crossing, expected));
        }
    }
    r.assertions.push_back(at_most("g_2 columns without a g2 = 1 crossing from above", static_cast<double>(missing), 0.0));
    r.assertions.push_back(less("crossing d vs nhpb_threshold_d(g_2), max relative error over " +
                                    std::to_string(columns_checked) + " columns",
                                worst, 0.25));
    return r;
}

ValidationReport invariances() {
    ValidationReport r;
    const ModelParams base = fig3_params();
    DriveSpec drive = default_drive(base, 0.05);
    for (double lambda : {0.1, 10.0}) {
        const ModelParams s = scaled(base, lambda);
        DriveSpec sd = drive;
        sd.omega_L_detuning *= lambda;
        const std::string tag = " under scaling by " + format_number(lambda);
        r.assertions.push_back(less("g2 change" + tag, rel_err(g2_full(s, sd), g2_full(base, drive)), 1e-9));
        r.assertions.push_back(less("g3 change" + tag, rel_err(g3_full(s, sd), g3_full(base, drive)), 1e-9));
        r.assertions.push_back(less("intensity_rel * lambda^2 change" + tag,
                                    rel_err(intensity_full(s, sd) * lambda * lambda, intensity_full(base, drive)), 1e-9));
    }

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        ModelParams p;
        if (k % 2 == 0) {
            HybridParams h;
            h.gamma_e = log_uniform(1e-5, 1e-2);
            h.gamma_1 = log_uniform(1e-4, 1e-1);
            h.g_1 = uniform(0.0, 0.05);
            h.g_2 = uniform(0.01, 0.2);
            h.d = uniform(0.01, 0.2);
            h.delta_e = uniform(-0.5, 0.5);
            h.delta_2 = uniform(-0.5, 0.5);
            p = h;
        } else {
            QuadraticParams q;
            q.gamma_b = log_uniform(1e-3, 1.0);
            q.g = uniform(0.01, 0.5);
            q.delta_a = uniform(-0.5, 0.5);
            p = q;
        }
        const auto d = default_drive(p, uniform(-1.0, 1.0));
        const SpectralModel model(p, d.pump, d.detect, 3);
        const auto spec = spectral_correlations(model, d.laser_offset());
        worst = std::max({worst, rel_err(spec.intensity_rel, intensity_full(p, d)), rel_err(spec.g2, g2_full(p, d)),
                          rel_err(*spec.g3, g3_full(p, d))});
    }
    r.assertions.push_back(less("amplitude vs eigenstate-sum correlators, max relative difference (100 points)", worst, 1e-9));
    return r;
}

ValidationReport determinism() {
    ValidationReport r;
    const ScanConfig fig2 = figure_preset("fig2");
    const Dataset first = run_scan(fig2, 1);
    const std::string a = to_csv(first);
    const std::string b = to_csv(run_scan(fig2, 1));
    const std::string c = to_csv(run_scan(fig2, 8));
    r.assertions.push_back(holds("fig2 CSV identical across two runs", a == b));
    r.assertions.push_back(holds("fig2 CSV identical for 1 and 8 threads", a == c));

    std::size_t failed = 0;
    for (std::size_t i = 0; i < first.rows.size(); ++i) {
        if (first.text(i, "status") != "ok") ++failed;
    }
    r.assertions.push_back(at_most("fig2 failed rows", static_cast<double>(failed), 0.0));
    // Δω_L = 0 is the middle of the first axis, d = 0.1 the middle of the second.
    const std::size_t nd = fig2.axes[1].steps;
    const std::size_t row = (static_cast<std::size_t>(fig2.axes[0].steps) / 2) * nd + nd / 2;
    r.assertions.push_back(less("fig2 g2 at d = 0.1, omega_L detuning = 0", first.number(row, "g2"), 1e-2));
    return r;
}

ValidationReport presets_clean() {
    ValidationReport r;
    for (const auto& name : figure_names()) {
        const Dataset ds = run_scan(figure_preset(name));
        std::size_t failed = 0;
        for (std::size_t i = 0; i < ds.rows.size(); ++i) {
            if (ds.text(i, "status") != "ok") ++failed;
        }
        r.assertions.push_back(at_most(name + " failed rows", static_cast<double>(failed), 0.0));
    }
    return r;
}

using CaseFn = std::function<ValidationReport()>;

const std::vector<std::pair<std::string, CaseFn>>& registry() {
    static const std::vector<std::pair<std::string, CaseFn>> cases{
        {"quadratic-resonance", quadratic_resonance},
        {"width-law", width_law},
        {"second-order-consistency", second_order_consistency},
        {"oracle-quadratic", oracle_quadratic},
        {"oracle-hybrid", oracle_hybrid},
        {"fig3-phenomenology", fig3_phenomenology},
        {"supp-matrices", supp_matrices},
        {"decoupling", decoupling},
        {"threshold-line", threshold_line},
        {"invariances", invariances},
        {"determinism", determinism},
        {"presets-clean", presets_clean},
    };
    return cases;
}

} // namespace

std::string Assertion::describe() const {
    std::ostringstream out;
    out << (pass ? "PASS" : "FAIL") << "  " << name << ": " << format_number(measured) << ' ' << relation << ' ';
    if (relation == "in") {
        out << '[' << format_number(bound) << ", " << format_number(bound_high) << ']';
    } else {
        out << format_number(bound);
    }
    return out.str();
}

bool ValidationReport::passed() const {
    return !assertions.empty() &&
           std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

std::vector<std::string> validation_cases() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

ValidationReport run_validation(std::string_view case_name) {
    for (const auto& [name, fn] : registry()) {
        if (name == case_name) {
            const auto start = std::chrono::steady_clock::now();
            ValidationReport r = fn();
            r.case_name = name;
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return r;
        }
    }
    throw Error(ErrorCode::unknown_case, "no validation case named '" + std::string(case_name) + "'");
}

std::vector<ValidationReport> run_all_validations() {
    std::vector<ValidationReport> out;
    for (const auto& name : validation_cases()) out.push_back(run_validation(name));
    return out;
}

} // namespace nhpb
