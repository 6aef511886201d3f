#include "nhpb/scan.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json_support.hpp"
#include "nhpb/correlations.hpp"
#include "nhpb/errors.hpp"
#include "nhpb/lindblad_oracle.hpp"

#ifndef NHPB_VERSION
#define NHPB_VERSION "0.0.0"
#endif

namespace nhpb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sizes of the first two manifolds, which fix the Gamma_q*_j column count.
std::pair<std::size_t, std::size_t> manifold_sizes(const ModelParams& params) {
    const auto layout = layout_of(params);
    return {enumerate_manifold(layout, 1).size(), enumerate_manifold(layout, 2).size()};
}

// Row-major enumeration of the axis grid.
std::vector<std::vector<double>> grid_points(const ScanConfig& config) {
    std::vector<std::vector<double>> axis_values;
    for (const auto& a : config.axes) axis_values.push_back(a.values());
    std::vector<std::vector<double>> points{{}};
    for (const auto& values : axis_values) {
        std::vector<std::vector<double>> next;
        next.reserve(points.size() * values.size());
        for (const auto& prefix : points) {
            for (double v : values) {
                auto p = prefix;
                p.push_back(v);
                next.push_back(std::move(p));
            }
        }
        points = std::move(next);
    }
    return points;
}

struct RowBuilder {
    const std::vector<std::string>& columns;
    std::vector<Cell> cells;

    explicit RowBuilder(const std::vector<std::string>& cols) : columns(cols), cells(cols.size()) {}

    void set(std::string_view name, Cell value) {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) {
            throw std::logic_error("dataset has no column " + std::string(name));
        }
        cells[static_cast<std::size_t>(it - columns.begin())] = std::move(value);
    }
    void set_opt(std::string_view name, const std::optional<double>& v) {
        if (v) set(name, *v);
    }
};

std::vector<Cell> evaluate_row(const ScanConfig& config, const std::vector<std::string>& columns,
                               const std::vector<double>& axis_values) {
    RowBuilder row(columns);
    row.set("model", std::string(model_name(config.params)));
    for (std::size_t k = 0; k < config.axes.size(); ++k) {
        row.set(config.axes[k].parameter, axis_values[k]);
    }

    const bool want_g3 = config.wants(Output::g3);
    const bool want_tampered = config.wants(Output::tampered);
    const bool want_eigs = config.wants(Output::eigs);
    const bool want_components = config.wants(Output::components);
    const auto [n_q1, n_q2] = manifold_sizes(config.params);

    const ModelParams params = point_params(config, axis_values);
    const DriveSpec drive = point_drive(config, axis_values);

    try {
        PointOptions opts;
        opts.g3 = want_g3;
        opts.two_state = config.wants(Output::two_state);
        opts.tampered = want_tampered;
        opts.components = want_components;
        opts.accessibility_threshold = config.accessibility_threshold;
        const CorrelationPoint pt = evaluate_point(params, drive, opts);

        if (config.wants(Output::intensity)) row.set("I_rel", pt.intensity_rel);
        if (config.wants(Output::g2)) row.set("g2", pt.g2);
        if (want_g3) row.set_opt("g3", pt.g3);
        row.set_opt("g2_two_state", pt.g2_two_state);
        if (pt.tampered) {
            row.set("g2_tampered", pt.tampered->g2);
            row.set("I_rel_tampered", pt.tampered->intensity_rel);
            if (want_g3) row.set_opt("g3_tampered", pt.tampered->g3);
        }
        if (want_eigs) {
            row.set("Gamma_p1", pt.gamma_p1);
            row.set("Gamma_p2", pt.gamma_p2);
            row.set("E_p1", pt.energy_p1);
            row.set("E_p2", pt.energy_p2);
            for (std::size_t j = 0; j < n_q1; ++j) row.set("Gamma_q1_" + std::to_string(j), pt.widths_q1.at(j));
            for (std::size_t j = 0; j < n_q2; ++j) row.set("Gamma_q2_" + std::to_string(j), pt.widths_q2.at(j));
        }
        if (want_components) {
            row.set_opt("N2_p1", pt.n2_p1);
            row.set_opt("N2_p2", pt.n2_p2);
            row.set_opt("N1_p1", pt.n1_p1);
            row.set_opt("N1_p2", pt.n1_p2);
        }
        if (config.wants(Output::analytic)) {
            // Closed forms are resonant estimates; outside their domain the cell is NaN.
            double value = kNaN;
            try {
                if (const auto* q = std::get_if<QuadraticParams>(&params)) {
                    value = g2_quadratic_analytic(*q);
                } else {
                    value = g2_hybrid_analytic(std::get<HybridParams>(params));
                }
            } catch (const Error&) {
            }
            row.set("g2_analytic", value);
        }
        if (config.threshold_line) {
            const auto& h = std::get<HybridParams>(params);
            row.set("d_threshold", nhpb_threshold_d(h.g_2, h.gamma_1, h.gamma_2));
        }
        if (config.oracle.enabled) {
            TruncationSpec trunc = default_truncation(params);
            if (config.oracle.omega) trunc.drive_amplitude = *config.oracle.omega;
            if (config.oracle.n_max) trunc.n_max = *config.oracle.n_max;
            const auto oc = run_oracle(params, drive, trunc);
            row.set("I_rel_oracle", oc.intensity / (trunc.drive_amplitude * trunc.drive_amplitude));
            row.set("g2_oracle", oc.g2);
            row.set("g3_oracle", oc.g3);
        }
        row.set("status", std::string("ok"));
    } catch (const Error& e) {
        // Keep model and axis values; every observable becomes NaN.
        for (std::size_t k = 1 + config.axes.size(); k < columns.size(); ++k) {
            row.cells[k] = kNaN;
        }
        row.set("status", std::string(to_string(e.code())));
    }
    return row.cells;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string_view library_version() noexcept { return NHPB_VERSION; }

std::size_t Dataset::column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw std::out_of_range("dataset has no column " + std::string(name));
    }
    return static_cast<std::size_t>(it - columns.begin());
}

bool Dataset::has_column(std::string_view name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

double Dataset::number(std::size_t row, std::string_view column_name) const {
    const auto& cell = rows.at(row).at(column(column_name));
    if (const auto* d = std::get_if<double>(&cell)) return *d;
    return kNaN;
}

const std::string& Dataset::text(std::size_t row, std::string_view column_name) const {
    return std::get<std::string>(rows.at(row).at(column(column_name)));
}

std::vector<std::string> dataset_columns(const ScanConfig& config) {
    std::vector<std::string> cols{"model"};
    for (const auto& a : config.axes) cols.push_back(a.parameter);
    for (const char* c : {"I_rel", "g2", "g3", "g2_two_state", "g2_tampered", "Gamma_p1", "Gamma_p2", "N2_p1", "N2_p2",
                          "status"}) {
        cols.emplace_back(c);
    }
    if (config.wants(Output::tampered)) {
        cols.emplace_back("I_rel_tampered");
        if (config.wants(Output::g3)) cols.emplace_back("g3_tampered");
    }
    if (config.wants(Output::components)) {
        cols.emplace_back("N1_p1");
        cols.emplace_back("N1_p2");
    }
    if (config.wants(Output::eigs)) {
        cols.emplace_back("E_p1");
        cols.emplace_back("E_p2");
        const auto [n1, n2] = manifold_sizes(config.params);
        for (std::size_t j = 0; j < n1; ++j) cols.push_back("Gamma_q1_" + std::to_string(j));
        for (std::size_t j = 0; j < n2; ++j) cols.push_back("Gamma_q2_" + std::to_string(j));
    }
    if (config.wants(Output::analytic)) cols.emplace_back("g2_analytic");
    if (config.threshold_line) cols.emplace_back("d_threshold");
    if (config.oracle.enabled) {
        cols.emplace_back("I_rel_oracle");
        cols.emplace_back("g2_oracle");
        cols.emplace_back("g3_oracle");
    }
    return cols;
}

unsigned worker_count(unsigned requested) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NHPB_THREADS")) {
        unsigned cap = 0;
        const char* end = env + std::char_traits<char>::length(env);
        const auto [ptr, ec] = std::from_chars(env, end, cap);
        if (ec == std::errc{} && ptr == end && cap > 0) n = std::min(n, cap);
    }
    return n;
}

ModelParams point_params(const ScanConfig& config, const std::vector<double>& axis_values) {
    ModelParams p = config.params;
    for (std::size_t k = 0; k < config.axes.size(); ++k) {
        if (config.axes[k].parameter != kDetuningAxis) set_parameter(p, config.axes[k].parameter, axis_values.at(k));
    }
    for (const auto& t : config.ties) {
        set_parameter(p, t.target, t.scale * get_parameter(p, t.source));
    }
    return p;
}

DriveSpec point_drive(const ScanConfig& config, const std::vector<double>& axis_values) {
    DriveSpec d = config.drive;
    for (std::size_t k = 0; k < config.axes.size(); ++k) {
        if (config.axes[k].parameter == kDetuningAxis) d.omega_L_detuning = axis_values.at(k);
    }
    return d;
}

Dataset run_scan(const ScanConfig& config, unsigned threads) {
    validate_config(config);

    Dataset ds;
    ds.name = config.name;
    ds.columns = dataset_columns(config);

    const auto points = grid_points(config);
    ds.rows.resize(points.size());

    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(1, points.size())));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                ds.rows[i] = evaluate_row(config, ds.columns, points[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = points.size();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::size_t failed = 0;
    const std::size_t status_col = ds.column("status");
    for (const auto& r : ds.rows) {
        if (std::get<std::string>(r[status_col]) != "ok") ++failed;
    }

    nlohmann::ordered_json meta;
    meta["name"] = config.name;
    meta["version"] = std::string(library_version());
    meta["config"] = detail::config_json(config);
    meta["thresholds"] = {{"accessibility_threshold", config.accessibility_threshold},
                          {"symmetry_tolerance", EigenOptions{}.symmetry_tolerance},
                          {"self_orthogonality_tolerance", EigenOptions{}.self_orthogonality_tolerance}};
    meta["units"] = "rates, couplings and detunings in units of the broad decay rate; I_rel = I / |Omega|^2";
    if (config.oracle.enabled) {
        const auto trunc = default_truncation(config.params);
        meta["oracle"] = {{"omega", config.oracle.omega.value_or(trunc.drive_amplitude)},
                          {"n_max", config.oracle.n_max.value_or(trunc.n_max)}};
    }
    meta["rows"] = ds.rows.size();
    meta["failed_rows"] = failed;
    meta["threads"] = workers;
    meta["generated_at"] = utc_timestamp();
    ds.metadata_json = meta.dump(2);
    return ds;
}

} // namespace nhpb
