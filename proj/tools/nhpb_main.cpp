// nhpb_main.cpp — Command-line front end: scan, figure, validate, eig

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nhpb/correlations.hpp"
#include "nhpb/dataset_io.hpp"
#include "nhpb/eigensolver.hpp"
#include "nhpb/errors.hpp"
#include "nhpb/presets.hpp"
#include "nhpb/scan.hpp"
#include "nhpb/scan_config.hpp"
#include "nhpb/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

int exit_code_for(const nhpb::Error& e) {
    switch (e.code()) {
    case nhpb::ErrorCode::config_error:
    case nhpb::ErrorCode::unknown_preset:
    case nhpb::ErrorCode::unknown_case:
    case nhpb::ErrorCode::io_error:
        return kExitConfig;
    default:
        return kExitValidation;
    }
}

int write_scan(const nhpb::ScanConfig& config, const std::string& out_dir, const std::string& format, unsigned threads) {
    const auto fmt = nhpb::parse_format(format);
    const auto ds = nhpb::run_scan(config, threads);
    const auto path = nhpb::write_dataset(ds, out_dir, fmt);
    std::size_t failed = 0;
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        if (ds.text(i, "status") != "ok") ++failed;
    }
    std::cout << path.string() << ": " << ds.rows.size() << " rows, " << failed << " failed\n";
    return kExitOk;
}

int run_validate(const std::string& which) {
    std::vector<nhpb::ValidationReport> reports;
    if (which == "all") {
        for (const auto& name : nhpb::validation_cases()) {
            reports.push_back(nhpb::run_validation(name));
        }
    } else {
        reports.push_back(nhpb::run_validation(which));
    }
    bool ok = true;
    for (const auto& r : reports) {
        std::cout << (r.passed() ? "[PASS] " : "[FAIL] ") << r.case_name << " (" << r.seconds << " s)\n";
        for (const auto& a : r.assertions) std::cout << "    " << a.describe() << '\n';
        ok = ok && r.passed();
    }
    return ok ? kExitOk : kExitValidation;
}

int run_eig(const std::string& config_path, int q) {
    const auto config = nhpb::load_config(config_path);
    const auto& params = config.params;
    const auto basis = nhpb::enumerate_manifold(nhpb::layout_of(params), q);
    const auto es = nhpb::eigendecompose(nhpb::build_manifold_hamiltonian(params, basis));

    std::optional<nhpb::SpectralModel> model;
    if (q >= 1 && q <= nhpb::kMaxManifold) {
        model.emplace(params, config.drive.pump, config.drive.detect, q, config.accessibility_threshold);
    }
    std::cout << "model " << nhpb::model_name(params) << ", manifold q = " << q << ", dimension " << basis.size()
              << "\nbasis:";
    for (const auto& s : basis.states) std::cout << ' ' << nhpb::describe(basis.layout, s);
    std::cout << "\n#  E  Gamma  |access|\n";
    for (std::size_t j = 0; j < es.dimension(); ++j) {
        std::cout << j << "  " << nhpb::format_number(es.energy(j)) << "  " << nhpb::format_number(es.width(j));
        if (model) {
            std::cout << "  " << nhpb::format_number(std::abs(model->access_amplitudes(q)[static_cast<Eigen::Index>(j)]));
            if (model->narrowest(q) == j) std::cout << "  <- narrowest accessible";
        }
        std::cout << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak-drive photon statistics of non-Hermitian photon blockade"};
    app.set_version_flag("--version", std::string(nhpb::library_version()));
    app.require_subcommand(1);

    std::string config_path, out_dir, format = "csv", figure, case_name;
    unsigned threads = 0;
    int manifold = 1;

    auto* scan = app.add_subcommand("scan", "Run a parameter sweep from a JSON config");
    scan->add_option("--config", config_path, "config file")->required();
    scan->add_option("--out", out_dir, "output directory")->required();
    scan->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    scan->add_option("--threads", threads, "worker threads (0: all cores; NHPB_THREADS caps)");

    auto* fig = app.add_subcommand("figure", "Write the dataset of a named figure preset");
    fig->add_option("name", figure, "fig2, fig3, figS1 ... figS5")->required();
    fig->add_option("--out", out_dir, "output directory")->required();
    fig->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    fig->add_option("--threads", threads, "worker threads (0: all cores; NHPB_THREADS caps)");

    auto* val = app.add_subcommand("validate", "Run a validation case, or all of them");
    val->add_option("case", case_name, "case name or 'all'")->required();

    auto* eig = app.add_subcommand("eig", "Print the eigenstates of one excitation manifold");
    eig->add_option("--config", config_path, "config file")->required();
    eig->add_option("--manifold", manifold, "excitation number q")->required()->check(CLI::Range(0, 8));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*scan) return write_scan(nhpb::load_config(config_path), out_dir, format, threads);
        if (*fig) return write_scan(nhpb::figure_preset(figure), out_dir, format, threads);
        if (*val) return run_validate(case_name);
        if (*eig) return run_eig(config_path, manifold);
    } catch (const nhpb::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}
