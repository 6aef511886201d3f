// test_scan.cpp — Configs, presets, grid evaluation and dataset serialization

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "nhpb/correlations.hpp"
#include "nhpb/dataset_io.hpp"
#include "nhpb/errors.hpp"
#include "nhpb/presets.hpp"
#include "nhpb/scan.hpp"
#include "nhpb/scan_config.hpp"

using namespace nhpb;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no nhpb::Error thrown";
    return ErrorCode::io_error;
}

std::string error_text(const std::string& json) {
    try {
        parse_config(json);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

bool bit_equal(const Cell& a, const Cell& b) {
    if (a.index() != b.index()) return false;
    if (const auto* x = std::get_if<double>(&a)) {
        const double y = std::get<double>(b);
        return std::memcmp(x, &y, sizeof(double)) == 0 || (std::isnan(*x) && std::isnan(y));
    }
    return a == b;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("nhpb_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kQuadraticPoint = R"({"name": "q", "model": "quadratic", "params": {"gamma_b": 1e-3, "g": 0.1}})";

} // namespace

TEST(Config, MinimalQuadratic) {
    const auto c = parse_config(kQuadraticPoint);
    ASSERT_TRUE(std::holds_alternative<QuadraticParams>(c.params));
    EXPECT_DOUBLE_EQ(std::get<QuadraticParams>(c.params).g, 0.1);
    EXPECT_EQ(c.drive.pump, Port::mode_port(1));
    EXPECT_TRUE(c.axes.empty());
}

TEST(Config, UnknownKeysAreRejected) {
    EXPECT_NE(error_text(R"({"model": "hybrid", "paramz": {}})").find("paramz"), std::string::npos);
    EXPECT_NE(error_text(R"({"model": "hybrid", "params": {"gamma_3": 1}})").find("params.gamma_3"), std::string::npos);
    EXPECT_NE(error_text(R"({"model": "hybrid", "drive": {"pump": "a1"}})").find("drive.pump"), std::string::npos);
    EXPECT_NE(error_text(R"({"model": "hybrid", "axes": [{"parameter": "d", "from": 0, "to": 1, "steps": 3, "log": true}]})")
                  .find("axes[0].log"),
              std::string::npos);
}

TEST(Config, FieldLevelValidation) {
    EXPECT_NE(error_text(R"({"model": "cubic"})").find("model"), std::string::npos);
    EXPECT_NE(error_text(R"({"model": "hybrid", "axes": [{"parameter": "g", "from": 0, "to": 1, "steps": 3}]})")
                  .find("axes[0].parameter"),
              std::string::npos);
    EXPECT_NE(error_text(R"({"model": "hybrid", "axes": [{"parameter": "d", "from": 0, "to": 1, "steps": 1}]})")
                  .find("axes[0].steps"),
              std::string::npos);
    EXPECT_NE(error_text(R"({"model": "hybrid", "axes": [{"parameter": "d", "from": 1, "to": 0, "steps": 3}]})")
                  .find("axes[0]"),
              std::string::npos);
    EXPECT_NE(error_text(R"({"model": "hybrid", "axes": [{"parameter": "d", "from": 0, "to": 1, "steps": 3, "linear": false}]})")
                  .find("from > 0"),
              std::string::npos);
    EXPECT_NE(error_text(R"({"model": "hybrid", "params": {"gamma_1": -1}})").find("params"), std::string::npos);
    EXPECT_NE(error_text(R"({"model": "hybrid", "outputs": ["g4"]})").find("g4"), std::string::npos);
    EXPECT_NE(error_text("{not json").find("malformed"), std::string::npos);
    EXPECT_EQ(code_of([] { parse_config(R"({"model": "hybrid", "steps": 2})"); }), ErrorCode::config_error);
}

TEST(Config, JsonRoundTrip) {
    for (const auto& name : figure_names()) {
        const ScanConfig c = figure_preset(name);
        const std::string text = config_to_json(c);
        EXPECT_EQ(config_to_json(parse_config(text)), text) << name;
    }
}

TEST(Config, MissingFileIsIoError) {
    EXPECT_EQ(code_of([] { load_config("/nonexistent/config.json"); }), ErrorCode::io_error);
}

TEST(Presets, FigureThree) {
    const auto c = figure_preset("fig3");
    const auto& h = std::get<HybridParams>(c.params);
    EXPECT_DOUBLE_EQ(h.d, 0.1);
    EXPECT_DOUBLE_EQ(h.gamma_1, 1e-3);
    EXPECT_DOUBLE_EQ(h.gamma_e, 1e-5);
    EXPECT_DOUBLE_EQ(h.g_2, 1.0 / 15.0);
    EXPECT_EQ(c.outputs, (std::set<Output>{Output::intensity, Output::g2, Output::g3, Output::two_state, Output::tampered}));
}

TEST(Presets, FigureS2HasThresholdColumn) {
    const auto c = figure_preset("figS2");
    ASSERT_EQ(c.axes.size(), 2u);
    EXPECT_EQ(c.axes[0].parameter, "g_2");
    EXPECT_EQ(c.axes[1].parameter, "d");
    EXPECT_TRUE(c.threshold_line);
    const auto cols = dataset_columns(c);
    EXPECT_NE(std::find(cols.begin(), cols.end(), "d_threshold"), cols.end());
}

TEST(Presets, FigureS4ScansDelta2) {
    const auto c = figure_preset("figS4");
    EXPECT_EQ(c.axes.at(1).parameter, "delta_2");
    EXPECT_DOUBLE_EQ(c.axes[1].from, -2.0);
    EXPECT_EQ(c.outputs, (std::set<Output>{Output::g2, Output::eigs, Output::components}));
}

TEST(Presets, FigureS1AndS3Specifics) {
    EXPECT_DOUBLE_EQ(std::get<HybridParams>(figure_preset("figS1").params).d, 1.0 / 15.0);
    const auto s3 = figure_preset("figS3");
    ASSERT_EQ(s3.ties.size(), 1u);
    const auto p = point_params(s3, {0.0, 0.167});
    EXPECT_NEAR(std::get<HybridParams>(p).g_1, 0.167 / 83.5, 1e-15);
}

TEST(Presets, UnknownName) {
    EXPECT_EQ(code_of([] { figure_preset("fig9"); }), ErrorCode::unknown_preset);
}

TEST(Scan, SinglePointQuadratic) {
    const auto ds = run_scan(parse_config(kQuadraticPoint), 1);
    ASSERT_EQ(ds.rows.size(), 1u);
    EXPECT_EQ(ds.text(0, "model"), "quadratic");
    EXPECT_EQ(ds.text(0, "status"), "ok");
    EXPECT_LT(std::abs(ds.number(0, "g2") * 1681.0 - 1.0), 1e-8);
    EXPECT_TRUE(std::holds_alternative<std::monostate>(ds.rows[0][ds.column("g3")]));
}

TEST(Scan, ColumnLayout) {
    const auto cols = dataset_columns(figure_preset("fig2"));
    const std::vector<std::string> head{"model", "omega_l_detuning", "d", "I_rel", "g2", "g3", "g2_two_state",
                                        "g2_tampered", "Gamma_p1", "Gamma_p2", "N2_p1", "N2_p2", "status"};
    ASSERT_GE(cols.size(), head.size());
    EXPECT_TRUE(std::equal(head.begin(), head.end(), cols.begin()));
}

TEST(Scan, RowMajorOrder) {
    ScanConfig c = figure_preset("fig3");
    c.axes = {{"d", 0.05, 0.1, 2, true}, {std::string(kDetuningAxis), -0.1, 0.1, 3, true}};
    const auto ds = run_scan(c, 2);
    ASSERT_EQ(ds.rows.size(), 6u);
    EXPECT_DOUBLE_EQ(ds.number(0, "d"), 0.05);
    EXPECT_DOUBLE_EQ(ds.number(2, "d"), 0.05);
    EXPECT_DOUBLE_EQ(ds.number(3, "d"), 0.1);
    EXPECT_DOUBLE_EQ(ds.number(1, "omega_l_detuning"), 0.0);
    // Every row must reproduce a direct evaluation.
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        ModelParams p = c.params;
        set_parameter(p, "d", ds.number(i, "d"));
        const double expected = g2_full(p, default_drive(p, ds.number(i, "omega_l_detuning")));
        EXPECT_DOUBLE_EQ(ds.number(i, "g2"), expected);
    }
}

TEST(Scan, NearlyDegenerateAxis) {
    ScanConfig c = figure_preset("fig3");
    c.axes = {{"d", 0.1, 0.1 + 1e-12, 2, true}};
    const auto ds = run_scan(c, 1);
    ASSERT_EQ(ds.rows.size(), 2u);
    EXPECT_NEAR(ds.number(0, "g2") / ds.number(1, "g2"), 1.0, 1e-9);
}

TEST(Scan, FailedPointsCarryReasonCodes) {
    ScanConfig c = parse_config(R"({"model": "quadratic", "params": {"gamma_a": 0, "gamma_b": 0, "g": 0},
        "axes": [{"parameter": "omega_l_detuning", "from": 0, "to": 0.5, "steps": 2}]})");
    const auto ds = run_scan(c, 1);
    EXPECT_EQ(ds.text(0, "status"), "singular_resolvent");
    EXPECT_TRUE(std::isnan(ds.number(0, "g2")));
    EXPECT_DOUBLE_EQ(ds.number(0, "omega_l_detuning"), 0.0);
    EXPECT_EQ(ds.text(1, "status"), "ok");
}

TEST(Scan, ThreadCountDoesNotChangeOutput) {
    ScanConfig c = figure_preset("fig2");
    c.axes[0].steps = 21;
    c.axes[1].steps = 11;
    EXPECT_EQ(to_csv(run_scan(c, 1)), to_csv(run_scan(c, 4)));
}

TEST(Scan, ThreadCapFromEnvironment) {
    ::setenv("NHPB_THREADS", "3", 1);
    EXPECT_EQ(worker_count(8), 3u);
    EXPECT_EQ(worker_count(2), 2u);
    ::setenv("NHPB_THREADS", "junk", 1);
    EXPECT_EQ(worker_count(8), 8u);
    ::unsetenv("NHPB_THREADS");
    EXPECT_EQ(worker_count(5), 5u);
}

TEST(Scan, OracleColumns) {
    ScanConfig c = parse_config(kQuadraticPoint);
    c.oracle.enabled = true;
    const auto ds = run_scan(c, 1);
    EXPECT_LT(std::abs(ds.number(0, "g2_oracle") / ds.number(0, "g2") - 1.0), 1e-2);
    EXPECT_LT(std::abs(ds.number(0, "I_rel_oracle") / ds.number(0, "I_rel") - 1.0), 1e-2);
}

TEST(Dataset, EmptyIsHeaderOnly) {
    Dataset ds;
    ds.columns = {"model", "g2", "status"};
    EXPECT_EQ(to_csv(ds), "model,g2,status\n");
}

TEST(Dataset, OneRowIsTwoLines) {
    const auto csv = to_csv(run_scan(parse_config(kQuadraticPoint), 1));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
    EXPECT_EQ(csv.back(), '\n');
}

TEST(Dataset, ShortestRoundTripNumbers) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(-HUGE_VAL), "-inf");
}

TEST(Dataset, JsonRoundTripIsBitExact) {
    ScanConfig c = figure_preset("fig3");
    c.axes[0].steps = 7;
    Dataset ds = run_scan(c, 1);
    ds.rows[2][ds.column("g2")] = std::nan("");
    ds.rows[3][ds.column("g2")] = HUGE_VAL;
    const Dataset back = parse_json(to_json(ds));
    ASSERT_EQ(back.columns, ds.columns);
    ASSERT_EQ(back.rows.size(), ds.rows.size());
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        for (std::size_t k = 0; k < ds.columns.size(); ++k) {
            EXPECT_TRUE(bit_equal(ds.rows[i][k], back.rows[i][k])) << "row " << i << " column " << ds.columns[k];
        }
    }
}

TEST(Dataset, CsvRoundTripIsBitExact) {
    ScanConfig c = figure_preset("fig2");
    c.axes[0].steps = 5;
    c.axes[1].steps = 4;
    const Dataset ds = run_scan(c, 1);
    const Dataset back = parse_csv(to_csv(ds));
    ASSERT_EQ(back.rows.size(), ds.rows.size());
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        for (std::size_t k = 0; k < ds.columns.size(); ++k) EXPECT_TRUE(bit_equal(ds.rows[i][k], back.rows[i][k]));
    }
}

TEST(Dataset, WritesCsvWithSidecar) {
    const auto dir = temp_dir("csv");
    const Dataset ds = run_scan(parse_config(kQuadraticPoint), 1);
    const auto path = write_dataset(ds, dir, DatasetFormat::csv);
    EXPECT_EQ(path, dir / "q.csv");
    EXPECT_EQ(slurp(path), to_csv(ds));
    EXPECT_NE(slurp(dir / "q.meta.json").find("\"version\""), std::string::npos);
    const auto json_path = write_dataset(ds, dir, DatasetFormat::json);
    EXPECT_EQ(read_dataset(json_path).rows.size(), 1u);
    std::filesystem::remove_all(dir);
}

TEST(Dataset, IoErrorNamesThePath) {
    Dataset ds;
    ds.name = "x";
    ds.columns = {"model"};
    try {
        write_dataset(ds, "/proc/nhpb_cannot_write_here", DatasetFormat::csv);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::io_error);
        EXPECT_NE(std::string(e.what()).find("/proc/nhpb_cannot_write_here"), std::string::npos);
    }
}

TEST(Dataset, FormatNames) {
    EXPECT_EQ(parse_format("json"), DatasetFormat::json);
    EXPECT_EQ(code_of([] { parse_format("xml"); }), ErrorCode::config_error);
}
