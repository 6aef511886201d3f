// scan.hpp — Grid evaluation of a ScanConfig into a tabular dataset

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nhpb/scan_config.hpp"

namespace nhpb {

std::string_view library_version() noexcept;

// Empty (output not requested), number (NaN for failed points) or text.
using Cell = std::variant<std::monostate, double, std::string>;

struct Dataset {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::string metadata_json; // run description, written next to the data

    // Throws std::out_of_range for an unknown column.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
    // NaN for empty cells.
    double number(std::size_t row, std::string_view column_name) const;
    const std::string& text(std::size_t row, std::string_view column_name) const;
};

// Leading columns every dataset carries, with the axis names inserted after "model".
// Extra columns requested by the config follow "status".
std::vector<std::string> dataset_columns(const ScanConfig& config);

// Workers actually used: `requested` (0 = hardware concurrency), capped by the
// NHPB_THREADS environment variable when set.
unsigned worker_count(unsigned requested = 0);

// Rows follow row-major axis order: the first axis varies slowest. A point that
// fails carries NaN observables and its error code in "status"; the scan itself
// only throws for an invalid config.
Dataset run_scan(const ScanConfig& config, unsigned threads = 0);

// The parameter set of one grid point (axis values and ties applied).
ModelParams point_params(const ScanConfig& config, const std::vector<double>& axis_values);
DriveSpec point_drive(const ScanConfig& config, const std::vector<double>& axis_values);

} // namespace nhpb
