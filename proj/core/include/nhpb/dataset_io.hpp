// dataset_io.hpp — CSV / JSON serialization of scan datasets
//
// CSV: header line, then one comma-separated line per row. Numbers use the shortest
// decimal that round-trips, non-finite values are written nan / inf / -inf and empty
// cells stay empty. The metadata goes to a sidecar <name>.meta.json so the CSV itself
// is a pure function of the config.
// JSON: {"metadata": {...}, "columns": [...], "rows": [{column: value, ...}, ...]}
// with null for empty cells and the strings "nan" / "inf" / "-inf" for non-finite
// numbers.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nhpb/scan.hpp"

namespace nhpb {

enum class DatasetFormat { csv, json };

// Throws Error(config_error) for anything but "csv" / "json".
DatasetFormat parse_format(std::string_view name);

std::string format_number(double value);
std::string to_csv(const Dataset& ds);
std::string to_json(const Dataset& ds, int indent = 2);

// Writes <dir>/<name>.csv plus <name>.meta.json, or <dir>/<name>.json; creates the
// directory when needed and returns the data file path. Throws Error(io_error).
std::filesystem::path write_dataset(const Dataset& ds, const std::filesystem::path& dir, DatasetFormat format);

// Inverses of to_csv / to_json. Columns named "model" and "status" hold text,
// all others numbers. Throws Error(io_error) on malformed input.
Dataset parse_csv(std::string_view text, std::string name = "dataset");
Dataset parse_json(std::string_view text);
Dataset read_dataset(const std::filesystem::path& path);

} // namespace nhpb
