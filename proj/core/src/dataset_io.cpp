#include "nhpb/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "nhpb/errors.hpp"

namespace nhpb {

using nlohmann::ordered_json;

namespace {

bool is_text_column(std::string_view name) { return name == "model" || name == "status"; }

std::optional<double> parse_special(std::string_view s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::nullopt;
}

double parse_number(std::string_view s) {
    if (auto special = parse_special(s)) return *special;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::io_error, "malformed number '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::io_error, "failed writing " + path.string());
}

} // namespace

DatasetFormat parse_format(std::string_view name) {
    if (name == "csv") return DatasetFormat::csv;
    if (name == "json") return DatasetFormat::json;
    throw Error(ErrorCode::config_error, "format: expected csv or json, got '" + std::string(name) + "'");
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string to_csv(const Dataset& ds) {
    std::string out;
    for (std::size_t k = 0; k < ds.columns.size(); ++k) {
        if (k) out += ',';
        out += ds.columns[k];
    }
    out += '\n';
    for (const auto& row : ds.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            if (const auto* d = std::get_if<double>(&row[k])) {
                out += format_number(*d);
            } else if (const auto* s = std::get_if<std::string>(&row[k])) {
                out += *s;
            }
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Dataset& ds, int indent) {
    ordered_json doc;
    if (ds.metadata_json.empty()) {
        doc["metadata"] = ordered_json::object();
    } else {
        doc["metadata"] = ordered_json::parse(ds.metadata_json);
    }
    ordered_json rows = ordered_json::array();
    for (const auto& row : ds.rows) {
        ordered_json r = ordered_json::object();
        for (std::size_t k = 0; k < ds.columns.size(); ++k) {
            const auto& cell = row[k];
            if (const auto* d = std::get_if<double>(&cell)) {
                r[ds.columns[k]] = std::isfinite(*d) ? ordered_json(*d) : ordered_json(format_number(*d));
            } else if (const auto* s = std::get_if<std::string>(&cell)) {
                r[ds.columns[k]] = *s;
            } else {
                r[ds.columns[k]] = nullptr;
            }
        }
        rows.push_back(std::move(r));
    }
    doc["columns"] = ds.columns;
    doc["rows"] = std::move(rows);
    return doc.dump(indent);
}

std::filesystem::path write_dataset(const Dataset& ds, const std::filesystem::path& dir, DatasetFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create directory " + dir.string() + ": " + ec.message());
    if (format == DatasetFormat::csv) {
        const auto path = dir / (ds.name + ".csv");
        write_file(path, to_csv(ds));
        write_file(dir / (ds.name + ".meta.json"), ds.metadata_json.empty() ? "{}\n" : ds.metadata_json + "\n");
        return path;
    }
    const auto path = dir / (ds.name + ".json");
    write_file(path, to_json(ds) + "\n");
    return path;
}

Dataset parse_csv(std::string_view text, std::string name) {
    Dataset ds;
    ds.name = std::move(name);
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        const auto fields = split_fields(line);
        if (header) {
            for (auto f : fields) ds.columns.emplace_back(f);
            header = false;
            continue;
        }
        if (fields.size() != ds.columns.size()) {
            throw Error(ErrorCode::io_error, "CSV row " + std::to_string(ds.rows.size() + 1) + " has " +
                                                 std::to_string(fields.size()) + " fields, expected " +
                                                 std::to_string(ds.columns.size()));
        }
        std::vector<Cell> row;
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (fields[k].empty()) {
                row.emplace_back(std::monostate{});
            } else if (is_text_column(ds.columns[k])) {
                row.emplace_back(std::string(fields[k]));
            } else {
                row.emplace_back(parse_number(fields[k]));
            }
        }
        ds.rows.push_back(std::move(row));
    }
    if (header) throw Error(ErrorCode::io_error, "CSV has no header line");
    return ds;
}

Dataset parse_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text.begin(), text.end());
    } catch (const ordered_json::parse_error& e) {
        throw Error(ErrorCode::io_error, std::string("malformed dataset JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("rows") || !doc.contains("columns")) {
        throw Error(ErrorCode::io_error, "dataset JSON needs \"columns\" and \"rows\"");
    }
    Dataset ds;
    ds.metadata_json = doc.value("metadata", ordered_json::object()).dump(2);
    ds.name = doc["metadata"].value("name", std::string("dataset"));
    for (const auto& c : doc["columns"]) ds.columns.push_back(c.get<std::string>());
    for (const auto& r : doc["rows"]) {
        std::vector<Cell> row;
        for (const auto& col : ds.columns) {
            if (!r.contains(col)) throw Error(ErrorCode::io_error, "row lacks column " + col);
            const auto& v = r[col];
            if (v.is_null()) {
                row.emplace_back(std::monostate{});
            } else if (v.is_number()) {
                row.emplace_back(v.get<double>());
            } else if (v.is_string() && !is_text_column(col)) {
                row.emplace_back(parse_number(v.get<std::string>()));
            } else if (v.is_string()) {
                row.emplace_back(v.get<std::string>());
            } else {
                throw Error(ErrorCode::io_error, "unexpected value in column " + col);
            }
        }
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (path.extension() == ".json") return parse_json(ss.str());
    return parse_csv(ss.str(), path.stem().string());
}

} // namespace nhpb
