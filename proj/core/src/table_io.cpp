#include "qbat/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace qbat {

std::string format_double17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";

    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    std::string s(buf);

    // canonicalize the exponent: drop '+', strip leading zeros
    auto e = s.find('e');
    std::string mantissa = s.substr(0, e);
    std::string exponent = s.substr(e + 1);
    bool negative_exp = false;
    std::size_t i = 0;
    if (exponent[0] == '+' || exponent[0] == '-') {
        negative_exp = (exponent[0] == '-');
        i = 1;
    }
    while (i + 1 < exponent.size() && exponent[i] == '0') ++i;
    return mantissa + "e" + (negative_exp ? "-" : "") + exponent.substr(i);
}

double parse_double(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw IoError("not a number: '" + text + "'");
    return v;
}

std::string to_csv(const SweepResult& result) {
    const Table& t = result.table;
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    std::size_t n_cols = t.columns.size();
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (c) out += ',';
            out += format_double17(t.at(r, c));
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

SweepResult from_csv(const std::string& text) {
    SweepResult result;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV input");
    result.table.columns = split_csv_line(line);

    std::size_t n_cols = result.table.columns.size();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != n_cols) {
            throw IoError("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(n_cols));
        }
        for (const auto& cell : cells) {
            result.table.data.push_back(parse_double(cell));
        }
    }
    return result;
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c; break;
        }
    }
    return out;
}

std::string json_number(double v) {
    if (!std::isfinite(v)) return "null";  // JSON has no NaN/Inf literals
    return format_double17(v);
}

}  // namespace

std::string to_json(const SweepResult& result) {
    const Table& t = result.table;
    std::string out = "{\n  \"columns\": [";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ", ";
        out += '"' + json_escape(t.columns[c]) + '"';
    }
    out += "],\n  \"rows\": [";
    std::size_t n_cols = t.columns.size();
    for (std::size_t r = 0; r < t.rows(); ++r) {
        out += (r ? ",\n    [" : "\n    [");
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (c) out += ", ";
            out += json_number(t.at(r, c));
        }
        out += ']';
    }
    out += t.rows() ? "\n  ],\n" : "],\n";
    out += "  \"meta\": {";
    for (std::size_t i = 0; i < result.meta.size(); ++i) {
        out += (i ? ",\n    " : "\n    ");
        out += '"' + json_escape(result.meta[i].first) + "\": \"" +
               json_escape(result.meta[i].second) + '"';
    }
    out += result.meta.empty() ? "}\n" : "\n  }\n";
    out += "}\n";
    return out;
}

SweepResult from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SweepResult result;
    for (const auto& c : j.at("columns")) {
        result.table.columns.push_back(c.get<std::string>());
    }
    for (const auto& row : j.at("rows")) {
        if (row.size() != result.table.columns.size()) {
            throw IoError("JSON row width does not match column count");
        }
        for (const auto& cell : row) {
            result.table.data.push_back(
                cell.is_null() ? std::numeric_limits<double>::quiet_NaN()
                               : cell.get<double>());
        }
    }
    if (j.contains("meta")) {
        for (const auto& [key, value] : j.at("meta").items()) {
            result.meta.emplace_back(key, value.get<std::string>());
        }
    }
    return result;
}

void write_table(const SweepResult& result, TableFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << (format == TableFormat::Csv ? to_csv(result) : to_json(result));
    if (!out.good()) throw IoError("write to '" + path + "' failed");
}

bool tables_equal(const Table& a, const Table& b) {
    if (a.columns != b.columns) return false;
    if (a.data.size() != b.data.size()) return false;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        bool both_nan = std::isnan(a.data[i]) && std::isnan(b.data[i]);
        if (!both_nan && a.data[i] != b.data[i]) return false;
    }
    return true;
}

}  // namespace qbat
