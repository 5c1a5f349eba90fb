#pragma once

#include <charconv>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "polder/errors.hpp"

namespace polder::csv {

/// Shortest round-trip decimal form, '.' separator, locale-free.
inline std::string format(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::size_t line, std::size_t column) {
    // Trim ASCII whitespace; data written by other tools often pads fields.
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw parse_error("line " + std::to_string(line) + ", field " + std::to_string(column + 1) +
                          ": not a number: '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

/// Newline-terminated rows over any ostream.
class Writer {
  public:
    explicit Writer(std::ostream& os) : os_(os) {}

    Writer& field(std::string_view s) {
        if (!first_) os_ << ',';
        os_ << s;
        first_ = false;
        return *this;
    }
    Writer& field(double v) { return field(std::string_view(format(v))); }
    Writer& field(bool v) { return field(std::string_view(v ? "1" : "0")); }
    // Literals must not decay to the bool overload.
    Writer& field(const char* s) { return field(std::string_view(s)); }

    void end_row() {
        os_ << '\n';
        first_ = true;
    }

  private:
    std::ostream& os_;
    bool first_ = true;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with one header row. The caller checks the header.
inline Table read_numeric(std::istream& is, const std::string& origin) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (t.header.empty()) {
            for (auto f : fields) {
                std::string_view v = f;
                while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
                while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
                t.header.emplace_back(v);
            }
            continue;
        }
        if (fields.size() != t.header.size())
            throw parse_error(origin + ": line " + std::to_string(lineno) + ": expected " +
                              std::to_string(t.header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            try {
                row.push_back(parse_double(fields[c], lineno, c));
            } catch (const parse_error& e) {
                throw parse_error(origin + ": " + e.what());
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw parse_error(origin + ": empty file");
    return t;
}

inline Table read_numeric_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error(path + ": cannot open");
    return read_numeric(is, path);
}

} // namespace polder::csv
