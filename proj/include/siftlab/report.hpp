#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace siftlab {

/// Floating output uses 12 significant digits everywhere, so identical runs
/// diff byte-for-byte.
inline std::string fmt_sig(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

/// One typed table cell; formatting differs between CSV and JSON only for
/// non-finite numbers and strings.
struct Cell {
    enum class Kind { number, integer, text, boolean, null };
    Kind kind = Kind::null;
    double num = 0.0;
    long long inum = 0;
    std::string text;
    bool flag = false;

    static Cell of(double v) { return {Kind::number, v, 0, {}, false}; }
    static Cell of(int v) { return {Kind::integer, 0.0, v, {}, false}; }
    static Cell of(long long v) { return {Kind::integer, 0.0, v, {}, false}; }
    static Cell of(uint64_t v) { return {Kind::integer, 0.0, static_cast<long long>(v), {}, false}; }
    static Cell of(std::string v) { return {Kind::text, 0.0, 0, std::move(v), false}; }
    static Cell of(const char* v) { return {Kind::text, 0.0, 0, v, false}; }
    static Cell of(bool v) { return {Kind::boolean, 0.0, 0, {}, v}; }
    static Cell null() { return {}; }
    static Cell of(std::optional<double> v) { return v ? of(*v) : null(); }
    /// Complex values render as one cell, "re" or "re+imi" / "re-imi".
    static Cell of(std::complex<double> v) {
        if (v.imag() == 0.0) return of(v.real());
        std::string s = fmt_sig(v.real());
        s += v.imag() < 0.0 ? "-" : "+";
        s += fmt_sig(std::abs(v.imag()));
        s += "i";
        return of(std::move(s));
    }
};

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline void write_cell_csv(std::ostream& os, const Cell& c) {
    switch (c.kind) {
        case Cell::Kind::number: os << fmt_sig(c.num); break;
        case Cell::Kind::integer: os << c.inum; break;
        case Cell::Kind::text: os << csv_escape(c.text); break;
        case Cell::Kind::boolean: os << (c.flag ? "true" : "false"); break;
        case Cell::Kind::null: break;  // empty field
    }
}

inline void write_cell_json(std::ostream& os, const Cell& c) {
    switch (c.kind) {
        case Cell::Kind::number:
            if (std::isfinite(c.num)) os << fmt_sig(c.num);
            else os << "null";
            break;
        case Cell::Kind::integer: os << c.inum; break;
        case Cell::Kind::text: os << '"' << json_escape(c.text) << '"'; break;
        case Cell::Kind::boolean: os << (c.flag ? "true" : "false"); break;
        case Cell::Kind::null: os << "null"; break;
    }
}

} // namespace detail

/// A report artifact: ordered meta entries plus a rectangular row table.
/// CSV output is the header row plus data rows (LF line endings); JSON output
/// is one object {"meta": {...}, "rows": [...]}.
class ReportTable {
public:
    void meta(std::string key, Cell value) { meta_.emplace_back(std::move(key), std::move(value)); }
    void columns(std::vector<std::string> names) { columns_ = std::move(names); }
    void row(std::vector<Cell> cells) { rows_.push_back(std::move(cells)); }
    size_t row_count() const { return rows_.size(); }

    void write_csv(std::ostream& os) const {
        for (size_t i = 0; i < columns_.size(); ++i) {
            if (i) os << ',';
            os << detail::csv_escape(columns_[i]);
        }
        os << '\n';
        for (const auto& r : rows_) {
            for (size_t i = 0; i < r.size(); ++i) {
                if (i) os << ',';
                detail::write_cell_csv(os, r[i]);
            }
            os << '\n';
        }
    }

    void write_json(std::ostream& os) const {
        os << "{\"meta\":{";
        for (size_t i = 0; i < meta_.size(); ++i) {
            if (i) os << ',';
            os << '"' << detail::json_escape(meta_[i].first) << "\":";
            detail::write_cell_json(os, meta_[i].second);
        }
        os << "},\"rows\":[";
        for (size_t r = 0; r < rows_.size(); ++r) {
            if (r) os << ',';
            os << '{';
            for (size_t i = 0; i < rows_[r].size(); ++i) {
                if (i) os << ',';
                os << '"' << detail::json_escape(columns_[i]) << "\":";
                detail::write_cell_json(os, rows_[r][i]);
            }
            os << '}';
        }
        os << "]}\n";
    }

private:
    std::vector<std::pair<std::string, Cell>> meta_;
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

} // namespace siftlab
