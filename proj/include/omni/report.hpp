#pragma once

// CSV in/out (RFC 4180 quoting) and two small SVG renderers.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "omni/error.hpp"

namespace omni::report {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) {
        if (c == '"') o += '"';
        o += c;
    }
    return o + "\"";
}

inline std::string csv_line(const std::vector<std::string>& fields) {
    std::string o;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) o += ',';
        o += csv_field(fields[i]);
    }
    return o + "\n";
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ConfigError("no column named " + name);
    }
};

inline Table parse_csv(const std::string& text) {
    Table t;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    auto end_row = [&] {
        row.push_back(std::move(field));
        field.clear();
        if (t.header.empty()) t.header = std::move(row);
        else t.rows.push_back(std::move(row));
        row.clear();
        any = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n') {
            end_row();
        } else if (c != '\r') {
            field += c;
            any = true;
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field", text.size());
    if (any || !field.empty()) end_row();
    return t;
}

inline Table read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("write failed for " + path);
}

// ------------------------------------------------------------------ SVG

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

namespace detail {
inline const char* palette(std::size_t i) {
    static const char* c[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return c[i % 8];
}

inline std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else if (c == '"') o += "&quot;";
        else o += c;
    }
    return o;
}

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}
}  // namespace detail

inline std::string line_chart(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                              const std::string& ylabel) {
    const double W = 640, H = 400, L = 60, R = 150, T = 40, B = 50;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (first) {
                x0 = x1 = x;
                y0 = y1 = y;
                first = false;
            }
            x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    y0 = std::min(y0, 0.0);
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::string o = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    o += "<text x=\"" + detail::num(W / 2) + "\" y=\"20\" text-anchor=\"middle\">" + detail::esc(title) + "</text>\n";
    o += "<line x1=\"" + detail::num(L) + "\" y1=\"" + detail::num(H - B) + "\" x2=\"" + detail::num(W - R) + "\" y2=\"" +
         detail::num(H - B) + "\" stroke=\"black\"/>\n";
    o += "<line x1=\"" + detail::num(L) + "\" y1=\"" + detail::num(T) + "\" x2=\"" + detail::num(L) + "\" y2=\"" +
         detail::num(H - B) + "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        o += "<text x=\"" + detail::num(px(xv)) + "\" y=\"" + detail::num(H - B + 16) + "\" text-anchor=\"middle\">" +
             detail::num(xv) + "</text>\n";
        o += "<text x=\"" + detail::num(L - 6) + "\" y=\"" + detail::num(py(yv) + 4) + "\" text-anchor=\"end\">" +
             detail::num(yv) + "</text>\n";
    }
    o += "<text x=\"" + detail::num((L + W - R) / 2) + "\" y=\"" + detail::num(H - 12) + "\" text-anchor=\"middle\">" +
         detail::esc(xlabel) + "</text>\n";
    o += "<text x=\"16\" y=\"" + detail::num((T + H - B) / 2) + "\" transform=\"rotate(-90 16 " +
         detail::num((T + H - B) / 2) + ")\" text-anchor=\"middle\">" + detail::esc(ylabel) + "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::string pts;
        for (const auto& [x, y] : series[i].points) pts += detail::num(px(x)) + "," + detail::num(py(y)) + " ";
        o += "<polyline class=\"series\" fill=\"none\" stroke=\"" + std::string(detail::palette(i)) +
             "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = T + 16.0 * static_cast<double>(i);
        o += "<text x=\"" + detail::num(W - R + 10) + "\" y=\"" + detail::num(ly + 4) + "\" fill=\"" +
             detail::palette(i) + "\">" + detail::esc(series[i].label) + "</text>\n";
    }
    return o + "</svg>\n";
}

// One cell per (row, column); values in [0,1] map from white to dark blue.
inline std::string heatmap(const std::vector<std::string>& row_labels, const std::vector<std::vector<double>>& values,
                           const std::string& title) {
    const std::size_t rows = values.size(), cols = rows ? values[0].size() : 0;
    for (const auto& r : values)
        if (r.size() != cols) throw PreconditionError("ragged heatmap");
    const double cell_w = cols ? std::max(1.0, 600.0 / static_cast<double>(cols)) : 1.0;
    const double cell_h = rows ? std::max(1.0, std::min(12.0, 800.0 / static_cast<double>(rows))) : 1.0;
    const double L = 160, T = 30;
    const double W = L + cell_w * static_cast<double>(cols) + 10, H = T + cell_h * static_cast<double>(rows) + 10;
    std::string o = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::num(W) + "\" height=\"" +
                    detail::num(H) + "\" font-family=\"sans-serif\" font-size=\"9\">\n";
    o += "<text x=\"" + detail::num(W / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"12\">" +
         detail::esc(title) + "</text>\n";
    for (std::size_t r = 0; r < rows; ++r) {
        if (cell_h >= 8 && r < row_labels.size())
            o += "<text x=\"" + detail::num(L - 4) + "\" y=\"" + detail::num(T + cell_h * (r + 0.8)) +
                 "\" text-anchor=\"end\">" + detail::esc(row_labels[r]) + "</text>\n";
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = std::clamp(values[r][c], 0.0, 1.0);
            const int g = static_cast<int>(std::lround(255 * (1 - v)));
            char color[16];
            std::snprintf(color, sizeof color, "#%02x%02x%02x", g, g, 255 - static_cast<int>(std::lround(100 * v)));
            o += "<rect class=\"cell\" x=\"" + detail::num(L + cell_w * c) + "\" y=\"" + detail::num(T + cell_h * r) +
                 "\" width=\"" + detail::num(cell_w) + "\" height=\"" + detail::num(cell_h) + "\" fill=\"" + color +
                 "\"/>\n";
        }
    }
    return o + "</svg>\n";
}

}  // namespace omni::report
