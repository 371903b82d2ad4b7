#include "qbat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace qbat {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c; break;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    void expand(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

/// 1-2-5 tick spacing aiming for about `target` intervals.
std::vector<double> nice_ticks(double lo, double hi, int target) {
    double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    double raw = span / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double norm = raw / mag;
    double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
    std::vector<double> ticks;
    double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 0.5 * step; v += step) {
        if (std::abs(v) < 1e-12 * step) v = 0.0;
        ticks.push_back(v);
    }
    return ticks;
}

}  // namespace

std::string render_svg_string(const SweepResult& result, const std::string& x_col,
                              const std::vector<std::string>& y_cols,
                              const std::string& title) {
    const Table& t = result.table;
    auto xi = t.column_index(x_col);
    if (!xi) throw MissingColumnError("no column '" + x_col + "'");
    std::vector<std::size_t> yi;
    for (const auto& name : y_cols) {
        auto idx = t.column_index(name);
        if (!idx) throw MissingColumnError("no column '" + name + "'");
        yi.push_back(*idx);
    }
    if (t.rows() < 2) throw TooFewRowsError("need at least 2 rows to draw a line");

    bool have_x = false;
    bool have_y = false;
    Range xr;
    Range yr;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        double x = t.at(r, *xi);
        if (std::isfinite(x)) {
            if (!have_x) {
                xr = Range{x, x};
                have_x = true;
            } else {
                xr.expand(x);
            }
        }
        for (std::size_t c : yi) {
            double v = t.at(r, c);
            if (!std::isfinite(v)) continue;
            if (!have_y) {
                yr = Range{v, v};
                have_y = true;
            } else {
                yr.expand(v);
            }
        }
    }
    if (!have_x) xr = Range{0.0, 1.0};
    if (!have_y) yr = Range{0.0, 1.0};
    if (xr.hi == xr.lo) xr.hi = xr.lo + 1.0;
    double pad = 0.05 * (yr.hi - yr.lo);
    if (pad == 0.0) pad = yr.hi != 0.0 ? 0.05 * std::abs(yr.hi) : 0.5;
    yr.lo -= pad;
    yr.hi += pad;

    double plot_w = kWidth - kLeft - kRight;
    double plot_h = kHeight - kTop - kBottom;
    auto map_x = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto map_y = [&](double v) {
        return kTop + (1.0 - (v - yr.lo) / (yr.hi - yr.lo)) * plot_h;
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) +
           "\" height=\"" + px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) + " " +
           px(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // grid + ticks
    svg += "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    auto x_ticks = nice_ticks(xr.lo, xr.hi, 8);
    auto y_ticks = nice_ticks(yr.lo, yr.hi, 6);
    for (double v : x_ticks) {
        std::string sx = px(map_x(v));
        svg += "<line x1=\"" + sx + "\" y1=\"" + px(kTop) + "\" x2=\"" + sx + "\" y2=\"" +
               px(kTop + plot_h) + "\"/>\n";
    }
    for (double v : y_ticks) {
        std::string sy = px(map_y(v));
        svg += "<line x1=\"" + px(kLeft) + "\" y1=\"" + sy + "\" x2=\"" +
               px(kLeft + plot_w) + "\" y2=\"" + sy + "\"/>\n";
    }
    svg += "</g>\n";

    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
    for (double v : x_ticks) {
        svg += "<text x=\"" + px(map_x(v)) + "\" y=\"" + px(kTop + plot_h + 18.0) +
               "\" text-anchor=\"middle\">" + xml_escape(tick_label(v)) + "</text>\n";
    }
    for (double v : y_ticks) {
        svg += "<text x=\"" + px(kLeft - 8.0) + "\" y=\"" + px(map_y(v) + 4.0) +
               "\" text-anchor=\"end\">" + xml_escape(tick_label(v)) + "</text>\n";
    }
    svg += "<text x=\"" + px(kLeft + plot_w / 2.0) + "\" y=\"" + px(kHeight - 12.0) +
           "\" text-anchor=\"middle\">" + xml_escape(x_col) + "</text>\n";
    if (!title.empty()) {
        svg += "<text x=\"" + px(kLeft + plot_w / 2.0) + "\" y=\"" + px(kTop - 12.0) +
               "\" text-anchor=\"middle\" font-size=\"14\">" + xml_escape(title) +
               "</text>\n";
    }
    svg += "</g>\n";

    svg += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(plot_w) +
           "\" height=\"" + px(plot_h) +
           "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    // one polyline per y column; non-finite samples split the line
    for (std::size_t s = 0; s < yi.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string points;
        auto flush = [&]() {
            if (points.empty()) return;
            svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
            points.clear();
        };
        for (std::size_t r = 0; r < t.rows(); ++r) {
            double x = t.at(r, *xi);
            double y = t.at(r, yi[s]);
            if (!std::isfinite(x) || !std::isfinite(y)) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += px(map_x(x)) + "," + px(map_y(y));
        }
        flush();
    }

    // legend
    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
    for (std::size_t s = 0; s < y_cols.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        double ly = kTop + 14.0 + 18.0 * static_cast<double>(s);
        svg += "<line x1=\"" + px(kLeft + plot_w - 150.0) + "\" y1=\"" + px(ly) +
               "\" x2=\"" + px(kLeft + plot_w - 126.0) + "\" y2=\"" + px(ly) +
               "\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + px(kLeft + plot_w - 120.0) + "\" y=\"" + px(ly + 4.0) +
               "\">" + xml_escape(y_cols[s]) + "</text>\n";
    }
    svg += "</g>\n";

    svg += "</svg>\n";
    return svg;
}

void render_svg(const SweepResult& result, const std::string& x_col,
                const std::vector<std::string>& y_cols, const std::string& path,
                const std::string& title) {
    std::string body = render_svg_string(result, x_col, y_cols, title);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << body;
    if (!out.good()) throw IoError("write to '" + path + "' failed");
}

}  // namespace qbat
