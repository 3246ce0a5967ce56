#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace ckdv::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    int width = 720;
    int height = 420;
};

namespace detail {

inline std::string num(double v, const char* fmt = "%.6g") {
    char buf[32];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// 1-2-5 tick step giving roughly `target` intervals.
inline double tick_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    const double nice = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
    return nice * mag;
}

}  // namespace detail

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    return colors[i % (sizeof colors / sizeof *colors)];
}

/// Static line plot with axes, ticks and a legend; no external renderer.
inline std::string render(const Plot& p) {
    using detail::num;
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto& s : p.series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    if (!(x_hi >= x_lo)) x_lo = 0.0, x_hi = 1.0;
    if (!(y_hi >= y_lo)) y_lo = 0.0, y_hi = 1.0;
    if (x_hi == x_lo) x_lo -= 0.5, x_hi += 0.5;
    if (y_hi == y_lo) y_lo -= 0.5, y_hi += 0.5;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    const double left = 70, right = 20, top = 40, bottom = 50;
    const double w = p.width - left - right;
    const double h = p.height - top - bottom;
    auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * w; };
    auto sy = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * h; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(p.width) + "\" height=\"" +
           std::to_string(p.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(p.width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           detail::escape(p.title) + "</text>\n";
    out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs = detail::tick_step(x_hi - x_lo, 8);
    for (double t = std::ceil(x_lo / xs) * xs; t <= x_hi + 1e-9 * xs; t += xs) {
        out += "<line x1=\"" + num(sx(t)) + "\" x2=\"" + num(sx(t)) + "\" y1=\"" + num(top + h) + "\" y2=\"" +
               num(top + h + 5) + "\" stroke=\"black\"/>";
        out += "<text x=\"" + num(sx(t)) + "\" y=\"" + num(top + h + 18) + "\" text-anchor=\"middle\">" +
               num(std::abs(t) < 1e-12 * xs ? 0.0 : t) + "</text>\n";
    }
    const double ys = detail::tick_step(y_hi - y_lo, 6);
    for (double t = std::ceil(y_lo / ys) * ys; t <= y_hi + 1e-9 * ys; t += ys) {
        out += "<line x1=\"" + num(left - 5) + "\" x2=\"" + num(left) + "\" y1=\"" + num(sy(t)) + "\" y2=\"" +
               num(sy(t)) + "\" stroke=\"black\"/>";
        out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(sy(t) + 4) + "\" text-anchor=\"end\">" +
               num(std::abs(t) < 1e-12 * ys ? 0.0 : t) + "</text>\n";
    }
    out += "<text x=\"" + num(left + w / 2) + "\" y=\"" + num(p.height - 10.0) + "\" text-anchor=\"middle\">" +
           detail::escape(p.x_label) + "</text>\n";
    out += "<text transform=\"translate(16," + num(top + h / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           detail::escape(p.y_label) + "</text>\n";

    for (std::size_t k = 0; k < p.series.size(); ++k) {
        const auto& s = p.series[k];
        out += "<polyline fill=\"none\" stroke=\"" + std::string(palette(k)) + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            out += num(sx(s.x[i]), "%.2f") + "," + num(sy(s.y[i]), "%.2f") + " ";
        }
        out += "\"/>\n";
        const double ly = top + 16 + 16 * static_cast<double>(k);
        out += "<line x1=\"" + num(left + w - 120) + "\" x2=\"" + num(left + w - 95) + "\" y1=\"" + num(ly - 4) +
               "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + palette(k) + "\" stroke-width=\"2\"/>";
        out += "<text x=\"" + num(left + w - 90) + "\" y=\"" + num(ly) + "\">" + detail::escape(s.name) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace ckdv::svg
