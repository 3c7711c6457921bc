#include "sentivol/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace sentivol::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void settle() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        } else if (hi - lo < 1e-12 * std::max(1.0, std::fabs(hi))) {
            const double pad = std::max(1e-6, 0.05 * std::fabs(hi));
            lo -= pad;
            hi += pad;
        }
    }
};

std::string render_panel(const Panel& panel, double ox, double oy, int w, int h) {
    const double left = ox + 58.0;
    const double right = ox + w - 12.0;
    const double top = oy + 28.0;
    const double bottom = oy + h - 36.0;
    Range xr;
    Range yr;
    for (const auto& line : panel.lines) {
        for (std::size_t i = 0; i < line.x.size() && i < line.y.size(); ++i) {
            if (std::isfinite(line.y[i])) {
                xr.add(line.x[i]);
                yr.add(line.y[i]);
            }
        }
    }
    xr.settle();
    yr.settle();
    const auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
    const auto py = [&](double y) { return bottom - (y - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };

    std::string out;
    out += "<g>\n";
    out += "<text x=\"" + num(ox + w / 2.0) + "\" y=\"" + num(oy + 16.0) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + escape(panel.title) + "</text>\n";
    out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) + "\" height=\"" +
           num(bottom - top) + "\" fill=\"none\" stroke=\"#888\"/>\n";
    if (yr.lo < 0.0 && yr.hi > 0.0) {
        out += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(0.0)) + "\" x2=\"" + num(right) + "\" y2=\"" +
               num(py(0.0)) + "\" stroke=\"#ccc\"/>\n";
    }
    for (double frac : {0.0, 0.5, 1.0}) {
        const double xv = xr.lo + frac * (xr.hi - xr.lo);
        const double yv = yr.lo + frac * (yr.hi - yr.lo);
        out += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(bottom + 12.0) +
               "\" text-anchor=\"middle\" font-size=\"9\">" + tick(xv) + "</text>\n";
        out += "<text x=\"" + num(left - 4.0) + "\" y=\"" + num(py(yv) + 3.0) +
               "\" text-anchor=\"end\" font-size=\"9\">" + tick(yv) + "</text>\n";
    }
    out += "<text x=\"" + num((left + right) / 2.0) + "\" y=\"" + num(bottom + 26.0) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + escape(panel.x_label) + "</text>\n";
    out += "<text x=\"" + num(ox + 12.0) + "\" y=\"" + num((top + bottom) / 2.0) +
           "\" text-anchor=\"middle\" font-size=\"10\" transform=\"rotate(-90 " + num(ox + 12.0) + " " +
           num((top + bottom) / 2.0) + ")\">" + escape(panel.y_label) + "</text>\n";

    for (std::size_t li = 0; li < panel.lines.size(); ++li) {
        const auto& line = panel.lines[li];
        const char* color = kPalette[li % std::size(kPalette)];
        std::string points;
        for (std::size_t i = 0; i < line.x.size() && i < line.y.size(); ++i) {
            if (!std::isfinite(line.y[i])) {
                continue;
            }
            points += num(px(line.x[i])) + "," + num(py(line.y[i])) + " ";
        }
        if (!points.empty()) {
            points.pop_back();
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.2\"" +
               (line.dashed ? " stroke-dasharray=\"4 3\"" : "") + " points=\"" + points + "\"/>\n";
        if (line.markers) {
            for (std::size_t i = 0; i < line.x.size() && i < line.y.size(); ++i) {
                if (std::isfinite(line.y[i])) {
                    out += "<circle cx=\"" + num(px(line.x[i])) + "\" cy=\"" + num(py(line.y[i])) +
                           "\" r=\"2\" fill=\"" + color + "\"/>\n";
                }
            }
        }
        if (!line.label.empty()) {
            const double ly = top + 10.0 + 11.0 * static_cast<double>(li);
            out += "<line x1=\"" + num(right - 70.0) + "\" y1=\"" + num(ly - 3.0) + "\" x2=\"" + num(right - 58.0) +
                   "\" y2=\"" + num(ly - 3.0) + "\" stroke=\"" + color + "\"/>\n";
            out += "<text x=\"" + num(right - 55.0) + "\" y=\"" + num(ly) + "\" font-size=\"8\">" +
                   escape(line.label) + "</text>\n";
        }
    }
    out += "</g>\n";
    return out;
}

} // namespace

std::string render(const Figure& figure) {
    const int columns = std::max(1, figure.columns);
    const int rows = static_cast<int>((figure.panels.size() + static_cast<std::size_t>(columns) - 1) /
                                      static_cast<std::size_t>(columns));
    const int header = figure.title.empty() ? 0 : 26;
    const int footer = figure.footer.empty() ? 0 : 22;
    const int width = columns * figure.panel_width;
    const int height = header + std::max(rows, 1) * figure.panel_height + footer;

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!figure.metadata.empty()) {
        out += "<!--\n";
        for (const auto& [k, v] : figure.metadata) {
            // "--" may not appear inside an XML comment.
            std::string value = v;
            for (auto pos = value.find("--"); pos != std::string::npos; pos = value.find("--", pos)) {
                value.replace(pos, 2, "- -");
            }
            out += k + ": " + value + "\n";
        }
        out += "-->\n";
    }
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
           "\" font-family=\"sans-serif\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (header > 0) {
        out += "<text x=\"" + std::to_string(width / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" +
               escape(figure.title) + "</text>\n";
    }
    for (std::size_t i = 0; i < figure.panels.size(); ++i) {
        const double ox = static_cast<double>(static_cast<int>(i) % columns * figure.panel_width);
        const double oy = header + static_cast<double>(static_cast<int>(i) / columns * figure.panel_height);
        out += render_panel(figure.panels[i], ox, oy, figure.panel_width, figure.panel_height);
    }
    if (footer > 0) {
        out += "<text x=\"8\" y=\"" + std::to_string(height - 7) + "\" font-size=\"10\" fill=\"#555\">" +
               escape(figure.footer) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace sentivol::svg
