#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chankit/ingest.hpp"

namespace chankit::svg {
namespace {

constexpr double kWidth = 640, kPanelHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

const char* colour(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    return palette[i % 6];
}

std::string num(double v) { return format_fixed(v, 2); }

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else if (c == '"') out += "&quot;";
        else out += c;
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) { lo = std::min(lo, v); hi = std::max(hi, v); }
    void pad() {
        if (!(hi > lo)) { lo -= 1; hi += 1; return; }
        const double m = 0.05 * (hi - lo);
        lo -= m;
        hi += m;
    }
};

} // namespace

std::string render(const std::vector<Panel>& panels) {
    const double height = kPanelHeight * static_cast<double>(std::max<std::size_t>(1, panels.size()));
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                      num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const auto& panel = panels[pi];
        const double y0 = kPanelHeight * static_cast<double>(pi);
        const auto tx = [&](double x) { return panel.log_x ? std::log10(x) : x; };
        Range xr, yr;
        for (const auto& s : panel.series)
            for (const auto& [x, y] : s.xy) {
                xr.add(tx(x));
                yr.add(y);
            }
        xr.pad();
        yr.pad();
        const double pw = kWidth - kLeft - kRight, ph = kPanelHeight - kTop - kBottom;
        const auto px = [&](double x) { return kLeft + (tx(x) - xr.lo) / (xr.hi - xr.lo) * pw; };
        const auto py = [&](double y) { return y0 + kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

        out += "<g class=\"panel\" data-title=\"" + escape(panel.title) + "\">\n";
        out += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(y0 + 20) + "\" text-anchor=\"middle\">" +
               escape(panel.title) + "</text>\n";
        out += "<line class=\"axis\" x1=\"" + num(kLeft) + "\" y1=\"" + num(y0 + kTop + ph) + "\" x2=\"" +
               num(kLeft + pw) + "\" y2=\"" + num(y0 + kTop + ph) + "\" stroke=\"black\"/>\n";
        out += "<line class=\"axis\" x1=\"" + num(kLeft) + "\" y1=\"" + num(y0 + kTop) + "\" x2=\"" + num(kLeft) +
               "\" y2=\"" + num(y0 + kTop + ph) + "\" stroke=\"black\"/>\n";
        for (int t = 0; t <= 4; ++t) {
            const double fx = xr.lo + (xr.hi - xr.lo) * t / 4.0;
            const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
            const double xv = panel.log_x ? std::pow(10.0, fx) : fx;
            out += "<text class=\"tick\" x=\"" + num(kLeft + pw * t / 4.0) + "\" y=\"" + num(y0 + kTop + ph + 16) +
                   "\" text-anchor=\"middle\">" + format_fixed(xv, 1) + "</text>\n";
            out += "<text class=\"tick\" x=\"" + num(kLeft - 6) + "\" y=\"" + num(y0 + kTop + ph - ph * t / 4.0 + 4) +
                   "\" text-anchor=\"end\">" + format_fixed(fy, 1) + "</text>\n";
        }
        out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(y0 + kPanelHeight - 12) +
               "\" text-anchor=\"middle\">" + escape(panel.x_label) + "</text>\n";
        out += "<text x=\"14\" y=\"" + num(y0 + kTop + ph / 2) + "\" transform=\"rotate(-90 14 " +
               num(y0 + kTop + ph / 2) + ")\" text-anchor=\"middle\">" + escape(panel.y_label) + "</text>\n";

        for (std::size_t si = 0; si < panel.series.size(); ++si) {
            const auto& s = panel.series[si];
            if (s.css_class == "points") {
                for (const auto& [x, y] : s.xy)
                    out += "<circle class=\"points\" cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) +
                           "\" r=\"3\" fill=\"" + colour(si) + "\"/>\n";
            } else {
                out += "<polyline class=\"" + escape(s.css_class) + "\" data-label=\"" + escape(s.label) +
                       "\" fill=\"none\" stroke=\"" + colour(si) + "\" points=\"";
                for (std::size_t k = 0; k < s.xy.size(); ++k) {
                    if (k) out += ' ';
                    out += num(px(s.xy[k].first)) + "," + num(py(s.xy[k].second));
                }
                out += "\"/>\n";
            }
            out += "<text class=\"legend\" x=\"" + num(kLeft + 10) + "\" y=\"" +
                   num(y0 + kTop + 14 + 14 * static_cast<double>(si)) + "\" fill=\"" + colour(si) + "\">" +
                   escape(s.label) + "</text>\n";
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace chankit::svg
