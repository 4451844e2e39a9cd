#pragma once

// Before/after overlay of a dispatched day as a standalone SVG document.
// Exactly two polylines (demand, grid draw) plus one shaded path covering the DG share.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "metro_dg/curve.hpp"
#include "metro_dg/error.hpp"

namespace metro_dg {

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// Smallest 1/2/5 x 10^k step giving at most `max_ticks` intervals.
inline double nice_step(double span, int max_ticks) {
    const double raw = span / max_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

}  // namespace detail

inline std::string render_comparison_svg(const LoadCurve& demand, const LoadCurve& grid_after, const LoadCurve& dg) {
    if (grid_after.grid() != demand.grid() || dg.grid() != demand.grid()) {
        throw Error(ErrorKind::GridMismatch, "plot curves use different grids");
    }
    constexpr double width = 960, height = 480;
    constexpr double left = 80, right = 30, top = 50, bottom = 70;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    const double max_power = std::max(peak(demand), 1e-12);
    const double y_step = detail::nice_step(max_power, 5);
    const double y_max = std::ceil(max_power * 1.05 / y_step) * y_step;

    auto x_of = [&](double minute) { return left + plot_w * minute / kMinutesPerDay; };
    auto y_of = [&](double p) { return top + plot_h * (1.0 - p / y_max); };
    auto pt = [&](double minute, double p) { return detail::fmt2(x_of(minute)) + "," + detail::fmt2(y_of(p)); };

    const auto& g = demand.grid();
    auto step_points = [&](const LoadCurve& c) {
        std::string pts;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) pts += ' ';
            pts += pt(g.sample_start(i), c[i]) + ' ' + pt(g.sample_start(i) + g.step_minutes(), c[i]);
        }
        return pts;
    };

    // one closed subpath per run of samples with DG output
    std::string region;
    for (std::size_t i = 0; i < dg.size();) {
        if (dg[i] <= 0.0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < dg.size() && dg[j] > 0.0) ++j;
        region += "M" + pt(g.sample_start(i), demand[i]);
        for (std::size_t k = i; k < j; ++k) {
            region += " L" + pt(g.sample_start(k), demand[k]) + " L" + pt(g.sample_start(k) + g.step_minutes(), demand[k]);
        }
        for (std::size_t k = j; k-- > i;) {
            region += " L" + pt(g.sample_start(k) + g.step_minutes(), grid_after[k]) + " L" +
                      pt(g.sample_start(k), grid_after[k]);
        }
        region += " Z ";
        i = j;
    }
    if (!region.empty()) region.pop_back();

    const std::string unit(to_string(demand.unit()));
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"480\" viewBox=\"0 0 960 480\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<title>Metro load curve before and after DG dispatch</title>\n";
    s += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"480\" fill=\"white\"/>\n";

    s += "<g class=\"grid-lines\" stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double p = 0.0; p <= y_max + 1e-9 * y_max; p += y_step) {
        s += "<line x1=\"" + detail::fmt2(left) + "\" y1=\"" + detail::fmt2(y_of(p)) + "\" x2=\"" +
             detail::fmt2(left + plot_w) + "\" y2=\"" + detail::fmt2(y_of(p)) + "\"/>\n";
    }
    s += "</g>\n";

    s += "<path class=\"dg-region\" fill=\"#f4a261\" fill-opacity=\"0.5\" stroke=\"none\" d=\"" + region + "\"/>\n";
    s += "<polyline class=\"series demand-before\" fill=\"none\" stroke=\"#1d3557\" stroke-width=\"2\" points=\"" +
         step_points(demand) + "\"/>\n";
    s += "<polyline class=\"series grid-after\" fill=\"none\" stroke=\"#e63946\" stroke-width=\"2\" "
         "stroke-dasharray=\"6 3\" points=\"" +
         step_points(grid_after) + "\"/>\n";

    s += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    s += "<line x1=\"" + detail::fmt2(left) + "\" y1=\"" + detail::fmt2(top + plot_h) + "\" x2=\"" +
         detail::fmt2(left + plot_w) + "\" y2=\"" + detail::fmt2(top + plot_h) + "\"/>\n";
    s += "<line x1=\"" + detail::fmt2(left) + "\" y1=\"" + detail::fmt2(top) + "\" x2=\"" + detail::fmt2(left) +
         "\" y2=\"" + detail::fmt2(top + plot_h) + "\"/>\n";
    s += "</g>\n";

    s += "<g class=\"ticks\" fill=\"black\">\n";
    for (int h = 0; h <= 24; h += 3) {
        s += "<text x=\"" + detail::fmt2(x_of(h * 60.0)) + "\" y=\"" + detail::fmt2(top + plot_h + 18) +
             "\" text-anchor=\"middle\">" + detail::format_clock(h * 60) + "</text>\n";
    }
    for (double p = 0.0; p <= y_max + 1e-9 * y_max; p += y_step) {
        char label[32];
        std::snprintf(label, sizeof label, "%g", p);
        s += "<text x=\"" + detail::fmt2(left - 8) + "\" y=\"" + detail::fmt2(y_of(p) + 4) +
             "\" text-anchor=\"end\">" + label + "</text>\n";
    }
    s += "</g>\n";

    s += "<text class=\"axis-label x\" x=\"" + detail::fmt2(left + plot_w / 2) + "\" y=\"" +
         detail::fmt2(height - 20) + "\" text-anchor=\"middle\">Time of day (h)</text>\n";
    s += "<text class=\"axis-label y\" x=\"20\" y=\"" + detail::fmt2(top + plot_h / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " + detail::fmt2(top + plot_h / 2) + ")\">Power (" +
         unit + ")</text>\n";

    s += "<g class=\"legend\">\n";
    s += "<line x1=\"" + detail::fmt2(left + 10) + "\" y1=\"25\" x2=\"" + detail::fmt2(left + 40) +
         "\" y2=\"25\" stroke=\"#1d3557\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + detail::fmt2(left + 46) + "\" y=\"29\">Demand before DG</text>\n";
    s += "<line x1=\"" + detail::fmt2(left + 200) + "\" y1=\"25\" x2=\"" + detail::fmt2(left + 230) +
         "\" y2=\"25\" stroke=\"#e63946\" stroke-width=\"2\" stroke-dasharray=\"6 3\"/>\n";
    s += "<text x=\"" + detail::fmt2(left + 236) + "\" y=\"29\">Grid draw after DG</text>\n";
    s += "<rect x=\"" + detail::fmt2(left + 390) + "\" y=\"18\" width=\"30\" height=\"14\" fill=\"#f4a261\" "
         "fill-opacity=\"0.5\"/>\n";
    s += "<text x=\"" + detail::fmt2(left + 426) + "\" y=\"29\">DG output</text>\n";
    s += "</g>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace metro_dg
