#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "magdyn/io.hpp"
#include "magdyn/strutt.hpp"
#include "magdyn/trajectory.hpp"

namespace magdyn {

/// Minimal heatmap: stable cells stay clear, unstable/diverged cells are
/// filled, threshold-band cells get a contrasting stroke. Runs of equal
/// cells merge into one rect per row to keep files small.
inline std::string strutt_svg(const StruttMap& map, int px_w = 720, int px_h = 720) {
    const ScanGrid& g = map.grid;
    const double margin = 40.0;
    const double w = px_w - 2 * margin, h = px_h - 2 * margin;
    const double cw = w / g.n1, ch = h / g.n2;
    auto cx = [&](int i) { return margin + cw * i; };
    auto cy = [&](int j) { return margin + h - ch * (j + 1); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(px_w) +
         "\" height=\"" + std::to_string(px_h) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto emit_run = [&](int i0, int i1, int j, const char* fill) {
        s += "<rect x=\"" + fmt_double(cx(i0)) + "\" y=\"" + fmt_double(cy(j)) +
             "\" width=\"" + fmt_double(cw * (i1 - i0 + 1)) + "\" height=\"" +
             fmt_double(ch) + "\" fill=\"" + fill + "\"/>\n";
    };
    for (int j = 0; j < g.n2; ++j) {
        int run_start = -1;
        StabilityClass run_cls = StabilityClass::Stable;
        for (int i = 0; i <= g.n1; ++i) {
            const StabilityClass cls =
                i < g.n1 ? map.at(i, j).cls : StabilityClass::Stable;
            const bool colored = cls == StabilityClass::Unstable ||
                                 cls == StabilityClass::Diverged ||
                                 cls == StabilityClass::Threshold;
            if (run_start >= 0 && (!colored || cls != run_cls)) {
                emit_run(run_start, i - 1, j,
                         run_cls == StabilityClass::Threshold ? "#d62728" : "#9ecae1");
                run_start = -1;
            }
            if (colored && run_start < 0) {
                run_start = i;
                run_cls = cls;
            }
        }
    }
    // separatrix belt stroke
    for (const auto& [i, j] : separatrix_cells(map)) {
        s += "<rect x=\"" + fmt_double(cx(i)) + "\" y=\"" + fmt_double(cy(j)) +
             "\" width=\"" + fmt_double(cw) + "\" height=\"" + fmt_double(ch) +
             "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"0.4\"/>\n";
    }
    // frame and axis labels
    s += "<rect x=\"" + fmt_double(margin) + "\" y=\"" + fmt_double(margin) +
         "\" width=\"" + fmt_double(w) + "\" height=\"" + fmt_double(h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    auto label = [&](double x, double y, const std::string& txt) {
        s += "<text x=\"" + fmt_double(x) + "\" y=\"" + fmt_double(y) +
             "\" font-size=\"12\" font-family=\"sans-serif\">" + txt + "</text>\n";
    };
    label(margin, margin - 8, "beta2 " + fmt_double(g.beta2_max) + " .. top");
    label(margin, margin + h + 24, "beta1 " + fmt_double(g.beta1_min) + " .. " +
                                        fmt_double(g.beta1_max));
    s += "</svg>\n";
    return s;
}

/// Planar xOy path of a trajectory (polyline) with start/end markers.
inline std::string trajectory_svg(const TrajectoryRecord& r, int px_w = 720,
                                  int px_h = 720) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t i = 0; i < r.size(); ++i) {
        xmin = std::min(xmin, r.x[i]);
        xmax = std::max(xmax, r.x[i]);
        ymin = std::min(ymin, r.y[i]);
        ymax = std::max(ymax, r.y[i]);
    }
    const double pad_x = 0.05 * std::max(1e-12, xmax - xmin);
    const double pad_y = 0.05 * std::max(1e-12, ymax - ymin);
    xmin -= pad_x; xmax += pad_x; ymin -= pad_y; ymax += pad_y;
    const double margin = 40.0;
    const double w = px_w - 2 * margin, h = px_h - 2 * margin;
    auto X = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * w; };
    auto Y = [&](double y) { return margin + h - (y - ymin) / (ymax - ymin) * h; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(px_w) +
         "\" height=\"" + std::to_string(px_h) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.8\" points=\"";
    for (std::size_t i = 0; i < r.size(); ++i) {
        s += fmt_double(X(r.x[i]));
        s += ',';
        s += fmt_double(Y(r.y[i]));
        if (i + 1 < r.size()) s += ' ';
    }
    s += "\"/>\n";
    s += "<circle cx=\"" + fmt_double(X(r.x.front())) + "\" cy=\"" +
         fmt_double(Y(r.y.front())) + "\" r=\"4\" fill=\"#ff7f0e\"/>\n";
    s += "<circle cx=\"" + fmt_double(X(r.x.back())) + "\" cy=\"" +
         fmt_double(Y(r.y.back())) + "\" r=\"4\" fill=\"#d62728\"/>\n";
    s += "<rect x=\"" + fmt_double(margin) + "\" y=\"" + fmt_double(margin) +
         "\" width=\"" + fmt_double(w) + "\" height=\"" + fmt_double(h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "</svg>\n";
    return s;
}

} // namespace magdyn
