#pragma once

#include <string>
#include <vector>

namespace hql::svg {

/// One plotted series: a polyline through (x, y) pairs, optionally with
/// circular markers at the data points.
struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6feb";
    bool markers = false;
};

/// Minimal deterministic line/scatter chart. The renderer is intentionally
/// tiny: linear axes, evenly spaced ticks, a legend, no external
/// dependencies. Callers wanting a log axis transform their data first and
/// say so in the axis label. Identical input produces identical bytes.
struct Plot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Series> series;

    void add_line(std::string label, std::vector<double> x, std::vector<double> y,
                  std::string color = "#1f6feb");
    void add_points(std::string label, std::vector<double> x, std::vector<double> y,
                    std::string color = "#d73a49");

    std::string render(int width = 640, int height = 420) const;
};

}  // namespace hql::svg
