#pragma once

#include <string>
#include <vector>

namespace coldsplit {

// Minimal self-contained SVG emission for headless runs: multi-series line
// charts and a box-averaged heatmap. Output is deterministic for fixed
// inputs (fixed-precision formatting throughout).

struct PlotSeries {
    std::string name;
    std::string color;  // "#rrggbb"
    std::vector<double> y;
};

std::string line_chart_svg(const std::string& title,
                           const std::string& xlabel, const std::string& ylabel,
                           const std::vector<double>& x,
                           const std::vector<PlotSeries>& series);

// values is row-major with x fastest: values[iy * x.size() + ix].
std::string heatmap_svg(const std::string& title,
                        const std::string& xlabel, const std::string& ylabel,
                        const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& values);

} // namespace coldsplit
