// Dependency-free SVG charts with deterministic bytes: coefficient-vs-k
// panels with significance markers, and R-squared-vs-k comparison lines.
#pragma once

#include <string>
#include <vector>

namespace netspect {

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
    bool filled = false;  // filled square marker = significant at 5%
};

struct PlotSeries {
    std::string name;
    std::vector<PlotPoint> points;  // ascending x
};

/// Line-plus-square-marker chart; markers are filled when the point is
/// flagged. Throws MissingResults when no series has points.
std::string svg_marker_chart(const std::string& title, const std::string& x_label,
                             const std::string& y_label, const std::vector<PlotSeries>& series,
                             const std::string& config_hash);

/// Plain polyline comparison chart (no markers), one polyline per series.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<PlotSeries>& series,
                           const std::string& config_hash);

}  // namespace netspect
