// Minimal SVG emission for sweep results: line plots for 1-axis scans and
// heatmaps for 2-axis maps.  The CSV is the contract; these are a quick look.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace omsq::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string line_plot(const std::vector<Series>& series,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& title);

// values in row-major order (ny rows by nx columns); missing cells are drawn
// dark.  x spans [x0, x1] left-to-right, y spans [y0, y1] bottom-to-top.
std::string heatmap(const std::vector<std::optional<double>>& values, int nx,
                    int ny, double x0, double x1, double y0, double y1,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& title);

} // namespace omsq::plot
