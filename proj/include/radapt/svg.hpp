#pragma once

#include <string>
#include <vector>

namespace radapt {

// One polyline of a plot.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal SVG line plot: axes, tick labels, polylines, legend. Output is a
// pure function of the inputs.
std::string render_line_plot(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series,
                             int width = 720, int height = 460);

}  // namespace radapt
