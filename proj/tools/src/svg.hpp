#pragma once

#include <string>
#include <vector>

namespace gsearch::cli {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#000000";
  double stroke_width = 1.0;
  std::string label;  ///< empty: not listed in the legend
};

struct Marker {
  double x = 0.0;
  double y = 0.0;
  std::string color = "#000000";
  std::string label;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 820;
  int height = 520;
};

/// Static SVG line plot (no scripts). Ranges cover all series and markers.
std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series,
                             const std::vector<Marker>& markers = {});

}  // namespace gsearch::cli
