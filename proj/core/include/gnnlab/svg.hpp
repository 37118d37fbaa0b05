#pragma once

#include <string>
#include <vector>

namespace gnnlab {

/// Minimal hand-emitted SVG line charts: axes, ticks, legend, one polyline
/// per series. Data-faithful linear scaling, no charting dependency.
struct LineChart {
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // sorted by x by caller
  };

  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 640;
  int height = 420;

  std::string render() const;
};

}  // namespace gnnlab
