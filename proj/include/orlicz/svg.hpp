#pragma once

// Minimal standalone SVG writers for report plots.

#include <string>
#include <vector>

#include "orlicz/measure.hpp"

namespace orlicz::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  bool log_y = false;
};

/// Polyline chart with markers and a legend.  Nonpositive values are dropped
/// on log axes.
std::string line_plot(const std::vector<Series>& series, const PlotSpec& spec);

/// Square-cell heat map of `values` at Cartesian `points` (cell side `cell`).
std::string heatmap(const std::vector<Point>& points, const std::vector<double>& values, double cell,
                    const std::string& title);

}  // namespace orlicz::svg
