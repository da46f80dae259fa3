#pragma once

#include <span>
#include <string>

namespace flexagg::cli {

struct Series {
  std::string label;
  std::span<const double> values;
  std::string color;
};

// Standalone SVG with axes and one polyline per series. Series share the
// x axis (step index 1..n) and a y range that always includes zero.
std::string line_plot(std::span<const Series> series, const std::string& title);

}  // namespace flexagg::cli
