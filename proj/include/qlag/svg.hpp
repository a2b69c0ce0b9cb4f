#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qlag {

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

enum class PlotKind {
  kLine,      // one polyline per series
  kLogLog,    // polylines in log10 coordinates, optional slope annotation
  kSpectrum,  // one marker per value, ys over index
};

struct PlotSpec {
  PlotKind kind = PlotKind::kLine;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::optional<double> slope;
};

// Standalone SVG 1.1 document. Layout depends only on the input.
// Throws InvalidArgument when there is nothing to draw.
std::string emit_svg(const PlotSpec& spec);

}  // namespace qlag
