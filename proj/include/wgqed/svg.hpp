#pragma once

// Minimal deterministic SVG line plots.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wgqed::svg {

class PlotError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Trace {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<bool> mask;  // optional; false (or non-finite y) breaks the line
  bool dashed = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Trace> traces;
  std::optional<std::pair<double, double>> y_range;
};

/// Self-contained SVG document. Throws PlotError when no trace has points.
std::string emit_svg(const Plot& plot);

}  // namespace wgqed::svg
