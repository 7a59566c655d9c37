#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slabtrans::app
{

struct Series
{
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool markers = false;
};

struct PlotStyle
{
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  /// Dotted guide lines of slope 0.4, 0.5 and 1.0 (log-log plots).
  bool slope_guides = false;
  /// Second panel restricted to this x-range.
  std::optional<std::pair<double, double>> zoom;
  int width = 720;
  int height = 440;
};

/// Self-contained SVG document. Throws std::invalid_argument when there is
/// nothing to draw.
std::string render_svg(const std::vector<Series>& series, const PlotStyle& style);

void emit_svg(const std::vector<Series>& series, const PlotStyle& style, const std::string& path);

/// Fixed palette, cycled.
std::string palette(std::size_t index);

} // namespace slabtrans::app
