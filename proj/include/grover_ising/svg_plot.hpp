#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace grover_ising {

enum class SeriesStyle { line, dashed, points, steps };

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  SeriesStyle style = SeriesStyle::line;
};

/// Minimal static 2D plot. Non-finite points (and non-positive ones on a
/// log axis) are skipped.
struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<PlotSeries> series;
  std::vector<double> vertical_markers;  // dashed reference lines at these x
};

std::string render_svg(const Plot& plot, int width = 720, int height = 480);
void write_svg(const Plot& plot, const std::filesystem::path& path);

}  // namespace grover_ising
