#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace chiraldecay::cli {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // draw sample circles (scatter-ish)
};

struct SvgOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
};

// Minimal deterministic line plot: axes, 5 ticks per axis, legend, polylines.
void write_line_plot(const std::filesystem::path& path, const SvgOptions& opts,
                     const std::vector<SvgSeries>& series);

}  // namespace chiraldecay::cli
