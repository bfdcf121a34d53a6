#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "evoprune/objectives.hpp"

namespace evoprune::pipeline {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<ObjectiveVector> points;
  bool connect = false;  // draw as a step line sorted by f1
  double radius = 3.0;
};

/// Standalone SVG scatter plot, x = nonzero weights, y = error.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title);

void write_svg(const std::filesystem::path& path, const std::vector<PlotSeries>& series, const std::string& title);

}  // namespace evoprune::pipeline
