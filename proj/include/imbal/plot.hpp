#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "imbal/core.hpp"
#include "imbal/serialize.hpp"

namespace imbal {

/// grid_res x grid_res cell-centre predictions over the data's bounding box
/// padded by 10% on every side. labels are row-major with row 0 at y_min.
struct Lattice {
  double x_min = 0.0;
  double y_min = 0.0;
  double cell_w = 0.0;
  double cell_h = 0.0;
  std::size_t res = 0;
  std::vector<ClassLabel> labels;

  double center_x(std::size_t col) const { return x_min + (static_cast<double>(col) + 0.5) * cell_w; }
  double center_y(std::size_t row) const { return y_min + (static_cast<double>(row) + 0.5) * cell_h; }
  ClassLabel at(std::size_t row, std::size_t col) const { return labels[row * res + col]; }
};

Lattice decision_lattice(const Dataset& data, const AnyModel& model, std::size_t grid_res);

/// SVG 1.1 scatter of a 2-D dataset, optionally over shaded decision regions.
std::string render_plot(const Dataset& data, const std::optional<AnyModel>& model, std::size_t grid_res = 100);

}  // namespace imbal
