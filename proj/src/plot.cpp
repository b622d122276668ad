#include "imbal/plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace imbal {

namespace {

constexpr double kCanvas = 640.0;
constexpr double kMargin = 20.0;

struct Box {
  double x_min, x_max, y_min, y_max;
};

Box padded_box(const Dataset& data) {
  if (data.dims() != 2)
    throw ParameterError("plot needs 2-D data; project with pca_project(data, 2) first (got " +
                         std::to_string(data.dims()) + " columns)");
  if (data.empty()) throw ParameterError("plot needs at least one point");
  Box b{data.row(0)[0], data.row(0)[0], data.row(0)[1], data.row(0)[1]};
  for (std::size_t i = 1; i < data.size(); ++i) {
    const auto x = data.row(i);
    b.x_min = std::min(b.x_min, x[0]);
    b.x_max = std::max(b.x_max, x[0]);
    b.y_min = std::min(b.y_min, x[1]);
    b.y_max = std::max(b.y_max, x[1]);
  }
  const double px = b.x_max > b.x_min ? 0.1 * (b.x_max - b.x_min) : 1.0;
  const double py = b.y_max > b.y_min ? 0.1 * (b.y_max - b.y_min) : 1.0;
  return {b.x_min - px, b.x_max + px, b.y_min - py, b.y_max + py};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

Lattice decision_lattice(const Dataset& data, const AnyModel& model, std::size_t grid_res) {
  if (grid_res == 0) throw ParameterError("grid_res must be positive");
  const Box b = padded_box(data);
  Lattice l;
  l.x_min = b.x_min;
  l.y_min = b.y_min;
  l.res = grid_res;
  l.cell_w = (b.x_max - b.x_min) / static_cast<double>(grid_res);
  l.cell_h = (b.y_max - b.y_min) / static_cast<double>(grid_res);
  l.labels.reserve(grid_res * grid_res);
  for (std::size_t r = 0; r < grid_res; ++r)
    for (std::size_t c = 0; c < grid_res; ++c) {
      const std::array<double, 2> p{l.center_x(c), l.center_y(r)};
      l.labels.push_back(predict(model, p));
    }
  return l;
}

std::string render_plot(const Dataset& data, const std::optional<AnyModel>& model, std::size_t grid_res) {
  const Box b = padded_box(data);
  const double span = kCanvas - 2.0 * kMargin;
  auto sx = [&](double x) { return kMargin + (x - b.x_min) / (b.x_max - b.x_min) * span; };
  auto sy = [&](double y) { return kCanvas - kMargin - (y - b.y_min) / (b.y_max - b.y_min) * span; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kCanvas) + "\" height=\"" +
         num(kCanvas) + "\" viewBox=\"0 0 " + num(kCanvas) + ' ' + num(kCanvas) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kCanvas) + "\" height=\"" + num(kCanvas) + "\" fill=\"white\"/>\n";

  if (model) {
    const auto lat = decision_lattice(data, *model, grid_res);
    svg += "<g id=\"regions\" stroke=\"none\" fill-opacity=\"0.35\">\n";
    for (std::size_t r = 0; r < lat.res; ++r) {
      // One rect per run of equal labels along the row.
      std::size_t c = 0;
      while (c < lat.res) {
        const ClassLabel lab = lat.at(r, c);
        std::size_t end = c + 1;
        while (end < lat.res && lat.at(r, end) == lab) ++end;
        const double x0 = sx(lat.x_min + static_cast<double>(c) * lat.cell_w);
        const double x1 = sx(lat.x_min + static_cast<double>(end) * lat.cell_w);
        const double y_top = sy(lat.y_min + static_cast<double>(r + 1) * lat.cell_h);
        const double y_bot = sy(lat.y_min + static_cast<double>(r) * lat.cell_h);
        svg += "<rect x=\"" + num(x0) + "\" y=\"" + num(y_top) + "\" width=\"" + num(x1 - x0) + "\" height=\"" +
               num(y_bot - y_top) + "\" fill=\"" + (lab == ClassLabel::Minority ? "#f08080" : "#87aade") +
               "\" class=\"" + (lab == ClassLabel::Minority ? "minority" : "majority") + "\"/>\n";
        c = end;
      }
    }
    svg += "</g>\n";
  }

  for (ClassLabel cls : {ClassLabel::Majority, ClassLabel::Minority}) {
    const bool minority = cls == ClassLabel::Minority;
    svg += std::string("<g id=\"") + (minority ? "minority" : "majority") + "\" fill=\"" +
           (minority ? "#d62728" : "#1f77b4") + "\" fill-opacity=\"0.7\">\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.label(i) != cls) continue;
      svg += "<circle cx=\"" + num(sx(data.row(i)[0])) + "\" cy=\"" + num(sy(data.row(i)[1])) + "\" r=\"2\"/>\n";
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace imbal
