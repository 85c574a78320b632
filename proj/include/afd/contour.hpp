#pragma once

#include <array>
#include <ostream>
#include <span>
#include <vector>

#include "afd/field.hpp"

namespace afd {

struct Polyline {
  double level = 0.0;
  bool closed = false;
  std::vector<std::array<double, 2>> points;
};

/// Marching-squares level lines of a 2-D field. Nodes strictly above the level
/// count as inside; saddle cells are resolved by the cell average. Levels
/// outside (min, max) yield no polylines.
std::vector<Polyline> extract_contours(const Field& f, double level);

struct LevelSet {
  std::vector<Polyline> lines;
  /// Levels that fell outside the field range.
  std::vector<double> skipped;
};

LevelSet export_levels(const Field& f, std::span<const double> levels);

/// Columns: level, polyline_id, closed, x, y. Closed polylines repeat their
/// first point at the end.
void write_contours_csv(std::ostream& os, const std::vector<Polyline>& lines);

struct Extent {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

Extent extent(const Polyline& p);

}  // namespace afd
