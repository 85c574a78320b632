#include <doctest.h>

#include <cmath>
#include <sstream>

#include "afd/contour.hpp"

using namespace afd;

namespace {

Field radial(const Grid& g, double sx = 1.0, double sy = 1.0) {
  Field f(g);
  g.for_each_node([&](std::size_t k, std::span<const std::size_t> i) {
    const double x = g.coord(0, i[0]) / sx, y = g.coord(1, i[1]) / sy;
    f[k] = std::exp(-(x * x + y * y));
  });
  return f;
}

}  // namespace

TEST_CASE("radially symmetric field gives round closed contours") {
  const Grid g = Grid::cube(2, 3.0, 121);
  const std::vector<double> levels = {0.1, 0.5, 0.9};
  const LevelSet ls = export_levels(radial(g), levels);
  REQUIRE(ls.lines.size() == 3);
  CHECK(ls.skipped.empty());
  for (const Polyline& p : ls.lines) {
    CHECK(p.closed);
    const Extent e = extent(p);
    CHECK(e.width() / e.height() == doctest::Approx(1.0).epsilon(0.02));
    const double r = std::sqrt(-std::log(p.level));
    CHECK(e.width() == doctest::Approx(2.0 * r).epsilon(0.02));
  }
}

TEST_CASE("elongated field gives elongated contours") {
  const Grid g({6.0, 3.0}, {121, 61});
  const auto lines = extract_contours(radial(g, 2.0, 1.0), 0.3);
  REQUIRE(lines.size() == 1);
  const Extent e = extent(lines[0]);
  CHECK(e.width() / e.height() == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("single-node peak is enclosed by its contour") {
  const Grid g = Grid::cube(2, 2.0, 5);
  Field f(g);
  f[g.flatten(std::vector<std::size_t>{2, 2})] = 1.0;
  const auto lines = extract_contours(f, 0.5);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].closed);
  const Extent e = extent(lines[0]);
  CHECK(e.x_min < 0.0);
  CHECK(e.x_max > 0.0);
  CHECK(e.y_min < 0.0);
  CHECK(e.y_max > 0.0);
  CHECK(e.width() == doctest::Approx(1.0));
}

TEST_CASE("contour cut by the box is open; out-of-range level is skipped") {
  const Grid g = Grid::cube(2, 3.0, 61);
  Field f(g);
  g.for_each_node([&](std::size_t k, std::span<const std::size_t> i) { f[k] = g.coord(0, i[0]); });
  const auto lines = extract_contours(f, 0.25);
  REQUIRE(lines.size() == 1);
  CHECK_FALSE(lines[0].closed);
  for (const auto& p : lines[0].points) CHECK(p[0] == doctest::Approx(0.25));
  const std::vector<double> levels = {10.0, 0.0};
  const LevelSet ls = export_levels(f, levels);
  CHECK(ls.skipped == std::vector<double>{10.0});
  CHECK(ls.lines.size() == 1);
}

TEST_CASE("contour CSV layout") {
  const Grid g = Grid::cube(2, 2.0, 5);
  Field f(g);
  f[g.flatten(std::vector<std::size_t>{2, 2})] = 1.0;
  std::ostringstream os;
  write_contours_csv(os, extract_contours(f, 0.5));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "level,polyline_id,closed,x,y");
  std::vector<std::string> rows;
  while (std::getline(is, line)) rows.push_back(line);
  REQUIRE(rows.size() == 5);  // four crossings plus the repeated first point
  CHECK(rows.front() == rows.back());
}
