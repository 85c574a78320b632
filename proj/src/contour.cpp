#include "afd/contour.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace afd {

namespace {

struct Segment {
  std::size_t a, b;  // edge keys
  bool used = false;
};

}  // namespace

std::vector<Polyline> extract_contours(const Field& f, double level) {
  const Grid& g = f.grid();
  if (g.dimension() != 2) throw std::invalid_argument("contours need a 2-D field");
  const std::size_t n0 = g.points(0), n1 = g.points(1);
  if (!(level > f.min() && level < f.max())) return {};

  // edge key 2*node: edge to the +axis-1 neighbour; 2*node+1: edge to the +axis-0 neighbour
  auto node = [&](std::size_t i, std::size_t j) { return i * n1 + j; };
  auto edge_point = [&](std::size_t key) -> std::array<double, 2> {
    const std::size_t nd = key / 2;
    const std::size_t i = nd / n1, j = nd % n1;
    const bool along0 = key % 2 == 1;
    const std::size_t i2 = along0 ? i + 1 : i, j2 = along0 ? j : j + 1;
    const double a = f[nd], b = f[node(i2, j2)];
    const double t = (level - a) / (b - a);
    const double x0 = g.coord(0, i), x1 = g.coord(0, i2);
    const double y0 = g.coord(1, j), y1 = g.coord(1, j2);
    return {x0 + t * (x1 - x0), y0 + t * (y1 - y0)};
  };

  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < n0; ++i) {
    for (std::size_t j = 0; j + 1 < n1; ++j) {
      const double v00 = f[node(i, j)], v01 = f[node(i, j + 1)];
      const double v10 = f[node(i + 1, j)], v11 = f[node(i + 1, j + 1)];
      const int code = (v00 > level ? 1 : 0) | (v01 > level ? 2 : 0) | (v11 > level ? 4 : 0) | (v10 > level ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const std::size_t bottom = 2 * node(i, j);          // (i,j)-(i,j+1)
      const std::size_t top = 2 * node(i + 1, j);         // (i+1,j)-(i+1,j+1)
      const std::size_t left = 2 * node(i, j) + 1;        // (i,j)-(i+1,j)
      const std::size_t right = 2 * node(i, j + 1) + 1;   // (i,j+1)-(i+1,j+1)
      const bool center_in = 0.25 * (v00 + v01 + v10 + v11) > level;
      switch (code) {
        case 1: case 14: segs.push_back({left, bottom}); break;
        case 2: case 13: segs.push_back({bottom, right}); break;
        case 4: case 11: segs.push_back({right, top}); break;
        case 8: case 7: segs.push_back({top, left}); break;
        case 3: case 12: segs.push_back({left, right}); break;
        case 6: case 9: segs.push_back({bottom, top}); break;
        case 5:
          if (center_in) {
            segs.push_back({left, top});
            segs.push_back({bottom, right});
          } else {
            segs.push_back({left, bottom});
            segs.push_back({right, top});
          }
          break;
        case 10:
          if (center_in) {
            segs.push_back({left, bottom});
            segs.push_back({right, top});
          } else {
            segs.push_back({left, top});
            segs.push_back({bottom, right});
          }
          break;
        default: break;
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> touching;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    touching[segs[s].a].push_back(s);
    touching[segs[s].b].push_back(s);
  }

  std::vector<Polyline> out;
  auto trace = [&](std::size_t start_edge) {
    Polyline pl;
    pl.level = level;
    std::size_t edge = start_edge;
    pl.points.push_back(edge_point(edge));
    for (;;) {
      std::size_t next_seg = segs.size();
      for (std::size_t s : touching[edge]) {
        if (!segs[s].used) {
          next_seg = s;
          break;
        }
      }
      if (next_seg == segs.size()) break;
      Segment& sg = segs[next_seg];
      sg.used = true;
      edge = sg.a == edge ? sg.b : sg.a;
      if (edge == start_edge) {
        pl.closed = true;
        break;
      }
      pl.points.push_back(edge_point(edge));
    }
    if (pl.points.size() >= 2) out.push_back(std::move(pl));
  };

  for (const auto& [edge, list] : touching) {
    if (list.size() == 1 && !segs[list[0]].used) trace(edge);
  }
  for (const auto& [edge, list] : touching) {
    for (std::size_t s : list) {
      if (!segs[s].used) trace(edge);
    }
  }
  return out;
}

LevelSet export_levels(const Field& f, std::span<const double> levels) {
  LevelSet set;
  const double lo = f.min(), hi = f.max();
  for (double level : levels) {
    if (!(level > lo && level < hi)) {
      set.skipped.push_back(level);
      continue;
    }
    auto lines = extract_contours(f, level);
    set.lines.insert(set.lines.end(), std::make_move_iterator(lines.begin()), std::make_move_iterator(lines.end()));
  }
  return set;
}

void write_contours_csv(std::ostream& os, const std::vector<Polyline>& lines) {
  os << "level,polyline_id,closed,x,y\n";
  char buf[128];
  for (std::size_t id = 0; id < lines.size(); ++id) {
    const Polyline& p = lines[id];
    auto row = [&](const std::array<double, 2>& q) {
      std::snprintf(buf, sizeof buf, "%.17g,%zu,%d,%.17g,%.17g\n", p.level, id, p.closed ? 1 : 0, q[0], q[1]);
      os << buf;
    };
    for (const auto& q : p.points) row(q);
    if (p.closed && !p.points.empty()) row(p.points.front());
  }
}

Extent extent(const Polyline& p) {
  Extent e;
  if (p.points.empty()) return e;
  e.x_min = e.x_max = p.points[0][0];
  e.y_min = e.y_max = p.points[0][1];
  for (const auto& q : p.points) {
    e.x_min = std::min(e.x_min, q[0]);
    e.x_max = std::max(e.x_max, q[0]);
    e.y_min = std::min(e.y_min, q[1]);
    e.y_max = std::max(e.y_max, q[1]);
  }
  return e;
}

}  // namespace afd
