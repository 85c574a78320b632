#include "afd/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace afd {

Grid::Grid(std::vector<double> half_width, std::vector<std::size_t> points) {
  if (half_width.size() != points.size() || half_width.empty() || half_width.size() > kMaxDim) {
    throw std::invalid_argument("grid: need 1 to 3 axes with matching extents and point counts");
  }
  dim_ = static_cast<int>(points.size());
  for (int i = 0; i < dim_; ++i) {
    if (points[i] < 3) throw std::invalid_argument("grid: at least 3 points per axis");
    if (!(half_width[i] > 0) || !std::isfinite(half_width[i])) throw std::invalid_argument("grid: half-width must be positive");
    half_width_[i] = half_width[i];
    points_[i] = points[i];
    spacing_[i] = 2.0 * half_width[i] / static_cast<double>(points[i] - 1);
  }
  std::size_t s = 1;
  for (int i = dim_ - 1; i >= 0; --i) {
    stride_[i] = s;
    s *= points_[i];
  }
  size_ = s;
}

Grid Grid::cube(int dimension, double half_width, std::size_t points) {
  return Grid(std::vector<double>(dimension, half_width), std::vector<std::size_t>(dimension, points));
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dim_; ++i) v *= spacing_[i];
  return v;
}

std::array<std::size_t, Grid::kMaxDim> Grid::unflatten(std::size_t flat) const {
  std::array<std::size_t, kMaxDim> idx{};
  for (int i = 0; i < dim_; ++i) {
    idx[i] = flat / stride_[i];
    flat -= idx[i] * stride_[i];
  }
  return idx;
}

std::size_t Grid::flatten(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (int i = 0; i < dim_; ++i) flat += idx[i] * stride_[i];
  return flat;
}

bool Grid::is_interior(std::span<const std::size_t> idx) const {
  for (int i = 0; i < dim_; ++i) {
    if (idx[i] == 0 || idx[i] + 1 >= points_[i]) return false;
  }
  return true;
}

Grid Grid::stretched(std::span<const double> factors) const {
  std::vector<double> hw(dim_);
  std::vector<std::size_t> pts(dim_);
  for (int i = 0; i < dim_; ++i) {
    hw[i] = half_width_[i] * factors[i];
    pts[i] = points_[i];
    if (!(hw[i] > 0) || !std::isfinite(hw[i])) throw std::domain_error("grid: degenerate spacing after stretching");
  }
  return Grid(std::move(hw), std::move(pts));
}

bool Grid::same_shape(const Grid& other) const {
  if (dim_ != other.dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    if (points_[i] != other.points_[i]) return false;
  }
  return true;
}

bool Grid::operator==(const Grid& other) const {
  if (!same_shape(other)) return false;
  for (int i = 0; i < dim_; ++i) {
    if (half_width_[i] != other.half_width_[i]) return false;
  }
  return true;
}

Field::Field(Grid grid, double time) : grid_(std::move(grid)), values_(grid_.size(), 0.0), time_(time) {}

Field::Field(Grid grid, std::vector<double> values, double time)
    : grid_(std::move(grid)), values_(std::move(values)), time_(time) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("field: value count does not match grid");
}

double Field::interpolate(std::span<const double> x) const {
  const int d = grid_.dimension();
  std::array<std::size_t, Grid::kMaxDim> base{};
  std::array<double, Grid::kMaxDim> frac{};
  for (int i = 0; i < d; ++i) {
    const double s = (x[i] + grid_.half_width(i)) / grid_.spacing(i);
    const double last = static_cast<double>(grid_.points(i) - 1);
    if (!(s >= 0.0) || s > last) return 0.0;
    double fl = std::floor(s);
    if (fl >= last) fl = last - 1.0;
    base[i] = static_cast<std::size_t>(fl);
    frac[i] = s - fl;
  }
  double acc = 0.0;
  const int corners = 1 << d;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    for (int i = 0; i < d; ++i) {
      const bool up = (c >> i) & 1;
      w *= up ? frac[i] : 1.0 - frac[i];
      flat += (base[i] + (up ? 1 : 0)) * grid_.stride(i);
    }
    if (w != 0.0) acc += w * values_[flat];
  }
  return acc;
}

double Field::mass() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_volume();
}

double Field::max() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }
double Field::min() const { return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end()); }

double Field::lp_norm(double p) const {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : values_) s += std::pow(std::abs(v), p);
  return std::pow(s * grid_.cell_volume(), 1.0 / p);
}

Field Field::resampled(const Grid& target) const {
  if (target.dimension() != grid_.dimension()) throw std::invalid_argument("resample: dimension mismatch");
  Field out(target, time_);
  std::array<double, Grid::kMaxDim> x{};
  target.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) {
    for (int i = 0; i < target.dimension(); ++i) x[i] = target.coord(i, idx[i]);
    out[flat] = interpolate(std::span<const double>(x.data(), target.dimension()));
  });
  return out;
}

namespace {
void require_same(const Field& a, const Field& b) {
  if (!a.grid().same_shape(b.grid())) throw std::invalid_argument("field comparison: grid mismatch");
}
}  // namespace

double l1_distance(const Field& a, const Field& b) {
  require_same(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * a.grid().cell_volume();
}

double positive_part_distance(const Field& a, const Field& b) {
  require_same(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::max(a[i] - b[i], 0.0);
  return s * a.grid().cell_volume();
}

double max_distance(const Field& a, const Field& b) {
  require_same(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace afd
