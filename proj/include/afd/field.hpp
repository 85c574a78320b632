#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace afd {

/// Uniform node-centred box [-L_1, L_1] x ... x [-L_N, L_N], N in {1, 2, 3}.
/// Storage is row-major with the last axis contiguous. Node coordinates are
/// computed as (k - (n-1)/2) h so mirrored nodes have exactly negated
/// coordinates.
class Grid {
 public:
  static constexpr int kMaxDim = 3;

  Grid() = default;
  Grid(std::vector<double> half_width, std::vector<std::size_t> points);
  static Grid cube(int dimension, double half_width, std::size_t points);

  int dimension() const { return dim_; }
  double half_width(int i) const { return half_width_[i]; }
  std::size_t points(int i) const { return points_[i]; }
  double spacing(int i) const { return spacing_[i]; }
  std::size_t stride(int i) const { return stride_[i]; }
  std::size_t size() const { return size_; }
  double cell_volume() const;

  double coord(int i, std::size_t k) const {
    return (static_cast<double>(k) - 0.5 * static_cast<double>(points_[i] - 1)) * spacing_[i];
  }
  /// Index of the node nearest to the origin along axis i (upper one if n_i is even).
  std::size_t center_index(int i) const { return points_[i] / 2; }

  std::array<std::size_t, kMaxDim> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const std::size_t> idx) const;
  bool is_interior(std::span<const std::size_t> idx) const;

  /// Same index layout with spacings multiplied by the given per-axis factors.
  Grid stretched(std::span<const double> factors) const;

  bool same_shape(const Grid& other) const;
  bool operator==(const Grid& other) const;

  template <class Fn>
  void for_each_node(Fn&& fn) const {
    std::array<std::size_t, kMaxDim> idx{};
    for (std::size_t flat = 0; flat < size_; ++flat) {
      fn(flat, std::span<const std::size_t>(idx.data(), dim_));
      for (int i = dim_ - 1; i >= 0; --i) {
        if (++idx[i] < points_[i]) break;
        idx[i] = 0;
      }
    }
  }

 private:
  int dim_ = 0;
  std::array<double, kMaxDim> half_width_{};
  std::array<std::size_t, kMaxDim> points_{1, 1, 1};
  std::array<double, kMaxDim> spacing_{};
  std::array<std::size_t, kMaxDim> stride_{};
  std::size_t size_ = 0;
};

/// Sampled nonnegative density on a Grid at a given time.
class Field {
 public:
  Field() = default;
  explicit Field(Grid grid, double time = 0.0);
  Field(Grid grid, std::vector<double> values, double time);

  const Grid& grid() const { return grid_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& storage() { return values_; }

  /// Multilinear interpolation; zero outside the box.
  double interpolate(std::span<const double> x) const;

  double mass() const;
  double max() const;
  double min() const;
  /// Discrete L^p norm; p = infinity gives the max norm.
  double lp_norm(double p) const;

  /// Resample onto another grid by multilinear interpolation with zero extension.
  Field resampled(const Grid& target) const;

 private:
  Grid grid_;
  std::vector<double> values_;
  double time_ = 0.0;
};

/// Sum of |a - b| times cell volume. Grids must have the same shape.
double l1_distance(const Field& a, const Field& b);
/// Sum of (a - b)_+ times cell volume.
double positive_part_distance(const Field& a, const Field& b);
double max_distance(const Field& a, const Field& b);

}  // namespace afd
