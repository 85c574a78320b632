#include <algorithm>
#include <cmath>

#include "afd/simd.hpp"

namespace afd::simd {

namespace {

inline double phi_scalar(double z, double m, double eps, double eps_m, double slope) {
  if (eps > 0.0) return z >= eps ? std::pow(z, m) : eps_m + slope * (z - eps);
  return z > 0.0 ? std::pow(z, m) : 0.0;
}

void power_map(const double* u, double* out, std::size_t n, double m, double eps) {
  const double eps_m = eps > 0.0 ? std::pow(eps, m) : 0.0;
  const double slope = eps > 0.0 ? m * eps_m / eps : 0.0;
  for (std::size_t k = 0; k < n; ++k) out[k] = phi_scalar(u[k], m, eps, eps_m, slope);
}

void second_diff_accum(const double* center, const double* plus, const double* minus, double* out, double c,
                       std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] += c * ((plus[k] + minus[k]) - 2.0 * center[k]);
}

void drift_row(const double* v, const double* wp, const double* wm, double* out, double c, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(k);
    const double in = wp[j - 1] * v[j - 1] + wm[j - 1] * v[j];
    const double outflux = wp[j] * v[j] + wm[j] * v[j + 1];
    out[k] += c * (in - outflux);
  }
}

void drift_lines(const double* v, const double* lo, const double* hi, double wp_lo, double wm_lo, double wp_hi,
                 double wm_hi, double* out, double c, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double in = wp_lo * lo[k] + wm_lo * v[k];
    const double outflux = wp_hi * v[k] + wm_hi * hi[k];
    out[k] += c * (in - outflux);
  }
}

template <class Term>
double lane_sum(std::size_t n, Term term) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) lane[k & 3] += term(k);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum(const double* a, std::size_t n) {
  return lane_sum(n, [&](std::size_t k) { return a[k]; });
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  return lane_sum(n, [&](std::size_t k) { return std::abs(a[k] - b[k]); });
}

double sum_pos_diff(const double* a, const double* b, std::size_t n) {
  return lane_sum(n, [&](std::size_t k) { return std::max(a[k] - b[k], 0.0); });
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  return lane_sum(n, [&](std::size_t k) {
    const double d = a[k] - b[k];
    return d * d;
  });
}

double sum_pow(const double* a, std::size_t n, double p) {
  return lane_sum(n, [&](std::size_t k) {
    const double x = std::abs(a[k]);
    return x > 0.0 ? std::pow(x, p) : 0.0;
  });
}

void min_max(const double* a, std::size_t n, double* mn, double* mx) {
  double lo = n ? a[0] : 0.0;
  double hi = lo;
  for (std::size_t k = 1; k < n; ++k) {
    lo = std::min(lo, a[k]);
    hi = std::max(hi, a[k]);
  }
  *mn = lo;
  *mx = hi;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels table{"scalar",    power_map,    second_diff_accum, drift_row, drift_lines, sum,
                             sum_abs_diff, sum_pos_diff, sum_sq_diff,       sum_pow,   min_max};
  return table;
}

}  // namespace afd::simd
