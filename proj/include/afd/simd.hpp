#pragma once

#include <cstddef>
#include <string_view>

namespace afd::simd {

/// Table of the data-parallel inner loops used by the solvers and the
/// diagnostics. Every implementation must agree with the scalar reference:
/// bit for bit for the stencil, drift and difference kernels, and to a few
/// ulps for anything that calls pow.
///
/// Reductions accumulate into four interleaved partial sums (element k goes
/// to lane k mod 4) combined as (l0 + l1) + (l2 + l3), in every variant.
struct Kernels {
  const char* name;

  /// out[k] = phi(u[k]) where phi(z) = z^m for z >= eps and the tangent line
  /// at eps below it. With eps == 0, phi(z) = z^m for z > 0 and 0 otherwise.
  void (*power_map)(const double* u, double* out, std::size_t n, double m, double eps);

  /// out[k] += c * ((plus[k] + minus[k]) - 2 center[k])
  void (*second_diff_accum)(const double* center, const double* plus, const double* minus, double* out,
                            double c, std::size_t n);

  /// Upwind conservative flux difference along a contiguous line. Face k sits
  /// between node k and node k+1; wp >= 0 and wm <= 0 are the split face
  /// velocities. Reads v[-1..n] and wp/wm[-1..n-1].
  /// out[k] += c * ((wp[k-1] v[k-1] + wm[k-1] v[k]) - (wp[k] v[k] + wm[k] v[k+1]))
  void (*drift_row)(const double* v, const double* wp, const double* wm, double* out, double c, std::size_t n);

  /// Same flux difference across lines, with the face velocities constant
  /// along the line (lo/hi are the neighbouring lines).
  void (*drift_lines)(const double* v, const double* lo, const double* hi, double wp_lo, double wm_lo,
                      double wp_hi, double wm_hi, double* out, double c, std::size_t n);

  double (*sum)(const double* a, std::size_t n);
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
  /// Sum of max(a[k] - b[k], 0).
  double (*sum_pos_diff)(const double* a, const double* b, std::size_t n);
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  /// Sum of |a[k]|^p.
  double (*sum_pow)(const double* a, std::size_t n, double p);
  void (*min_max)(const double* a, std::size_t n, double* mn, double* mx);
};

const Kernels& scalar_kernels();
/// nullptr when the build or the CPU lacks AVX2.
const Kernels* avx2_kernels();

/// The table used by the solvers. Chosen once at first use: AVX2 when the CPU
/// supports it, unless the environment variable AFD_SIMD is set to "scalar".
const Kernels& active();
/// Override the active table ("scalar" or "avx2"); returns false if the
/// requested variant is unavailable.
bool select(std::string_view name);

}  // namespace afd::simd
