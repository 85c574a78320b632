#include <immintrin.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "afd/simd.hpp"

namespace afd::simd {

namespace {

// Cephes-style natural log for normal positive doubles.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
  const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(exp_bits, _mm256_castpd_si256(two52))), two52);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));

  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);
  __m256d f = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d small = _mm256_cmp_pd(f, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, one));
  f = _mm256_sub_pd(_mm256_add_pd(f, _mm256_and_pd(small, f)), one);

  const __m256d z = _mm256_mul_pd(f, f);
  __m256d p = _mm256_set1_pd(1.01875663804580931796E-4);
  p = _mm256_add_pd(_mm256_mul_pd(p, f), _mm256_set1_pd(4.97494994976747001425E-1));
  p = _mm256_add_pd(_mm256_mul_pd(p, f), _mm256_set1_pd(4.70579119878881725854E0));
  p = _mm256_add_pd(_mm256_mul_pd(p, f), _mm256_set1_pd(1.44989225341610930846E1));
  p = _mm256_add_pd(_mm256_mul_pd(p, f), _mm256_set1_pd(1.79368678507819816313E1));
  p = _mm256_add_pd(_mm256_mul_pd(p, f), _mm256_set1_pd(7.70838733755885391666E0));
  __m256d q = _mm256_add_pd(f, _mm256_set1_pd(1.12873587189167450590E1));
  q = _mm256_add_pd(_mm256_mul_pd(q, f), _mm256_set1_pd(4.52279145837532221105E1));
  q = _mm256_add_pd(_mm256_mul_pd(q, f), _mm256_set1_pd(8.29875266912776603211E1));
  q = _mm256_add_pd(_mm256_mul_pd(q, f), _mm256_set1_pd(7.11544750618563894466E1));
  q = _mm256_add_pd(_mm256_mul_pd(q, f), _mm256_set1_pd(2.31251620126765340583E1));

  __m256d y = _mm256_mul_pd(f, _mm256_div_pd(_mm256_mul_pd(z, p), q));
  y = _mm256_sub_pd(y, _mm256_mul_pd(e, _mm256_set1_pd(2.121944400546905827679e-4)));
  y = _mm256_sub_pd(y, _mm256_mul_pd(z, _mm256_set1_pd(0.5)));
  __m256d r = _mm256_add_pd(f, y);
  return _mm256_add_pd(r, _mm256_mul_pd(e, _mm256_set1_pd(0.693359375)));
}

// Cephes-style exp; arguments below -708 flush to zero.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), _mm256_set1_pd(709.0));

  __m256d n = _mm256_floor_pd(_mm256_add_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                            _mm256_set1_pd(0.5)));
  x = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(6.93145751953125E-1)));
  x = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(1.42860682030941723212E-6)));

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_add_pd(_mm256_mul_pd(p, xx), _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_add_pd(_mm256_mul_pd(p, xx), _mm256_set1_pd(9.99999999999999999910E-1));
  p = _mm256_mul_pd(p, x);
  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(2.00000000000000000009E0));

  __m256d r = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  r = _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(_mm256_set1_pd(2.0), r));

  const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
  const __m256i biased = _mm256_castpd_si256(_mm256_add_pd(_mm256_add_pd(n, _mm256_set1_pd(1023.0)), two52));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
  r = _mm256_mul_pd(r, scale);
  return _mm256_andnot_pd(underflow, r);
}

// |x|^p for x > 0 (normal range), zero elsewhere.
inline __m256d pow_pos(__m256d x, __m256d p) {
  const __m256d pos = _mm256_cmp_pd(x, _mm256_set1_pd(DBL_MIN), _CMP_GE_OQ);
  const __m256d safe = _mm256_max_pd(x, _mm256_set1_pd(DBL_MIN));
  return _mm256_and_pd(pos, exp_pd(_mm256_mul_pd(p, log_pd(safe))));
}

inline __m256d phi_pd(__m256d z, __m256d mv, __m256d epsv, __m256d eps_m, __m256d slope, bool regularized) {
  const __m256d pw = pow_pos(z, mv);
  if (!regularized) return pw;
  const __m256d lin = _mm256_add_pd(eps_m, _mm256_mul_pd(slope, _mm256_sub_pd(z, epsv)));
  const __m256d above = _mm256_cmp_pd(z, epsv, _CMP_GE_OQ);
  return _mm256_blendv_pd(lin, pw, above);
}

void power_map(const double* u, double* out, std::size_t n, double m, double eps) {
  const bool reg = eps > 0.0;
  const double eps_m_s = reg ? std::pow(eps, m) : 0.0;
  const double slope_s = reg ? m * eps_m_s / eps : 0.0;
  const __m256d mv = _mm256_set1_pd(m);
  const __m256d epsv = _mm256_set1_pd(eps);
  const __m256d eps_m = _mm256_set1_pd(eps_m_s);
  const __m256d slope = _mm256_set1_pd(slope_s);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(out + k, phi_pd(_mm256_loadu_pd(u + k), mv, epsv, eps_m, slope, reg));
  }
  if (k < n) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    std::memcpy(buf, u + k, (n - k) * sizeof(double));
    _mm256_store_pd(buf, phi_pd(_mm256_load_pd(buf), mv, epsv, eps_m, slope, reg));
    std::memcpy(out + k, buf, (n - k) * sizeof(double));
  }
}

void second_diff_accum(const double* center, const double* plus, const double* minus, double* out, double c,
                       std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d s = _mm256_add_pd(_mm256_loadu_pd(plus + k), _mm256_loadu_pd(minus + k));
    const __m256d d = _mm256_sub_pd(s, _mm256_mul_pd(two, _mm256_loadu_pd(center + k)));
    _mm256_storeu_pd(out + k, _mm256_add_pd(_mm256_loadu_pd(out + k), _mm256_mul_pd(cv, d)));
  }
  for (; k < n; ++k) out[k] += c * ((plus[k] + minus[k]) - 2.0 * center[k]);
}

void drift_row(const double* v, const double* wp, const double* wm, double* out, double c, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vl = _mm256_loadu_pd(v + k - 1);
    const __m256d vc = _mm256_loadu_pd(v + k);
    const __m256d vh = _mm256_loadu_pd(v + k + 1);
    const __m256d in = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(wp + k - 1), vl),
                                     _mm256_mul_pd(_mm256_loadu_pd(wm + k - 1), vc));
    const __m256d of = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(wp + k), vc),
                                     _mm256_mul_pd(_mm256_loadu_pd(wm + k), vh));
    _mm256_storeu_pd(out + k, _mm256_add_pd(_mm256_loadu_pd(out + k), _mm256_mul_pd(cv, _mm256_sub_pd(in, of))));
  }
  for (; k < n; ++k) {
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(k);
    const double in = wp[j - 1] * v[j - 1] + wm[j - 1] * v[j];
    const double outflux = wp[j] * v[j] + wm[j] * v[j + 1];
    out[k] += c * (in - outflux);
  }
}

void drift_lines(const double* v, const double* lo, const double* hi, double wp_lo, double wm_lo, double wp_hi,
                 double wm_hi, double* out, double c, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d wpl = _mm256_set1_pd(wp_lo), wml = _mm256_set1_pd(wm_lo);
  const __m256d wph = _mm256_set1_pd(wp_hi), wmh = _mm256_set1_pd(wm_hi);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vc = _mm256_loadu_pd(v + k);
    const __m256d in = _mm256_add_pd(_mm256_mul_pd(wpl, _mm256_loadu_pd(lo + k)), _mm256_mul_pd(wml, vc));
    const __m256d of = _mm256_add_pd(_mm256_mul_pd(wph, vc), _mm256_mul_pd(wmh, _mm256_loadu_pd(hi + k)));
    _mm256_storeu_pd(out + k, _mm256_add_pd(_mm256_loadu_pd(out + k), _mm256_mul_pd(cv, _mm256_sub_pd(in, of))));
  }
  for (; k < n; ++k) {
    const double in = wp_lo * lo[k] + wm_lo * v[k];
    const double outflux = wp_hi * v[k] + wm_hi * hi[k];
    out[k] += c * (in - outflux);
  }
}

inline double finish(__m256d acc) {
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

// Drives a lane-interleaved reduction; the tail is zero padded so every
// element goes through the same vector term.
template <class Term>
double reduce2(const double* a, const double* b, std::size_t n, Term term) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc = _mm256_add_pd(acc, term(_mm256_loadu_pd(a + k), b ? _mm256_loadu_pd(b + k) : _mm256_setzero_pd()));
  }
  if (k < n) {
    alignas(32) double ba[4] = {0.0, 0.0, 0.0, 0.0};
    alignas(32) double bb[4] = {0.0, 0.0, 0.0, 0.0};
    std::memcpy(ba, a + k, (n - k) * sizeof(double));
    if (b) std::memcpy(bb, b + k, (n - k) * sizeof(double));
    acc = _mm256_add_pd(acc, term(_mm256_load_pd(ba), _mm256_load_pd(bb)));
  }
  return finish(acc);
}

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

double sum(const double* a, std::size_t n) {
  return reduce2(a, nullptr, n, [](__m256d x, __m256d) { return x; });
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  return reduce2(a, b, n, [](__m256d x, __m256d y) { return abs_pd(_mm256_sub_pd(x, y)); });
}

double sum_pos_diff(const double* a, const double* b, std::size_t n) {
  return reduce2(a, b, n, [](__m256d x, __m256d y) { return _mm256_max_pd(_mm256_sub_pd(x, y), _mm256_setzero_pd()); });
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  return reduce2(a, b, n, [](__m256d x, __m256d y) {
    const __m256d d = _mm256_sub_pd(x, y);
    return _mm256_mul_pd(d, d);
  });
}

double sum_pow(const double* a, std::size_t n, double p) {
  const __m256d pv = _mm256_set1_pd(p);
  return reduce2(a, nullptr, n, [&](__m256d x, __m256d) { return pow_pos(abs_pd(x), pv); });
}

void min_max(const double* a, std::size_t n, double* mn, double* mx) {
  if (n == 0) {
    *mn = *mx = 0.0;
    return;
  }
  __m256d lo = _mm256_set1_pd(a[0]);
  __m256d hi = lo;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x = _mm256_loadu_pd(a + k);
    lo = _mm256_min_pd(lo, x);
    hi = _mm256_max_pd(hi, x);
  }
  alignas(32) double l[4], h[4];
  _mm256_store_pd(l, lo);
  _mm256_store_pd(h, hi);
  double rl = std::min(std::min(l[0], l[1]), std::min(l[2], l[3]));
  double rh = std::max(std::max(h[0], h[1]), std::max(h[2], h[3]));
  for (; k < n; ++k) {
    rl = std::min(rl, a[k]);
    rh = std::max(rh, a[k]);
  }
  *mn = rl;
  *mx = rh;
}

}  // namespace

const Kernels& avx2_table() {
  static const Kernels table{"avx2",       power_map,    second_diff_accum, drift_row, drift_lines, sum,
                             sum_abs_diff, sum_pos_diff, sum_sq_diff,       sum_pow,   min_max};
  return table;
}

}  // namespace afd::simd
