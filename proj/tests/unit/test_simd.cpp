#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "afd/simd.hpp"

using namespace afd;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

double ulps(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::abs(std::nextafter(a, INFINITY) - a);
}

}  // namespace

TEST_CASE("scalar power map follows the tangent-line regularization") {
  const simd::Kernels& k = simd::scalar_kernels();
  const double eps = 1e-3, m = 0.6;
  const std::vector<double> u = {0.0, 5e-4, 1e-3, 0.5, 2.0};
  std::vector<double> out(u.size());
  k.power_map(u.data(), out.data(), u.size(), m, eps);
  const double e_m = std::pow(eps, m), slope = m * std::pow(eps, m - 1.0);
  CHECK(out[0] == doctest::Approx(e_m - slope * eps));
  CHECK(out[1] == doctest::Approx(e_m + slope * (5e-4 - eps)));
  CHECK(out[2] == doctest::Approx(e_m));
  CHECK(out[3] == doctest::Approx(std::pow(0.5, m)));
  CHECK(out[4] == doctest::Approx(std::pow(2.0, m)));
  k.power_map(u.data(), out.data(), u.size(), m, 0.0);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == doctest::Approx(std::pow(5e-4, m)));
}

TEST_CASE("scalar reductions use the four-lane order") {
  const simd::Kernels& k = simd::scalar_kernels();
  const std::vector<double> a = {1e16, 1.0, -1e16, 1.0, 1.0, 0.0, 0.0, 0.0, 3.0};
  // lanes: l0 = 1e16 + 1 + 3, l1 = 1, l2 = -1e16, l3 = 1
  const double expect = ((1e16 + 1.0) + 3.0 + 1.0) + (-1e16 + 1.0);
  CHECK(k.sum(a.data(), a.size()) == expect);
  const std::vector<double> b(a.size(), 0.5);
  double mn = 0, mx = 0;
  k.min_max(a.data(), a.size(), &mn, &mx);
  CHECK(mn == -1e16);
  CHECK(mx == 1e16);
  const std::vector<double> c = {1.0, 4.0, 2.0};
  const std::vector<double> d = {2.0, 1.0, 2.0};
  CHECK(k.sum_abs_diff(c.data(), d.data(), 3) == 4.0);
  CHECK(k.sum_pos_diff(c.data(), d.data(), 3) == 3.0);
  CHECK(k.sum_sq_diff(c.data(), d.data(), 3) == 10.0);
  CHECK(k.sum_pow(c.data(), 3, 2.0) == doctest::Approx(21.0));
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const simd::Kernels* v = simd::avx2_kernels();
  if (v == nullptr) {
    MESSAGE("AVX2 unavailable; equivalence not exercised");
    return;
  }
  const simd::Kernels& s = simd::scalar_kernels();
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 257u, 1000u}) {
    CAPTURE(n);
    const auto u = random_values(n + 2, n, 0.0, 2.0);
    const auto w = random_values(n + 2, n + 1, -1.0, 1.0);
    const auto p = random_values(n + 2, n + 2, 0.0, 1.0);
    std::vector<double> wp(n + 1), wm(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      wp[k] = std::max(w[k], 0.0);
      wm[k] = std::min(w[k], 0.0);
    }

    std::vector<double> o1(n), o2(n);
    for (double eps : {0.0, 1e-3, 0.5}) {
      s.power_map(u.data(), o1.data(), n, 0.6, eps);
      v->power_map(u.data(), o2.data(), n, 0.6, eps);
      double worst = 0.0;
      for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, ulps(o1[k], o2[k]));
      CHECK(worst <= 4.0);
    }

    std::fill(o1.begin(), o1.end(), 0.25);
    std::fill(o2.begin(), o2.end(), 0.25);
    s.second_diff_accum(u.data() + 1, u.data() + 2, u.data(), o1.data(), 0.3, n);
    v->second_diff_accum(u.data() + 1, u.data() + 2, u.data(), o2.data(), 0.3, n);
    CHECK(same_bits(o1, o2));

    s.drift_row(u.data() + 1, wp.data() + 1, wm.data() + 1, o1.data(), 0.7, n);
    v->drift_row(u.data() + 1, wp.data() + 1, wm.data() + 1, o2.data(), 0.7, n);
    CHECK(same_bits(o1, o2));

    s.drift_lines(u.data(), p.data(), w.data(), 0.2, -0.1, 0.3, -0.4, o1.data(), 0.9, n);
    v->drift_lines(u.data(), p.data(), w.data(), 0.2, -0.1, 0.3, -0.4, o2.data(), 0.9, n);
    CHECK(same_bits(o1, o2));

    CHECK(s.sum(u.data(), n) == v->sum(u.data(), n));
    CHECK(s.sum_abs_diff(u.data(), p.data(), n) == v->sum_abs_diff(u.data(), p.data(), n));
    CHECK(s.sum_pos_diff(u.data(), p.data(), n) == v->sum_pos_diff(u.data(), p.data(), n));
    CHECK(s.sum_sq_diff(u.data(), p.data(), n) == v->sum_sq_diff(u.data(), p.data(), n));
    CHECK(ulps(s.sum_pow(u.data(), n, 1.7), v->sum_pow(u.data(), n, 1.7)) <= 8.0);
    CHECK(s.sum_pow(u.data(), n, 2.0) == doctest::Approx(v->sum_pow(u.data(), n, 2.0)).epsilon(1e-15));
    double a1, b1, a2, b2;
    s.min_max(w.data(), n, &a1, &b1);
    v->min_max(w.data(), n, &a2, &b2);
    CHECK(a1 == a2);
    CHECK(b1 == b2);
  }
}

TEST_CASE("runtime selection") {
  CHECK(simd::select("scalar"));
  CHECK(std::string(simd::active().name) == "scalar");
  if (simd::avx2_kernels() != nullptr) {
    CHECK(simd::select("avx2"));
    CHECK(std::string(simd::active().name) == "avx2");
  }
  CHECK_FALSE(simd::select("neon-on-x86"));
}
