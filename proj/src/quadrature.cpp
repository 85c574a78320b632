#include "afd/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace afd::quad {

double integrate(const Fn& f, double a, double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol);
}

double integrate_to_infinity(const Fn& f, double a, double rel_tol) {
  thread_local boost::math::quadrature::exp_sinh<double> rule(12);
  return rule.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol, nullptr, nullptr, nullptr);
}

double sphere_area(int dimension) {
  const double n = dimension;
  return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

double radial_integral(int dimension, const Fn& f, double rel_tol) {
  const double shell = sphere_area(dimension);
  const int d = dimension;
  return shell * integrate_to_infinity([&](double r) { return std::pow(r, d - 1) * f(r); }, 0.0, rel_tol);
}

double sum_power_unit_volume(std::span<const double> p) {
  double q = 0.0;
  double log_v = 0.0;
  for (double pi : p) {
    if (!(pi > 0)) throw std::invalid_argument("sum_power_unit_volume: exponents must be positive");
    q += 1.0 / pi;
    log_v += std::log(2.0) + boost::math::lgamma(1.0 + 1.0 / pi);
  }
  return std::exp(log_v - boost::math::lgamma(1.0 + q));
}

double sum_power_integral(std::span<const double> p, const Fn& g, double s_min, double rel_tol) {
  double q = 0.0;
  for (double pi : p) q += 1.0 / pi;
  const double v1 = sum_power_unit_volume(p);
  // vol{S <= s} = V1 s^q, so with t = s^q the layer measure is V1 dt.
  const double t0 = s_min > 0.0 ? std::pow(s_min, q) : 0.0;
  const double inv_q = 1.0 / q;
  return v1 * integrate_to_infinity([&](double t) { return g(std::pow(t, inv_q)); }, t0, rel_tol);
}

namespace {

struct Nested {
  std::span<const double> p;
  std::span<const double> c;
  const Fn& g;
  double s_min;
  double tol;

  double level(std::size_t k, double s) const {
    if (k == p.size()) return s >= s_min ? g(s) : 0.0;
    const double pk = p[k];
    const double ck = c.empty() ? 1.0 : c[k];
    auto inner = [&](double y) { return level(k + 1, s + ck * std::pow(y, pk)); };
    if (s >= s_min) return integrate_to_infinity(inner, 0.0, tol);
    const double ystar = std::pow((s_min - s) / ck, 1.0 / pk);
    double lower = 0.0;
    if (k + 1 < p.size()) lower = integrate(inner, 0.0, ystar, tol);
    return lower + integrate_to_infinity(inner, ystar, tol);
  }
};

}  // namespace

double sum_power_integral_nested(std::span<const double> p, const Fn& g, double s_min, double rel_tol,
                                 std::span<const double> coeff) {
  if (p.empty() || p.size() > 3) throw std::invalid_argument("sum_power_integral_nested: 1 to 3 axes");
  if (!coeff.empty() && coeff.size() != p.size()) throw std::invalid_argument("sum_power_integral_nested: coefficient count");
  Nested n{p, coeff, g, s_min, rel_tol};
  return std::ldexp(n.level(0, 0.0), static_cast<int>(p.size()));
}

}  // namespace afd::quad
