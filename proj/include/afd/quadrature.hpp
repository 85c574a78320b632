#pragma once

#include <functional>
#include <span>

namespace afd::quad {

using Fn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on [a, b].
double integrate(const Fn& f, double a, double b, double rel_tol = 1e-10);

/// Integral over [a, infinity) of a decaying integrand.
double integrate_to_infinity(const Fn& f, double a, double rel_tol = 1e-10);

/// Surface area of the unit sphere in R^N.
double sphere_area(int dimension);

/// Integral over R^N of a radial function f(|y|).
double radial_integral(int dimension, const Fn& f, double rel_tol = 1e-10);

/// Measure of {y : sum_i |y_i|^{p_i} <= 1}: 2^N prod Gamma(1 + 1/p_i) / Gamma(1 + sum 1/p_i).
double sum_power_unit_volume(std::span<const double> p);

/// Integral over R^N of g(S(y)) restricted to S(y) >= s_min, S(y) = sum_i |y_i|^{p_i},
/// by reduction to one dimension through the layer-volume formula.
double sum_power_integral(std::span<const double> p, const Fn& g, double s_min = 0.0, double rel_tol = 1e-10);

/// Integral over R^N of g(S(y)) on S(y) >= s_min with S(y) = sum_i c_i |y_i|^{p_i}
/// (c_i = 1 when coeff is empty), by nested one-dimensional quadrature over
/// the axes. Independent of the layer-volume reduction; N <= 3.
double sum_power_integral_nested(std::span<const double> p, const Fn& g, double s_min = 0.0, double rel_tol = 1e-8,
                                 std::span<const double> coeff = {});

}  // namespace afd::quad
