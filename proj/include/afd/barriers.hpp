#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "afd/exponents.hpp"

namespace afd {

class Field;

/// Upper barrier Fbar(y) = (sum_i |y_i|^{theta_i})^{-delta}, a super-solution of
/// the stationary equation on Omega = {sum_i |y_i|^{theta_i} >= r}.
/// After the stationary scaling T_k F(y) = k F(k^{gamma_i} y_i) the barrier
/// reads k (sum_i |k^{gamma_i} y_i|^{theta_i})^{-delta}; amplitude = k and
/// dilation_i = k^{gamma_i} (both 1 when unscaled).
struct UpperBarrierSpec {
  double delta = 1.0;
  std::vector<double> theta;
  double r = 0.0;
  double F_star = 0.0;  // amplitude * r^{-delta}
  double amplitude = 1.0;
  std::vector<double> dilation;
};

/// Lower barrier F(y) = (A + sum_i |y_i|^{vartheta_i})^{-gamma}, a sub-solution
/// off the coordinate hyperplanes when A >= A0.
struct LowerBarrierSpec {
  double gamma = 0.0;
  std::vector<double> vartheta;
  double A = 0.0;
  double A0 = 0.0;
};

/// Empty string when 1/sigma_i < delta theta_i < 2/(1 - m_i) holds on every axis
/// (only the lower bound when m_i = 1), otherwise a description of the failure.
std::string upper_window_violation(const ExponentSet& e, double delta, std::span<const double> theta);

/// r = max_i ( N delta m_i (delta m_i + 1) theta_i^2 / ((delta min_j sigma_j theta_j - 1) alpha) )^{1/(2/theta_i - delta(1-m_i))}
double upper_radius(const ExponentSet& e, double delta, std::span<const double> theta);

/// Validates the window and fills r and F_star.
UpperBarrierSpec make_upper(const ExponentSet& e, double delta, std::vector<double> theta);

/// delta = 1 and theta_i = (1-slack) 2/(1-m_i) + slack/sigma_i (1/sigma_i + 1 when m_i = 1).
UpperBarrierSpec select_upper_params(const ExponentSet& e, double slack = 0.1);

/// T_k applied to the barrier; gamma_i = (1 - m_i)/2 keeps it a super-solution.
UpperBarrierSpec scale_upper(const UpperBarrierSpec& s, const ExponentSet& e, double k);

/// Sum_i |dilation_i y_i|^{theta_i}; Omega is where this is >= r.
double upper_level(const UpperBarrierSpec& s, std::span<const double> y);
double eval_upper(const UpperBarrierSpec& s, std::span<const double> y);
/// min(Fbar(y), F_star); equals F_star at y = 0.
double eval_G(const UpperBarrierSpec& s, std::span<const double> y);

/// Integral of Fbar over Omega: V1 q r^{q - delta} / (delta - q), q = sum 1/theta_i
/// (times amplitude / prod dilation_i for a scaled barrier).
double upper_mass_outside(const UpperBarrierSpec& s);

std::string lower_window_violation(const ExponentSet& e, double gamma, std::span<const double> vartheta);

/// A0 = max_i [ alpha (gamma max_j sigma_j vartheta_j - 1) / (N gamma m_i (gamma m_i + 1) vartheta_i^2) ]^{1/(gamma(1-m_i) - 2/vartheta_i)}
double lower_A0(const ExponentSet& e, double gamma, std::span<const double> vartheta);

/// A <= 0 selects A = 2 A0.
LowerBarrierSpec make_lower(const ExponentSet& e, double gamma, std::vector<double> vartheta, double A = 0.0);

/// vartheta_i = d_i / max_j d_j and gamma = (1+slack) max_j d_j with d_i = 2/(1-m_i),
/// so gamma vartheta_i = (1+slack) d_i; A = a_factor A0.
LowerBarrierSpec select_lower_params(const ExponentSet& e, double slack = 0.1, double a_factor = 2.0);

double eval_lower(const LowerBarrierSpec& s, std::span<const double> y);
/// t^{-alpha} (A + sum_i t^{-alpha sigma_i vartheta_i} |x_i|^{vartheta_i})^{-gamma}
double eval_lower_spacetime(const LowerBarrierSpec& s, const ExponentSet& e, std::span<const double> x, double t);
/// Integral of the lower barrier over R^N (layer-volume quadrature).
double lower_mass(const LowerBarrierSpec& s);

/// Closed form of the isotropic self-similar profile.
///   squared: (C + k |y|^2)^{-1/(1-m)}    (classical)
///   printed_linear: (C + k |y|)^{-2/(1-m)}
/// with k = alpha (1-m) / (2 m N).
enum class BarenblattForm { squared, printed_linear };

struct Barenblatt {
  int dimension = 2;
  double m = 0.5;
  double alpha = 0.0;
  double k = 0.0;
  double C = 1.0;
  BarenblattForm form = BarenblattForm::squared;

  double profile_radial(double r) const;
  double profile(std::span<const double> y) const;
  /// t^{-alpha} F(x t^{-alpha/N}).
  double eval(std::span<const double> x, double t) const;
  double peak() const { return profile_radial(0.0); }
};

Barenblatt make_barenblatt(int dimension, double m, double C, BarenblattForm form = BarenblattForm::squared);
/// Mass of the profile by radial quadrature.
double barenblatt_mass(const Barenblatt& b);
/// C such that the profile has mass M (bisection on the quadrature mass).
double barenblatt_mass_to_C(int dimension, double m, double M, BarenblattForm form = BarenblattForm::squared,
                            double rel_tol = 1e-10);

enum class ProfileKind { upper, capped_upper, lower, barenblatt, numeric };

struct Profile {
  ProfileKind kind = ProfileKind::numeric;
  std::function<double(std::span<const double>)> eval;
};

Profile upper_profile(const UpperBarrierSpec& s);
Profile capped_profile(const UpperBarrierSpec& s);
Profile lower_profile(const LowerBarrierSpec& s);
Profile barenblatt_profile(const Barenblatt& b);
/// Multilinear interpolation of a grid profile (copied).
Profile numeric_profile(const Field& f);

struct Residual {
  double value = 0.0;
  /// Largest magnitude among the individual difference terms; a scale for tolerances.
  double scale = 0.0;
};

/// Central-difference approximation of
///   sum_i [ (f^{m_i})_{y_i y_i} + alpha sigma_i (y_i f)_{y_i} ]
/// at y with per-axis steps h (a single entry applies to every axis).
Residual stationary_residual(const Profile& f, const ExponentSet& e, std::span<const double> y,
                             std::span<const double> h);

}  // namespace afd
