#include "afd/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "afd/field.hpp"
#include "afd/quadrature.hpp"

namespace afd {

namespace {

void require_dim(const ExponentSet& e, std::size_t n, const char* what) {
  if (static_cast<int>(n) != e.dimension()) {
    throw std::invalid_argument(std::string(what) + ": expected one entry per axis");
  }
}

double sum_powers(std::span<const double> y, std::span<const double> p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::pow(std::abs(y[i]), p[i]);
  return s;
}

}  // namespace

std::string upper_window_violation(const ExponentSet& e, double delta, std::span<const double> theta) {
  require_dim(e, theta.size(), "upper barrier");
  std::ostringstream os;
  if (!(delta > 0)) return "delta must be positive";
  for (int i = 0; i < e.dimension(); ++i) {
    const double dt = delta * theta[i];
    if (theta[i] < 1.0) {
      os << "theta_" << i + 1 << " = " << theta[i] << " < 1";
      return os.str();
    }
    if (!(dt > 1.0 / e.sigma(i))) {
      os << "axis " << i + 1 << ": delta*theta = " << dt << " <= 1/sigma = " << 1.0 / e.sigma(i);
      return os.str();
    }
    if (e.m(i) < 1.0 && !(dt < 2.0 / (1.0 - e.m(i)))) {
      os << "axis " << i + 1 << ": delta*theta = " << dt << " >= 2/(1-m) = " << 2.0 / (1.0 - e.m(i));
      return os.str();
    }
  }
  return {};
}

double upper_radius(const ExponentSet& e, double delta, std::span<const double> theta) {
  require_dim(e, theta.size(), "upper barrier");
  const int n = e.dimension();
  double min_st = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) min_st = std::min(min_st, e.sigma(i) * theta[i]);
  const double denom = (delta * min_st - 1.0) * e.alpha();
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dm = delta * e.m(i);
    const double base = n * dm * (dm + 1.0) * theta[i] * theta[i] / denom;
    const double expo = 1.0 / (2.0 / theta[i] - delta * (1.0 - e.m(i)));
    r = std::max(r, std::pow(base, expo));
  }
  return r;
}

UpperBarrierSpec make_upper(const ExponentSet& e, double delta, std::vector<double> theta) {
  if (auto why = upper_window_violation(e, delta, theta); !why.empty()) {
    throw std::domain_error("upper barrier window violated: " + why);
  }
  UpperBarrierSpec s;
  s.delta = delta;
  s.r = upper_radius(e, delta, theta);
  s.theta = std::move(theta);
  s.F_star = std::pow(s.r, -delta);
  s.dilation.assign(e.dimension(), 1.0);
  return s;
}

UpperBarrierSpec scale_upper(const UpperBarrierSpec& s, const ExponentSet& e, double k) {
  if (!(k > 0)) throw std::invalid_argument("scale_upper: k must be positive");
  UpperBarrierSpec out = s;
  out.amplitude = s.amplitude * k;
  for (int i = 0; i < e.dimension(); ++i) out.dilation[i] = s.dilation[i] * std::pow(k, e.gamma_stat()[i]);
  out.F_star = out.amplitude * std::pow(out.r, -out.delta);
  return out;
}

double upper_level(const UpperBarrierSpec& s, std::span<const double> y) {
  double x = 0.0;
  for (std::size_t i = 0; i < s.theta.size(); ++i) x += std::pow(std::abs(s.dilation[i] * y[i]), s.theta[i]);
  return x;
}

UpperBarrierSpec select_upper_params(const ExponentSet& e, double slack) {
  if (!(slack > 0 && slack < 1)) throw std::invalid_argument("slack must lie in (0, 1)");
  std::vector<double> theta(e.dimension());
  for (int i = 0; i < e.dimension(); ++i) {
    const double lo = 1.0 / e.sigma(i);
    if (e.m(i) < 1.0) {
      theta[i] = std::max(1.0, (1.0 - slack) * (2.0 / (1.0 - e.m(i))) + slack * lo);
    } else {
      theta[i] = lo + 1.0;
    }
  }
  return make_upper(e, 1.0, std::move(theta));
}

double eval_upper(const UpperBarrierSpec& s, std::span<const double> y) {
  const double x = upper_level(s, y);
  if (!(x > 0)) throw std::domain_error("upper barrier is singular at the origin");
  return s.amplitude * std::pow(x, -s.delta);
}

double eval_G(const UpperBarrierSpec& s, std::span<const double> y) {
  const double x = upper_level(s, y);
  if (x <= s.r) return s.F_star;
  return std::min(s.amplitude * std::pow(x, -s.delta), s.F_star);
}

double upper_mass_outside(const UpperBarrierSpec& s) {
  double q = 0.0;
  for (double t : s.theta) q += 1.0 / t;
  if (!(s.delta > q)) throw std::domain_error("upper barrier not integrable: delta <= sum 1/theta_i");
  double jac = s.amplitude;
  for (double d : s.dilation) jac /= d;
  return jac * quad::sum_power_unit_volume(s.theta) * q * std::pow(s.r, q - s.delta) / (s.delta - q);
}

std::string lower_window_violation(const ExponentSet& e, double gamma, std::span<const double> vartheta) {
  require_dim(e, vartheta.size(), "lower barrier");
  std::ostringstream os;
  if (!(gamma > 0)) return "gamma must be positive";
  for (int i = 0; i < e.dimension(); ++i) {
    if (!(e.m(i) < 1.0)) {
      os << "axis " << i + 1 << " has m = 1; the lower barrier needs strict fast diffusion";
      return os.str();
    }
    if (!(vartheta[i] > 0 && vartheta[i] <= 1.0)) {
      os << "vartheta_" << i + 1 << " = " << vartheta[i] << " outside (0, 1]";
      return os.str();
    }
    if (!(1.0 / (gamma * vartheta[i]) < (1.0 - e.m(i)) / 2.0)) {
      os << "axis " << i + 1 << ": 1/(gamma vartheta) = " << 1.0 / (gamma * vartheta[i])
         << " >= (1-m)/2 = " << (1.0 - e.m(i)) / 2.0;
      return os.str();
    }
  }
  return {};
}

double lower_A0(const ExponentSet& e, double gamma, std::span<const double> vartheta) {
  require_dim(e, vartheta.size(), "lower barrier");
  const int n = e.dimension();
  double max_sv = 0.0;
  for (int i = 0; i < n; ++i) max_sv = std::max(max_sv, e.sigma(i) * vartheta[i]);
  const double num = e.alpha() * (gamma * max_sv - 1.0);
  double a0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double gm = gamma * e.m(i);
    const double base = num / (n * gm * (gm + 1.0) * vartheta[i] * vartheta[i]);
    const double expo = 1.0 / (gamma - gm - 2.0 / vartheta[i]);
    a0 = std::max(a0, std::pow(base, expo));
  }
  return a0;
}

LowerBarrierSpec make_lower(const ExponentSet& e, double gamma, std::vector<double> vartheta, double A) {
  if (auto why = lower_window_violation(e, gamma, vartheta); !why.empty()) {
    throw std::domain_error("lower barrier window violated: " + why);
  }
  LowerBarrierSpec s;
  s.gamma = gamma;
  s.A0 = lower_A0(e, gamma, vartheta);
  s.A = A > 0 ? A : 2.0 * s.A0;
  s.vartheta = std::move(vartheta);
  return s;
}

LowerBarrierSpec select_lower_params(const ExponentSet& e, double slack, double a_factor) {
  if (!(slack > 0)) throw std::invalid_argument("slack must be positive");
  if (!e.strictly_fast()) throw std::domain_error("lower barrier needs every m_i < 1");
  const int n = e.dimension();
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = 2.0 / (1.0 - e.m(i));
  const double dmax = *std::max_element(d.begin(), d.end());
  std::vector<double> vartheta(n);
  for (int i = 0; i < n; ++i) vartheta[i] = d[i] / dmax;
  const double gamma = (1.0 + slack) * dmax;
  const double a0 = lower_A0(e, gamma, vartheta);
  return make_lower(e, gamma, std::move(vartheta), a_factor * a0);
}

double eval_lower(const LowerBarrierSpec& s, std::span<const double> y) {
  return std::pow(s.A + sum_powers(y, s.vartheta), -s.gamma);
}

double eval_lower_spacetime(const LowerBarrierSpec& s, const ExponentSet& e, std::span<const double> x, double t) {
  if (!(t > 0)) throw std::domain_error("lower barrier evaluated at t <= 0");
  double acc = s.A;
  for (int i = 0; i < e.dimension(); ++i) {
    acc += std::pow(t, -e.alpha() * e.sigma(i) * s.vartheta[i]) * std::pow(std::abs(x[i]), s.vartheta[i]);
  }
  return std::pow(t, -e.alpha()) * std::pow(acc, -s.gamma);
}

double lower_mass(const LowerBarrierSpec& s) {
  return quad::sum_power_integral(s.vartheta, [&](double x) { return std::pow(s.A + x, -s.gamma); });
}

double Barenblatt::profile_radial(double r) const {
  if (form == BarenblattForm::squared) return std::pow(C + k * r * r, -1.0 / (1.0 - m));
  return std::pow(C + k * r, -2.0 / (1.0 - m));
}

double Barenblatt::profile(std::span<const double> y) const {
  double r2 = 0.0;
  for (int i = 0; i < dimension; ++i) r2 += y[i] * y[i];
  return profile_radial(std::sqrt(r2));
}

double Barenblatt::eval(std::span<const double> x, double t) const {
  if (!(t > 0)) throw std::domain_error("Barenblatt evaluated at t <= 0");
  const double scale = std::pow(t, -alpha / dimension);
  double r2 = 0.0;
  for (int i = 0; i < dimension; ++i) r2 += x[i] * x[i];
  return std::pow(t, -alpha) * profile_radial(std::sqrt(r2) * scale);
}

Barenblatt make_barenblatt(int dimension, double m, double C, BarenblattForm form) {
  if (dimension < 1) throw std::invalid_argument("Barenblatt: dimension must be positive");
  const double mc = 1.0 - 2.0 / dimension;
  if (!(m > mc && m < 1.0)) throw std::domain_error("Barenblatt: exponent outside (m_c, 1)");
  if (!(C > 0)) throw std::domain_error("Barenblatt: C must be positive");
  Barenblatt b;
  b.dimension = dimension;
  b.m = m;
  b.alpha = dimension / (dimension * (m - 1.0) + 2.0);
  b.k = b.alpha * (1.0 - m) / (2.0 * m * dimension);
  b.C = C;
  b.form = form;
  return b;
}

double barenblatt_mass(const Barenblatt& b) {
  return quad::radial_integral(b.dimension, [&](double r) { return b.profile_radial(r); });
}

double barenblatt_mass_to_C(int dimension, double m, double M, BarenblattForm form, double rel_tol) {
  if (!(M > 0)) throw std::domain_error("Barenblatt: mass must be positive");
  auto mass_at = [&](double C) { return barenblatt_mass(make_barenblatt(dimension, m, C, form)); };
  double lo = 1.0, hi = 1.0;
  while (mass_at(lo) < M) lo *= 0.5;
  while (mass_at(hi) > M) hi *= 2.0;
  if (lo == hi) return lo;
  while (hi - lo > rel_tol * hi) {
    const double mid = std::sqrt(lo * hi);
    if (mass_at(mid) > M) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

Profile upper_profile(const UpperBarrierSpec& s) {
  return {ProfileKind::upper, [s](std::span<const double> y) { return eval_upper(s, y); }};
}

Profile capped_profile(const UpperBarrierSpec& s) {
  return {ProfileKind::capped_upper, [s](std::span<const double> y) { return eval_G(s, y); }};
}

Profile lower_profile(const LowerBarrierSpec& s) {
  return {ProfileKind::lower, [s](std::span<const double> y) { return eval_lower(s, y); }};
}

Profile barenblatt_profile(const Barenblatt& b) {
  return {ProfileKind::barenblatt, [b](std::span<const double> y) { return b.profile(y); }};
}

Profile numeric_profile(const Field& f) {
  auto copy = std::make_shared<const Field>(f);
  return {ProfileKind::numeric, [copy](std::span<const double> y) { return copy->interpolate(y); }};
}

Residual stationary_residual(const Profile& f, const ExponentSet& e, std::span<const double> y,
                             std::span<const double> h) {
  const int n = e.dimension();
  if (static_cast<int>(y.size()) != n) throw std::invalid_argument("stationary_residual: point dimension");
  if (h.empty() || (h.size() != 1 && static_cast<int>(h.size()) != n)) {
    throw std::invalid_argument("stationary_residual: step count");
  }
  std::vector<double> p(y.begin(), y.end());
  const double f0 = f.eval(p);
  Residual res;
  for (int i = 0; i < n; ++i) {
    const double hi = h.size() == 1 ? h[0] : h[i];
    p[i] = y[i] + hi;
    const double fp = f.eval(p);
    p[i] = y[i] - hi;
    const double fm = f.eval(p);
    p[i] = y[i];
    const double mi = e.m(i);
    const double diff = ((std::pow(fp, mi) + std::pow(fm, mi)) - 2.0 * std::pow(f0, mi)) / (hi * hi);
    const double c = e.alpha() * e.sigma(i);
    const double transport = c * ((y[i] + hi) * fp - (y[i] - hi) * fm) / (2.0 * hi);
    res.value += diff + transport;
    res.scale = std::max({res.scale, std::abs(diff), c * std::abs(f0), c * std::abs(y[i] * (fp - fm) / (2.0 * hi))});
  }
  return res;
}

}  // namespace afd
