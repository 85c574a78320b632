#pragma once

#include <span>
#include <string>
#include <vector>

namespace afd {

class Field;

/// Dimension and per-axis diffusion exponents of u_t = sum_i (u^{m_i})_{x_i x_i}.
struct ModelParams {
  int dimension = 2;
  std::vector<double> m;
  bool allow_linear = false;  // permit m_i == 1 on some (not all) axes
};

enum class Hypothesis {
  none,
  fast_diffusion,   // 0 < m_i <= 1 (strict unless allow_linear)
  mean_above_critical,  // mean exponent above 1 - 2/N
  not_all_linear,
};

const char* to_string(Hypothesis h);

struct ValidationReport {
  bool ok = false;
  Hypothesis violated = Hypothesis::none;
  std::string message;
  explicit operator bool() const { return ok; }
};

/// Checks the admissibility hypotheses; throws std::invalid_argument on
/// structural errors (N < 2, wrong length, non-positive exponent).
ValidationReport validate_params(const ModelParams& p);

double critical_exponent(int dimension);

/// Self-similar exponents. Invariants are asserted on construction, so an
/// instance is always internally consistent.
class ExponentSet {
 public:
  int dimension() const { return static_cast<int>(m_.size()); }
  std::span<const double> m() const { return m_; }
  double m(int i) const { return m_[i]; }
  double alpha() const { return alpha_; }
  std::span<const double> sigma() const { return sigma_; }
  double sigma(int i) const { return sigma_[i]; }
  /// a_i = alpha * sigma_i, the spreading rate of axis i.
  std::span<const double> a() const { return a_; }
  double a(int i) const { return a_[i]; }
  double mbar() const { return mbar_; }
  double mc() const { return mc_; }
  /// gamma_i = (1 - m_i)/2 of the stationary scaling F -> k F(k^{gamma_i} y_i).
  std::span<const double> gamma_stat() const { return gamma_stat_; }
  double beta() const { return beta_; }
  bool strictly_fast() const;

 private:
  friend ExponentSet compute_exponents(const ModelParams& p);
  ExponentSet() = default;

  std::vector<double> m_;
  double alpha_ = 0;
  std::vector<double> sigma_;
  std::vector<double> a_;
  double mbar_ = 0;
  double mc_ = 0;
  std::vector<double> gamma_stat_;
  double beta_ = 0;
};

/// Throws std::invalid_argument when validate_params fails.
ExponentSet compute_exponents(const ModelParams& p);

struct ScalingFamily {
  double c = 1;
  double alpha_c = 0;
  std::vector<double> sigma_c;
  double mass_factor_exponent = 0;  // M(T_k u) = k^{this} M(u)
};

/// Member c of the one-parameter family of scaling exponents; c = 1 is the
/// mass-preserving choice. Throws std::domain_error outside the family.
ScalingFamily scaling_family(const ExponentSet& e, double c);

/// T_k u (x) = k^alpha u(k^{a_i} x_i), resampled onto u's grid by multilinear
/// interpolation with zero extension. The result carries time t/k.
Field transform_scaling(const Field& u, double k, const ExponentSet& e);

}  // namespace afd
