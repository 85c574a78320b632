#include "afd/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "afd/field.hpp"

namespace afd {

namespace {

constexpr double kIdentityTol = 1e-12;

// Both the mass-preserving set (c = 1) and the scaling family go through these
// two helpers so that c = 1 reproduces ExponentSet bit for bit.
double family_alpha(double mbar, int n, double c) { return 1.0 / (mbar - 1.0 + 2.0 * c / n); }

double family_sigma(double mbar, double mi, int n, double c) { return c / n + (mbar - mi) / 2.0; }

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require(bool cond, const char* what) {
  if (!cond) throw std::logic_error(std::string("exponent invariant violated: ") + what);
}

}  // namespace

const char* to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::none: return "none";
    case Hypothesis::fast_diffusion: return "H1 (0 < m_i <= 1)";
    case Hypothesis::mean_above_critical: return "H2 (mean exponent > 1 - 2/N)";
    case Hypothesis::not_all_linear: return "not all m_i equal to 1";
  }
  return "?";
}

double critical_exponent(int dimension) { return 1.0 - 2.0 / dimension; }

ValidationReport validate_params(const ModelParams& p) {
  if (p.dimension < 2) throw std::invalid_argument("dimension must be at least 2");
  if (static_cast<int>(p.m.size()) != p.dimension) {
    std::ostringstream os;
    os << "dimension mismatch: N = " << p.dimension << " but " << p.m.size() << " exponents given";
    throw std::invalid_argument(os.str());
  }
  for (double mi : p.m) {
    if (!(mi > 0.0) || !std::isfinite(mi)) throw std::invalid_argument("exponents must be positive and finite");
  }

  ValidationReport rep;
  for (int i = 0; i < p.dimension; ++i) {
    const double mi = p.m[i];
    const bool bad = p.allow_linear ? (mi > 1.0) : (mi >= 1.0);
    if (bad) {
      rep.violated = Hypothesis::fast_diffusion;
      std::ostringstream os;
      os << "m_" << i + 1 << " = " << mi << (p.allow_linear ? " exceeds 1" : " is not below 1 (allow_linear is off)");
      rep.message = os.str();
      return rep;
    }
  }
  const double mbar = mean(p.m);
  const double mc = critical_exponent(p.dimension);
  if (!(mbar > mc)) {
    rep.violated = Hypothesis::mean_above_critical;
    std::ostringstream os;
    os << "mean exponent " << mbar << " <= critical exponent " << mc;
    rep.message = os.str();
    return rep;
  }
  if (std::all_of(p.m.begin(), p.m.end(), [](double mi) { return mi == 1.0; })) {
    rep.violated = Hypothesis::not_all_linear;
    rep.message = "all exponents equal 1 (linear heat equation)";
    return rep;
  }
  rep.ok = true;
  return rep;
}

bool ExponentSet::strictly_fast() const {
  return std::all_of(m_.begin(), m_.end(), [](double mi) { return mi < 1.0; });
}

ExponentSet compute_exponents(const ModelParams& p) {
  const auto rep = validate_params(p);
  if (!rep) throw std::invalid_argument("inadmissible parameters: " + rep.message);

  const int n = p.dimension;
  ExponentSet e;
  e.m_ = p.m;
  e.mbar_ = mean(p.m);
  e.mc_ = critical_exponent(n);
  e.alpha_ = family_alpha(e.mbar_, n, 1.0);
  e.sigma_.resize(n);
  e.a_.resize(n);
  e.gamma_stat_.resize(n);
  double gsum = 0;
  for (int i = 0; i < n; ++i) {
    e.sigma_[i] = family_sigma(e.mbar_, p.m[i], n, 1.0);
    e.a_[i] = e.alpha_ * e.sigma_[i];
    e.gamma_stat_[i] = (1.0 - p.m[i]) / 2.0;
    gsum += e.gamma_stat_[i];
  }
  e.beta_ = 1.0 - gsum;

  const double ssum = std::accumulate(e.sigma_.begin(), e.sigma_.end(), 0.0);
  require(std::abs(ssum - 1.0) <= kIdentityTol, "sum of sigma_i equals 1");
  require(e.alpha_ > 0, "alpha > 0");
  for (int i = 0; i < n; ++i) {
    require(e.sigma_[i] > 0, "sigma_i > 0");
    require(std::abs(e.alpha_ * (p.m[i] - 1.0) + 2.0 * e.a_[i] - 1.0) <= kIdentityTol,
            "alpha (m_i - 1) + 2 a_i = 1");
  }
  require(e.beta_ > 0 && e.beta_ < 1, "0 < beta < 1");
  return e;
}

ScalingFamily scaling_family(const ExponentSet& e, double c) {
  const int n = e.dimension();
  if (!(c > 0)) throw std::domain_error("scaling parameter c must be positive");
  const double denom = e.mbar() - 1.0 + 2.0 * c / n;
  if (!(denom > 0)) throw std::domain_error("scaling parameter outside the family: mbar - 1 + 2c/N <= 0");

  ScalingFamily f;
  f.c = c;
  f.alpha_c = family_alpha(e.mbar(), n, c);
  f.sigma_c.resize(n);
  for (int i = 0; i < n; ++i) f.sigma_c[i] = family_sigma(e.mbar(), e.m(i), n, c);
  f.mass_factor_exponent = f.alpha_c * (1.0 - c);
  return f;
}

Field transform_scaling(const Field& u, double k, const ExponentSet& e) {
  if (!(k > 0)) throw std::invalid_argument("transform_scaling: k must be positive");
  const Grid& g = u.grid();
  if (g.dimension() != e.dimension()) throw std::invalid_argument("transform_scaling: grid/exponent dimension mismatch");
  if (k == 1.0) return u;

  std::vector<double> stretch(g.dimension());
  for (int i = 0; i < g.dimension(); ++i) stretch[i] = std::pow(k, e.a(i));
  const double amp = std::pow(k, e.alpha());

  Field out(g, u.time() / k);
  std::vector<double> x(g.dimension());
  g.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) {
    for (int i = 0; i < g.dimension(); ++i) x[i] = g.coord(i, idx[i]) * stretch[i];
    out[flat] = amp * u.interpolate(x);
  });
  return out;
}

}  // namespace afd
