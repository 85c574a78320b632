#include "afd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "afd/engine.hpp"
#include "afd/simd.hpp"

namespace afd {

ContractionReport l1_contraction_check(const std::vector<Field>& u1, const std::vector<Field>& u2, double rel_tol) {
  if (u1.size() != u2.size() || u1.empty()) throw std::invalid_argument("contraction: trajectories differ in length");
  const simd::Kernels& K = simd::active();
  ContractionReport rep;
  const Field& a0 = u1.front();
  const Field& b0 = u2.front();
  if (!a0.grid().same_shape(b0.grid())) throw std::invalid_argument("contraction: grid mismatch");
  bool le = true, ge = true;
  for (std::size_t k = 0; k < a0.size(); ++k) {
    le = le && a0[k] <= b0[k];
    ge = ge && a0[k] >= b0[k];
  }
  rep.initially_ordered = le || ge;

  for (std::size_t j = 0; j < u1.size(); ++j) {
    const Field& a = u1[j];
    const Field& b = u2[j];
    if (!a.grid().same_shape(b.grid())) throw std::invalid_argument("contraction: grid mismatch");
    if (a.time() != b.time()) throw std::invalid_argument("contraction: time stamps differ");
    rep.times.push_back(a.time());
    rep.positive_part.push_back(K.sum_pos_diff(a.values().data(), b.values().data(), a.size()) * a.grid().cell_volume());
    if (rep.initially_ordered) {
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double v = le ? a[k] - b[k] : b[k] - a[k];
        rep.max_order_violation = std::max(rep.max_order_violation, v);
      }
    }
  }
  const double p0 = rep.positive_part.front();
  for (std::size_t j = 1; j < rep.positive_part.size(); ++j) {
    rep.max_increase = std::max(rep.max_increase, rep.positive_part[j] - rep.positive_part[j - 1]);
  }
  rep.nonincreasing = rep.max_increase <= rel_tol * p0;
  rep.relative_decrease = p0 > 0.0 ? 1.0 - rep.positive_part.back() / p0 : 0.0;
  return rep;
}

SmoothingFit smoothing_fit(const std::vector<double>& t, const std::vector<double>& linf, double mass,
                           const ExponentSet& e) {
  if (t.size() != linf.size() || t.size() < 3) throw std::invalid_argument("smoothing_fit: need at least 3 samples");
  const auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
  if (!(*tmin > 0) || std::log10(*tmax / *tmin) < 1.5) throw std::domain_error("smoothing_fit: time span shorter than 1.5 decades");
  const std::size_t n = t.size();
  double mx = 0, my = 0;
  for (std::size_t j = 0; j < n; ++j) {
    mx += std::log(t[j]);
    my += std::log(linf[j]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = std::log(t[j]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(linf[j]) - my);
  }
  SmoothingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.samples = n;
  const double mfac = std::pow(mass, -2.0 * e.alpha() / e.dimension());
  for (std::size_t j = 0; j < n; ++j) {
    fit.C1 = std::max(fit.C1, linf[j] * std::pow(t[j], e.alpha()) * mfac);
  }
  return fit;
}

SSNIReport ssni_check(const Field& f, double threshold) {
  const Grid& g = f.grid();
  const int d = g.dimension();
  SSNIReport rep;
  g.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) {
    for (int i = 0; i < d; ++i) {
      const std::size_t k = idx[i];
      const std::size_t mirror = g.points(i) - 1 - k;
      const std::size_t other = flat - k * g.stride(i) + mirror * g.stride(i);
      rep.symmetry_error = std::max(rep.symmetry_error, std::abs(f[flat] - f[other]));
      // outward neighbour on the same side of the centre
      const double c = 0.5 * static_cast<double>(g.points(i) - 1);
      const double kk = static_cast<double>(k);
      if (kk >= c && k + 1 < g.points(i)) {
        if (f[flat + g.stride(i)] - f[flat] > threshold) ++rep.monotonicity_violations;
      } else if (kk <= c && k > 0) {
        if (f[flat - g.stride(i)] - f[flat] > threshold) ++rep.monotonicity_violations;
      }
    }
  });
  return rep;
}

PositivityCertificate make_positivity_certificate(double M, int dimension, double r0, double R_eps, double eps_mass,
                                                  double sup_bound) {
  if (!(M > 0) || !(r0 > 0) || !(R_eps > r0)) throw std::invalid_argument("positivity certificate: need M > 0 and 0 < r0 < R_eps");
  PositivityCertificate c;
  c.r0 = r0;
  c.R_eps = R_eps;
  c.eps_mass = eps_mass;
  c.sup_bound = sup_bound;
  c.c1 = M * std::pow(2.0, -(dimension + 1)) * std::pow(R_eps - r0, -dimension);
  c.outer_mass_ok = eps_mass < M / 4.0;
  c.slab_ok = sup_bound * std::pow(R_eps, dimension - 1) * r0 < M / (4.0 * dimension);
  return c;
}

PositivityReport positivity_check(const std::vector<Field>& v_snapshots, const PositivityCertificate& cert,
                                  double slack) {
  PositivityReport rep;
  if (!cert.valid()) {
    rep.reason = !cert.outer_mass_ok ? "outer mass bound eps_mass >= M/4" : "slab mass bound fails";
    return rep;
  }
  if (v_snapshots.empty()) {
    rep.reason = "no snapshots";
    return rep;
  }
  rep.applicable = true;
  rep.worst_ratio = std::numeric_limits<double>::infinity();
  for (const Field& v : v_snapshots) {
    const Grid& g = v.grid();
    for (int i = 0; i < g.dimension(); ++i) {
      if (cert.R_eps > g.half_width(i)) {
        rep.applicable = false;
        rep.reason = "R_eps exceeds the computational box";
        return rep;
      }
    }
    double mn = std::numeric_limits<double>::infinity();
    g.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) {
      for (int i = 0; i < g.dimension(); ++i) {
        if (std::abs(g.coord(i, idx[i])) > cert.r0) return;
      }
      mn = std::min(mn, v[flat]);
    });
    rep.taus.push_back(v.time());
    rep.minima.push_back(mn);
    rep.worst_ratio = std::min(rep.worst_ratio, mn / cert.c1);
  }
  rep.ok = rep.worst_ratio >= 1.0 - slack;
  return rep;
}

bool AdmissibilityConditions::cond1() const {
  return C1 * std::pow(M, 2.0 * alpha / dimension) <= F_star * std::pow(1.0 - std::exp(-tau0), alpha);
}

bool AdmissibilityConditions::cond2() const {
  return C1 * std::pow(M, 2.0 * alpha / dimension) <= L1 * std::pow(1.0 - std::exp(-tau0), alpha);
}

bool AdmissibilityConditions::cond3() const { return L1 * std::exp(alpha * tau0) <= F_star; }

DominationReport barrier_domination_check(const std::vector<Field>& v_snapshots, const UpperBarrierSpec& s,
                                          const AdmissibilityConditions& conds, double slack) {
  DominationReport rep;
  if (v_snapshots.empty()) {
    rep.reason = "no snapshots";
    return rep;
  }
  if (!(conds.C1 > 0)) {
    rep.reason = "C1 estimate missing";
    return rep;
  }
  const Field& v0 = v_snapshots.front();
  const Grid& g0 = v0.grid();
  std::vector<double> y(g0.dimension());
  bool dominated = true;
  g0.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) {
    for (int i = 0; i < g0.dimension(); ++i) y[i] = g0.coord(i, idx[i]);
    if (upper_level(s, y) >= s.r && v0[flat] > eval_upper(s, y)) dominated = false;
  });
  if (!dominated) {
    rep.reason = "initial data exceed the barrier inside Omega";
    return rep;
  }
  rep.applicable = true;
  rep.conditions_hold = conds.cond1() && conds.cond3();
  for (const Field& v : v_snapshots) {
    const Grid& g = v.grid();
    g.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) {
      for (int i = 0; i < g.dimension(); ++i) y[i] = g.coord(i, idx[i]);
      rep.max_ratio = std::max(rep.max_ratio, v[flat] / eval_G(s, y));
    });
  }
  rep.ok = rep.max_ratio <= 1.0 + slack;
  return rep;
}

MarginalReport marginal(const Field& f, const ExponentSet& e) {
  MarginalReport rep;
  for (int i = 0; i < e.dimension(); ++i) {
    if (e.m(i) == 1.0) {
      rep.axis = i;
      break;
    }
  }
  if (rep.axis < 0) return rep;
  rep.applicable = true;
  const Grid& g = f.grid();
  const int ax = rep.axis;
  const double other_vol = g.cell_volume() / g.spacing(ax);
  rep.w.assign(g.points(ax), 0.0);
  rep.y.resize(g.points(ax));
  for (std::size_t k = 0; k < g.points(ax); ++k) rep.y[k] = g.coord(ax, k);
  g.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) { rep.w[idx[ax]] += f[flat]; });
  for (double& w : rep.w) w *= other_vol;
  for (double w : rep.w) rep.mass += w;
  rep.mass *= g.spacing(ax);
  return rep;
}

MarginalReport marginal_heat_check(const Field& profile, const ExponentSet& e) {
  MarginalReport rep = marginal(profile, e);
  if (!rep.applicable) return rep;
  const double h = profile.grid().spacing(rep.axis);
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  double err = 0.0;
  for (std::size_t k = 0; k < rep.w.size(); ++k) {
    err += std::abs(rep.w[k] / rep.mass - norm * std::exp(-rep.y[k] * rep.y[k] / 4.0));
  }
  rep.l1_error = err * h;
  return rep;
}

MarginalReport marginal_heat_evolution_check(const std::vector<Field>& traj, const ExponentSet& e) {
  if (traj.empty()) return {};
  MarginalReport first = marginal(traj.front(), e);
  if (!first.applicable) return first;
  const Grid& g = traj.front().grid();
  const int ax = first.axis;
  Grid line({g.half_width(ax)}, {g.points(ax)});
  Engine heat(line, {1.0}, 0.0);
  std::vector<double> w = first.w, scratch(w.size());
  const double h = g.spacing(ax);
  const double dt_max = 0.45 * h * h;
  double t = traj.front().time();
  MarginalReport rep = first;
  rep.l1_error = 0.0;
  for (std::size_t j = 1; j < traj.size(); ++j) {
    const double target = traj[j].time();
    while (t < target) {
      const double dt = std::min(dt_max, target - t);
      heat.step(w, scratch, dt, false);
      std::swap(w, scratch);
      t += dt;
    }
    const MarginalReport cur = marginal(traj[j], e);
    double err = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) err += std::abs(cur.w[k] - w[k]);
    rep.l1_error = std::max(rep.l1_error, err * h / first.mass);
    rep.w = cur.w;
  }
  return rep;
}

NormMonotonicity lp_monotonicity(const RunDiagnostics& d, double rel_tol) {
  NormMonotonicity rep;
  for (std::size_t j = 1; j < d.records.size(); ++j) {
    const auto& a = d.records[j - 1];
    const auto& b = d.records[j];
    auto check = [&](double prev, double cur) {
      if (prev > 0.0) rep.worst_relative_increase = std::max(rep.worst_relative_increase, (cur - prev) / prev);
    };
    check(a.mass, b.mass);
    check(a.linf, b.linf);
    for (std::size_t p = 0; p < a.lp.size(); ++p) check(a.lp[p], b.lp[p]);
  }
  rep.ok = rep.worst_relative_increase <= rel_tol;
  return rep;
}

}  // namespace afd
