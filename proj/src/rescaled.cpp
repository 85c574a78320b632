#include "afd/rescaled.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "afd/simd.hpp"

namespace afd {

double RescaledState::physical_time() const { return std::exp(tau()) - t0; }

namespace {

std::vector<double> axis_factors(const ExponentSet& e, double s, double sign) {
  std::vector<double> f(e.dimension());
  for (int i = 0; i < e.dimension(); ++i) f[i] = std::pow(s, sign * e.a(i));
  return f;
}

}  // namespace

RescaledState to_selfsimilar(const Field& u, double t0, const ExponentSet& e) {
  const double s = u.time() + t0;
  if (!(s > 0)) throw std::domain_error("to_selfsimilar: t + t0 must be positive");
  if (u.grid().dimension() != e.dimension()) throw std::invalid_argument("to_selfsimilar: dimension mismatch");
  const Grid yg = u.grid().stretched(axis_factors(e, s, -1.0));
  const double amp = std::pow(s, e.alpha());
  std::vector<double> vals(u.values().begin(), u.values().end());
  for (double& v : vals) v *= amp;
  return {Field(yg, std::move(vals), std::log(s)), t0};
}

Field from_selfsimilar(const RescaledState& st, const ExponentSet& e) {
  const double s = std::exp(st.tau());
  const Grid xg = st.v.grid().stretched(axis_factors(e, s, 1.0));
  const double amp = std::pow(s, -e.alpha());
  std::vector<double> vals(st.v.values().begin(), st.v.values().end());
  for (double& v : vals) v *= amp;
  return Field(xg, std::move(vals), s - st.t0);
}

Field to_selfsimilar_on(const Field& u, double t0, const ExponentSet& e, const Grid& y_grid) {
  RescaledState s = to_selfsimilar(u, t0, e);
  Field out = s.v.resampled(y_grid);
  out.set_time(s.tau());
  return out;
}

Solver rescaled_solver(const RescaledState& s, const SolverConfig& cfg, const ExponentSet& e) {
  std::vector<double> drift(e.dimension());
  for (int i = 0; i < e.dimension(); ++i) drift[i] = e.a(i);
  return Solver(s.v, cfg, std::vector<double>(e.m().begin(), e.m().end()), std::move(drift));
}

RescaledState rescaled_step(const RescaledState& s, const SolverConfig& cfg, const ExponentSet& e) {
  SolverConfig c = cfg;
  c.track_energy = false;
  Solver solver = rescaled_solver(s, c, e);
  solver.step(c.dt_policy == DtPolicy::fixed ? c.dt_fixed : solver.stable_dt());
  return {solver.state(), s.t0};
}

ProfileEstimate relax_to_profile(const RescaledState& s0, const SolverConfig& cfg, const ExponentSet& e,
                                 const RelaxOptions& opt) {
  SolverConfig c = cfg;
  c.track_energy = false;
  c.record_every = 0;
  Solver solver = rescaled_solver(s0, c, e);
  const simd::Kernels& K = simd::active();
  const double vol = s0.v.grid().cell_volume();

  ProfileEstimate est;
  std::vector<double> prev(solver.state().values().begin(), solver.state().values().end());
  double prev_mass = K.sum(prev.data(), prev.size()) * vol;
  const double tau_end = s0.tau() + opt.tau_max;
  while (solver.time() < tau_end - 1e-12) {
    const double target = std::min(solver.time() + opt.check_every, tau_end);
    const double tau_before = solver.time();
    solver.advance_to(target);
    const auto& v = solver.state().values();
    const double mass = K.sum(v.data(), v.size()) * vol;
    const double dtau = solver.time() - tau_before;
    est.residual_l1 = K.sum_abs_diff(v.data(), prev.data(), v.size()) * vol / dtau;
    est.mass_loss_rate = (prev_mass - mass) / dtau;
    std::copy(v.begin(), v.end(), prev.begin());
    prev_mass = mass;
    if (est.residual_l1 < opt.tol_rel * mass) {
      est.converged = true;
      break;
    }
  }
  est.F_num = solver.state();
  est.mass = est.F_num.mass();
  est.tau = solver.time();
  est.steps = solver.steps();
  for (int i = 0; i < e.dimension(); ++i) {
    try {
      est.tail_slopes.push_back(tail_exponent_fit(est.F_num, i, opt.window_lo(i), opt.window_hi(i)));
    } catch (const std::exception&) {
      est.tail_slopes.push_back(TailFit{});
    }
  }
  return est;
}

TailFit tail_exponent_fit(const Field& f, int axis, double lo_frac, double hi_frac) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dimension()) throw std::invalid_argument("tail_exponent_fit: axis out of range");
  if (!(lo_frac > 0 && hi_frac > lo_frac && hi_frac <= 1.0)) throw std::invalid_argument("tail_exponent_fit: bad window");
  std::array<std::size_t, Grid::kMaxDim> idx{};
  for (int i = 0; i < g.dimension(); ++i) {
    if (g.points(i) % 2 == 0) throw std::invalid_argument("tail_exponent_fit: needs a node on every axis (odd counts)");
    idx[i] = g.center_index(i);
  }
  const double L = g.half_width(axis);
  std::vector<double> lx, ly;
  for (std::size_t k = g.center_index(axis) + 1; k < g.points(axis); ++k) {
    const double y = g.coord(axis, k);
    if (y < lo_frac * L) continue;
    if (y > hi_frac * L * (1.0 + 1e-12)) break;
    idx[axis] = k;
    const double v = f[g.flatten(std::span<const std::size_t>(idx.data(), g.dimension()))];
    if (!(v > 0.0)) break;
    lx.push_back(std::log(y));
    ly.push_back(std::log(v));
  }
  const std::size_t n = lx.size();
  if (n < 3) throw std::domain_error("tail_exponent_fit: fewer than 3 positive samples in the window");
  double mx = 0, my = 0;
  for (std::size_t j = 0; j < n; ++j) {
    mx += lx[j];
    my += ly[j];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < n; ++j) {
    sxx += (lx[j] - mx) * (lx[j] - mx);
    sxy += (lx[j] - mx) * (ly[j] - my);
  }
  TailFit fit;
  fit.slope = sxy / sxx;
  fit.points = n;
  double ss = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = ly[j] - my - fit.slope * (lx[j] - mx);
    ss += r * r;
  }
  fit.stderr_slope = n > 2 ? std::sqrt(ss / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

TimeShiftReport time_shift_check(const std::vector<Field>& u1, const std::vector<Field>& uk, double k,
                                 const ExponentSet& e) {
  if (u1.size() != uk.size() || u1.empty()) throw std::invalid_argument("time_shift_check: insufficient overlap");
  if (!(k > 0)) throw std::invalid_argument("time_shift_check: k must be positive");
  TimeShiftReport rep;
  for (std::size_t j = 0; j < u1.size(); ++j) {
    const double t = uk[j].time();
    if (!(t > 0) || std::abs(u1[j].time() - k * t) > 1e-9 * k * t) {
      throw std::invalid_argument("time_shift_check: snapshot times are not related by the factor k");
    }
    const RescaledState a = to_selfsimilar(u1[j], 0.0, e);
    const Field b = to_selfsimilar_on(uk[j], 0.0, e, a.v.grid());
    rep.taus.push_back(std::log(t));
    const double d = l1_distance(a.v, b);
    rep.discrepancies.push_back(d);
    rep.max_discrepancy = std::max(rep.max_discrepancy, d);
  }
  return rep;
}

AttractionReport attraction_check(const std::vector<Field>& v_snapshots, double t0, const Profile& F, double M,
                                  const ExponentSet& e) {
  AttractionReport rep;
  if (v_snapshots.empty()) return rep;
  rep.mass_mismatch = std::abs(v_snapshots.front().mass() - M) / M;
  if (rep.mass_mismatch > 0.01) {
    rep.mass_ok = false;
    return rep;
  }
  const int d = e.dimension();
  std::vector<double> z(d);
  double prev_l1 = -1.0;
  for (const Field& v : v_snapshots) {
    const double s = std::exp(v.time());
    const double t = s - t0;
    if (!(t > 0)) continue;
    const double ratio = s / t;
    const double amp = std::pow(ratio, e.alpha());
    const double back = std::pow(t / s, e.alpha());
    std::vector<double> stretch(d);
    for (int i = 0; i < d; ++i) stretch[i] = std::pow(ratio, e.a(i));
    const Grid& g = v.grid();
    double sup = 0.0, l1 = 0.0;
    g.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) {
      for (int i = 0; i < d; ++i) z[i] = g.coord(i, idx[i]) * stretch[i];
      const double fz = F.eval(z);
      sup = std::max(sup, std::abs(back * v[flat] - fz));
      l1 += std::abs(v[flat] - amp * fz);
    });
    AttractionSample smp{t, sup, l1 * g.cell_volume()};
    if (prev_l1 >= 0.0) rep.max_l1_increase = std::max(rep.max_l1_increase, smp.l1 - prev_l1);
    prev_l1 = smp.l1;
    rep.samples.push_back(smp);
  }
  return rep;
}

}  // namespace afd
