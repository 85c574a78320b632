// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "afd/analysis.hpp"
#include "afd/barriers.hpp"
#include "afd/contour.hpp"
#include "afd/exponents.hpp"
#include "afd/field.hpp"
#include "afd/io.hpp"
#include "afd/rescaled.hpp"
#include "afd/solver.hpp"
#include "../support/oracles.hpp"

using namespace afd;

namespace {

// Pinned tolerances.
constexpr double kIdentityTol = 1e-12;
constexpr double kIdentityRuntime = 1.0;
constexpr double kOracleL1 = 0.01;
constexpr double kOracleLinf = 0.02;
constexpr double kResidualShrink = 3.0;
constexpr double kSlopeRel = 0.05;
constexpr double kTailBelow = 0.3;
constexpr double kTailAbove = 1.0;
constexpr double kUniquenessL1 = 0.02;
constexpr double kContractionTol = 1e-3;
constexpr double kCrossingDecrease = 0.01;
constexpr double kSymmetryTol = 1e-10;
constexpr double kMonotoneThreshold = 1e-12;
constexpr double kPositivitySlack = 0.2;
constexpr double kShiftFactor = 2.0;
constexpr double kShiftRefine = 1.5;
constexpr double kAttractionDrop = 0.5;
constexpr double kMarginalL1 = 0.03;
constexpr double kEnergyTol = 1e-3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExponentSet exps(std::vector<double> m, bool allow_linear = false) {
  return compute_exponents(ModelParams{static_cast<int>(m.size()), std::move(m), allow_linear});
}

// Physical runs whose diagnostics feed the energy criterion.
std::vector<std::pair<std::string, RunDiagnostics>> g_physical_runs;

// ---------------------------------------------------------------------------
// Shared anisotropic relaxation, m = (0.6, 0.8).

const ExponentSet& aniso() {
  static const ExponentSet e = exps({0.6, 0.8});
  return e;
}

Grid aniso_grid() { return Grid({128.0, 64.0}, {257, 257}); }

SolverConfig rescaled_cfg() {
  SolverConfig c;
  c.eps_rel = 1e-8;
  c.track_energy = false;
  c.record_every = 0;
  return c;
}

RelaxOptions relax_opts() {
  RelaxOptions o;
  o.tau_max = 25.0;
  o.tol_rel = 1e-5;
  return o;
}

const ProfileEstimate& aniso_profile() {
  static const ProfileEstimate est = [] {
    DataParams dp;
    dp.mass = 1.0;
    dp.radius = 1.0;
    Field v0 = init_data(DataKind::bump, dp, aniso_grid());
    return relax_to_profile(RescaledState{v0, 1.0}, rescaled_cfg(), aniso(), relax_opts());
  }();
  return est;
}

// ---------------------------------------------------------------------------

Outcome c01_exponent_identities() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_sigma = 0.0, worst_axis = 0.0;
  int accepted = 0;
  while (accepted < 50) {
    const int N = unit(rng) < 0.5 ? 2 : 3;
    std::vector<double> m(N);
    for (double& mi : m) mi = 0.05 + 0.94 * unit(rng);
    ModelParams p{N, m, false};
    if (!validate_params(p)) continue;
    const ExponentSet e = compute_exponents(p);
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
      s += e.sigma(i);
      worst_axis = std::max(worst_axis, std::abs(e.alpha() * (e.m(i) - 1.0) + 2.0 * e.a(i) - 1.0));
    }
    worst_sigma = std::max(worst_sigma, std::abs(s - 1.0));
    ++accepted;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst_sigma <= kIdentityTol && worst_axis <= kIdentityTol && secs < kIdentityRuntime,
          fmt("50 sets: max|sum sigma - 1| = %.2e, max|alpha(m-1)+2a-1| = %.2e, %.3f s", worst_sigma, worst_axis, secs)};
}

Outcome c02_isotropic_oracle() {
  const ExponentSet e = exps({0.75, 0.75});
  const Grid g = Grid::cube(2, 20.0, 256);
  DataParams dp;
  dp.mass = 1.0;
  dp.barenblatt_time = 1.0;
  dp.barenblatt_m = 0.75;
  const Field u0 = init_data(DataKind::barenblatt, dp, g);
  SolverConfig cfg;
  cfg.t_end = 2.0;
  cfg.record_every = 500;
  const RunResult r = run(u0, cfg, e);
  g_physical_runs.emplace_back("barenblatt oracle", r.diagnostics);

  const Barenblatt B = make_barenblatt(2, 0.75, barenblatt_mass_to_C(2, 0.75, 1.0));
  double l1 = 0.0, ref1 = 0.0, linf = 0.0, refinf = 0.0;
  std::vector<double> x(2);
  g.for_each_node([&](std::size_t k, std::span<const std::size_t> idx) {
    x[0] = g.coord(0, idx[0]);
    x[1] = g.coord(1, idx[1]);
    const double exact = B.eval(x, 2.0);
    l1 += std::abs(r.final[k] - exact);
    ref1 += exact;
    linf = std::max(linf, std::abs(r.final[k] - exact));
    refinf = std::max(refinf, exact);
  });
  const double e1 = l1 / ref1, einf = linf / refinf;
  return {e1 <= kOracleL1 && einf <= kOracleLinf,
          fmt("256^2, L=20, t 1->2: rel L1 = %.2e, rel Linf = %.2e", e1, einf)};
}

struct SignStats {
  double worst_sign = -std::numeric_limits<double>::infinity();  // residual/scale in the forbidden direction
  double error = 0.0;                                           // max |R_h - R_exact| / scale
};

// Upper barrier: points of Omega at levels X in [r, 1e3 r]; steps tied to the
// axis length scale X^{1/theta_i}. Lower barrier: points with every
// |y_i| in [1e-2, 50], steps proportional to |y_i|.
SignStats sign_sample(bool upper, const ExponentSet& e, double h_rel, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = e.dimension();
  const UpperBarrierSpec us = select_upper_params(e);
  const LowerBarrierSpec ls = select_lower_params(e);
  const oracle::PowerForm pf = upper ? oracle::from_upper(us) : oracle::from_lower(ls);
  const Profile prof = upper ? upper_profile(us) : lower_profile(ls);
  SignStats st;
  std::vector<double> y(n), h(n), w(n);
  for (int s = 0; s < 1000; ++s) {
    if (upper) {
      const double X = us.r * std::pow(10.0, 3.0 * unit(rng));
      double tot = 0.0;
      for (int i = 0; i < n; ++i) tot += (w[i] = -std::log(1.0 - unit(rng)));
      for (int i = 0; i < n; ++i) {
        const double len = std::pow(X, 1.0 / us.theta[i]);
        const double mag = std::pow(w[i] / tot * X, 1.0 / us.theta[i]);
        y[i] = (unit(rng) < 0.5 ? -1.0 : 1.0) * std::max(mag, 1e-3 * len);
        h[i] = h_rel * len;
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const double mag = std::pow(10.0, -2.0 + (std::log10(50.0) + 2.0) * unit(rng));
        y[i] = (unit(rng) < 0.5 ? -1.0 : 1.0) * mag;
        h[i] = h_rel * mag;
      }
    }
    const Residual r = stationary_residual(prof, e, y, h);
    const double exact = oracle::exact_residual(pf, e, y);
    const double signed_rel = (upper ? r.value : -r.value) / r.scale;
    st.worst_sign = std::max(st.worst_sign, signed_rel);
    st.error = std::max(st.error, std::abs(r.value - exact) / r.scale);
  }
  return st;
}

Outcome c03_barrier_signs() {
  const ExponentSet e = aniso();
  const double h = 0.02;
  const double tol = std::max(10.0 * h * h, 1e-8);
  const SignStats up = sign_sample(true, e, h, 11), up2 = sign_sample(true, e, h / 2, 11);
  const SignStats lo = sign_sample(false, e, h, 12), lo2 = sign_sample(false, e, h / 2, 12);
  const double shrink_up = up.error / up2.error, shrink_lo = lo.error / lo2.error;
  const bool ok = up.worst_sign <= tol && lo.worst_sign <= tol && up2.worst_sign <= tol && lo2.worst_sign <= tol &&
                  shrink_up >= kResidualShrink && shrink_lo >= kResidualShrink;
  const LowerBarrierSpec ls = select_lower_params(e);
  return {ok, fmt("m=(0.6,0.8), tol=%.1e: upper max R/scale = %.2e, lower max -R/scale = %.2e (A=2A0=%.4g); "
                  "FD error shrink x%.2f / x%.2f",
                  tol, up.worst_sign, lo.worst_sign, ls.A, shrink_up, shrink_lo)};
}

struct SmoothingRun {
  SmoothingFit fit;
  double alpha = 0.0;
};

// Rescaled run with a small shift t0 so that t + t0 ~ t on [1, 50]; the data at
// tau0 = log t0 is a bump of unit radius in y, i.e. a concentrated bump of
// radius t0^{a_i} in x at t = 0.
SmoothingRun smoothing_run(const ExponentSet& e, const Grid& g, double mass) {
  const double t0 = 0.01;
  DataParams dp;
  dp.mass = mass;
  dp.radius = 1.0;
  Field v0 = init_data(DataKind::bump, dp, g);
  v0.set_time(std::log(t0));
  Solver s = rescaled_solver(RescaledState{v0, t0}, rescaled_cfg(), e);
  std::vector<double> ts, linf;
  for (int j = 0; j <= 24; ++j) {
    const double t = std::pow(50.0, j / 24.0);
    s.advance_to(std::log(t + t0));
    ts.push_back(t);
    linf.push_back(std::pow(t + t0, -e.alpha()) * s.state().max());
  }
  return {smoothing_fit(ts, linf, mass, e), e.alpha()};
}

Outcome c04_smoothing() {
  const SmoothingRun iso = smoothing_run(exps({0.75, 0.75}), Grid::cube(2, 20.0, 129), 1.0);
  const SmoothingRun an = smoothing_run(aniso(), Grid({64.0, 32.0}, {129, 129}), 1.0);
  const double r1 = std::abs(iso.fit.slope + iso.alpha) / iso.alpha;
  const double r2 = std::abs(an.fit.slope + an.alpha) / an.alpha;
  return {r1 <= kSlopeRel && r2 <= kSlopeRel,
          fmt("t in [1,50]: m=(0.75,0.75) slope %.4f vs -%.4f (%.2f%%); m=(0.6,0.8) slope %.4f vs -%.4f (%.2f%%)",
              iso.fit.slope, iso.alpha, 100 * r1, an.fit.slope, an.alpha, 100 * r2)};
}

// Outer fit windows as fractions of the half-width, per axis.
constexpr double kTailWindow[2][2] = {{0.15, 0.55}, {0.2, 0.3}};

Outcome c05_tail() {
  const ProfileEstimate& est = aniso_profile();
  bool ok = true;
  std::ostringstream os;
  os << fmt("converged=%d tau=%.1f mass loss %.1e/tau", est.converged ? 1 : 0, est.tau, est.mass_loss_rate);
  for (int i = 0; i < 2; ++i) {
    const TailFit f = tail_exponent_fit(est.F_num, i, kTailWindow[i][0], kTailWindow[i][1]);
    const double sharp = -2.0 / (1.0 - aniso().m(i));
    const bool in = f.slope >= sharp - kTailBelow && f.slope <= sharp + kTailAbove;
    ok = ok && in;
    os << fmt("; axis %d slope %.3f +- %.3f in [%.1f, %.1f]", i + 1, f.slope, f.stderr_slope, sharp - kTailBelow,
              sharp + kTailAbove);
  }
  return {ok && est.converged, os.str()};
}

Outcome c06_uniqueness() {
  const ProfileEstimate& a = aniso_profile();
  DataParams dp;
  dp.mass = 1.0;
  dp.semi_axes = {2.0, 0.75};
  dp.mollify = 0.5;
  Field v0 = init_data(DataKind::mollified_box, dp, aniso_grid());
  const ProfileEstimate b = relax_to_profile(RescaledState{v0, 1.0}, rescaled_cfg(), aniso(), relax_opts());
  const double d = l1_distance(a.F_num, b.F_num) / a.mass;
  return {d <= kUniquenessL1 && a.converged && b.converged,
          fmt("bump vs mollified box, mass 1: rel L1 distance %.2e (converged %d/%d)", d, a.converged ? 1 : 0,
              b.converged ? 1 : 0)};
}

// Both solvers share every dt so the comparison runs on one discrete flow.
void advance_pair(Solver& a, Solver& b, double t) {
  while (a.time() < t) {
    double dt = std::min(a.stable_dt(), b.stable_dt());
    const bool last = dt >= (t - a.time()) * (1.0 - 1e-12);
    if (last) dt = t - a.time();
    a.step(dt);
    b.step(dt);
  }
}

ContractionReport pair_run(const Field& u1, const Field& u2, const ExponentSet& e, double t_end, int samples,
                           const std::string& label) {
  SolverConfig cfg;
  cfg.record_every = 0;
  Solver a(u1, cfg, e), b(u2, cfg, e);
  std::vector<Field> ta{a.state()}, tb{b.state()};
  for (int j = 1; j <= samples; ++j) {
    advance_pair(a, b, t_end * j / samples);
    a.record();
    b.record();
    Field fa = a.state(), fb = b.state();
    fa.set_time(t_end * j / samples);
    fb.set_time(t_end * j / samples);
    ta.push_back(std::move(fa));
    tb.push_back(std::move(fb));
  }
  g_physical_runs.emplace_back(label + " a", a.diagnostics());
  g_physical_runs.emplace_back(label + " b", b.diagnostics());
  return l1_contraction_check(ta, tb, kContractionTol);
}

Outcome c07_contraction() {
  const ExponentSet e = aniso();
  const Grid g = Grid::cube(2, 8.0, 65);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_rise = 0.0;
  bool ok = true;
  for (int k = 0; k < 10; ++k) {
    DataParams p1, p2;
    p1.seed = 100 + 2 * k;
    p2.seed = 101 + 2 * k;
    p1.radius = p2.radius = 2.5;
    p1.mass = 0.5 + unit(rng);
    p2.mass = 0.5 + unit(rng);
    const Field a = init_data(DataKind::random_bumps, p1, g);
    const Field b = init_data(DataKind::random_bumps, p2, g);
    const ContractionReport r = pair_run(a, b, e, 1.0, 20, "random pair " + std::to_string(k));
    worst_rise = std::max(worst_rise, r.max_increase / r.positive_part.front());
    ok = ok && r.nonincreasing;
  }
  DataParams c1, c2;
  c1.radius = c2.radius = 1.0;
  c1.center = {-0.5, 0.0};
  c2.center = {0.5, 0.0};
  const Field a = init_data(DataKind::bump, c1, g);
  const Field b = init_data(DataKind::bump, c2, g);
  const ContractionReport cross = pair_run(a, b, e, 1.0, 20, "crossing pair");
  ok = ok && cross.nonincreasing && cross.relative_decrease >= kCrossingDecrease;
  return {ok, fmt("10 random pairs: worst relative rise %.2e; crossing pair decrease %.2f%% by t=1", worst_rise,
                  100.0 * cross.relative_decrease)};
}

Outcome c08_ssni() {
  const ExponentSet e = aniso();
  const Grid g = Grid::cube(2, 8.0, 65);
  DataParams dp;
  dp.semi_axes = {2.0, 1.0};
  Field u0 = init_data(DataKind::ellipse_bump, dp, g);
  SolverConfig cfg;
  cfg.record_every = 1000;
  Solver s(u0, cfg, e);
  double worst_sym = 0.0;
  std::size_t worst_viol = 0;
  for (int k = 0; k < 10000; ++k) {
    s.step(s.stable_dt());
    if ((k + 1) % 500 == 0) {
      const SSNIReport r = ssni_check(s.state(), kMonotoneThreshold);
      worst_sym = std::max(worst_sym, r.symmetry_error);
      worst_viol = std::max(worst_viol, r.monotonicity_violations);
    }
  }
  s.record();
  g_physical_runs.emplace_back("ssni run", s.diagnostics());
  return {worst_sym <= kSymmetryTol && worst_viol == 0,
          fmt("10^4 steps to t=%.3g: symmetry error %.2e, monotonicity violations %zu", s.time(), worst_sym,
              worst_viol)};
}

Outcome c09_positivity() {
  const ExponentSet& e = aniso();
  DataParams dp;
  dp.mass = 1.0;
  dp.radius = 3.0;
  Field v0 = init_data(DataKind::bump, dp, aniso_grid());
  Solver s = rescaled_solver(RescaledState{v0, 1.0}, rescaled_cfg(), e);
  std::vector<Field> snaps{s.state()};
  for (int j = 1; j <= 20; ++j) {
    s.advance_to(0.25 * j);
    snaps.push_back(s.state());
  }
  const double M = 1.0, R = 12.0;
  double eps_mass = 0.0, sup = 0.0;
  for (const Field& v : snaps) {
    const Grid& g = v.grid();
    double outside = 0.0;
    g.for_each_node([&](std::size_t k, std::span<const std::size_t> idx) {
      if (std::abs(g.coord(0, idx[0])) > R || std::abs(g.coord(1, idx[1])) > R) outside += v[k];
    });
    eps_mass = std::max(eps_mass, outside * g.cell_volume());
    sup = std::max(sup, v.max());
  }
  // Largest r0 meeting the slab bound with a 10% margin.
  const double r0 = 0.9 * M / (4.0 * 2 * sup * R);
  const PositivityCertificate cert = make_positivity_certificate(M, 2, r0, R, eps_mass, sup);
  const PositivityReport rep = positivity_check(snaps, cert, kPositivitySlack);
  return {rep.ok && rep.applicable,
          fmt("R_eps=%.0f r0=%.3g eps_mass=%.3g c1=%.3e: min ratio v/c1 = %.3g over %zu snapshots (tau in [0,5])%s", R,
              r0, eps_mass, cert.c1, rep.worst_ratio, rep.taus.size(),
              rep.applicable ? "" : (" inapplicable: " + rep.reason).c_str())};
}

struct ShiftLevel {
  double discrepancy = 0.0;
  std::vector<Field> v1, vk;  // self-similar snapshots (t0 = 0)
};

ShiftLevel shift_level(std::size_t n, const std::vector<double>& times, double k, const ExponentSet& e) {
  const Grid g = Grid::cube(2, 24.0, n);
  DataParams dp;
  dp.radius = 2.0;
  const Field u0 = init_data(DataKind::bump, dp, g);
  const Field w0 = transform_scaling(u0, k, e);
  SolverConfig cfg;
  cfg.record_every = 0;
  Solver a(u0, cfg, e), b(w0, cfg, e);
  std::vector<Field> u1, uk;
  for (double t : times) {
    a.advance_to(k * t);
    b.advance_to(t);
    u1.push_back(a.state());
    uk.push_back(b.state());
  }
  g_physical_runs.emplace_back("time shift u1 n=" + std::to_string(n), a.diagnostics());
  g_physical_runs.emplace_back("time shift uk n=" + std::to_string(n), b.diagnostics());
  ShiftLevel lv;
  lv.discrepancy = time_shift_check(u1, uk, k, e).max_discrepancy;
  for (std::size_t j = 0; j < times.size(); ++j) {
    lv.v1.push_back(to_selfsimilar(u1[j], 0.0, e).v);
    lv.vk.push_back(to_selfsimilar(uk[j], 0.0, e).v);
  }
  return lv;
}

// L1 distance of coarse snapshots to the next finer level, resampled on the coarse grid.
double self_error(const std::vector<Field>& coarse, const std::vector<Field>& fine) {
  double worst = 0.0;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    worst = std::max(worst, l1_distance(coarse[j], fine[j].resampled(coarse[j].grid())));
  }
  return worst;
}

Outcome c10_time_shift() {
  const ExponentSet e = exps({0.75, 0.75});
  const double k = std::numbers::e;
  const std::vector<double> times = {0.5, 1.0, 2.0};
  const ShiftLevel l0 = shift_level(65, times, k, e);
  const ShiftLevel l1 = shift_level(129, times, k, e);
  const ShiftLevel l2 = shift_level(257, times, k, e);
  const double err0 = self_error(l0.v1, l1.v1) + self_error(l0.vk, l1.vk);
  const double err1 = self_error(l1.v1, l2.v1) + self_error(l1.vk, l2.vk);
  const double ratio = l0.discrepancy / l1.discrepancy;
  const bool ok = l0.discrepancy <= kShiftFactor * err0 && l1.discrepancy <= kShiftFactor * err1 && ratio >= kShiftRefine;
  return {ok, fmt("k=e, m=0.75: discrepancy %.3e (h) / %.3e (h/2), refinement ratio %.2f; scheme error %.3e / %.3e",
                  l0.discrepancy, l1.discrepancy, ratio, err0, err1)};
}

struct AttractionResult {
  double first = 0.0, last = 0.0;
};

AttractionResult attraction_run(const ExponentSet& e, const Grid& g, const Profile& F, double M,
                                std::vector<double> center) {
  DataParams dp;
  dp.mass = M;
  dp.radius = 1.0;
  dp.center = std::move(center);
  Field v0 = init_data(DataKind::bump, dp, g);
  Solver s = rescaled_solver(RescaledState{v0, 1.0}, rescaled_cfg(), e);
  std::vector<Field> snaps;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    s.advance_to(std::log(t + 1.0));
    snaps.push_back(s.state());
  }
  const AttractionReport rep = attraction_check(snaps, 1.0, F, M, e);
  if (!rep.mass_ok || rep.samples.size() != 5) throw std::runtime_error("attraction: mass mismatch");
  return {rep.samples.front().sup_scaled, rep.samples.back().sup_scaled};
}

Outcome c11_attraction() {
  const ExponentSet iso = exps({0.75, 0.75});
  const Barenblatt B = make_barenblatt(2, 0.75, barenblatt_mass_to_C(2, 0.75, 1.0));
  const AttractionResult a = attraction_run(iso, Grid::cube(2, 20.0, 129), barenblatt_profile(B), 1.0, {1.5, -1.0});
  const ProfileEstimate& est = aniso_profile();
  const AttractionResult b = attraction_run(aniso(), aniso_grid(), numeric_profile(est.F_num), est.mass, {3.0, 1.5});
  const double da = 1.0 - a.last / a.first, db = 1.0 - b.last / b.first;
  return {da >= kAttractionDrop && db >= kAttractionDrop,
          fmt("t^a|u-U|_inf t=1 -> 16: isotropic %.3e -> %.3e (-%.1f%%), anisotropic %.3e -> %.3e (-%.1f%%)", a.first,
              a.last, 100 * da, b.first, b.last, 100 * db)};
}

Outcome c12_marginal() {
  const ExponentSet e = exps({1.0, 0.8}, true);
  const Grid g({12.0, 24.0}, {97, 97});
  DataParams dp;
  dp.radius = 1.0;
  Field v0 = init_data(DataKind::bump, dp, g);
  const ProfileEstimate est = relax_to_profile(RescaledState{v0, 1.0}, rescaled_cfg(), e, relax_opts());
  const MarginalReport r = marginal_heat_check(est.F_num, e);
  return {r.applicable && r.l1_error <= kMarginalL1 && est.converged,
          fmt("m=(1,0.8): axis-1 marginal vs (4 pi)^-1/2 exp(-y^2/4): L1 error %.2e (converged %d, tau %.1f)",
              r.l1_error, est.converged ? 1 : 0, est.tau)};
}

Outcome c13_energy() {
  double worst = 0.0;
  std::string worst_run;
  std::size_t axes = 0;
  for (const auto& [name, d] : g_physical_runs) {
    for (const auto& a : energy_check(d, kEnergyTol)) {
      ++axes;
      if (a.relative_violation >= worst) {
        worst = a.relative_violation;
        worst_run = name;
      }
    }
  }
  return {axes > 0 && worst <= kEnergyTol,
          fmt("%zu runs, %zu axis checks: worst relative violation %.2e (%s)", g_physical_runs.size(), axes, worst,
              worst_run.c_str())};
}

std::string evolve_csv() {
  const ExponentSet e = aniso();
  DataParams dp;
  dp.seed = 5;
  dp.radius = 2.0;
  const Field u0 = init_data(DataKind::random_bumps, dp, Grid::cube(2, 8.0, 65));
  SolverConfig cfg;
  cfg.t_end = 0.5;
  cfg.record_every = 50;
  const RunResult r = run(u0, cfg, e);
  std::ostringstream os;
  write_field_csv(os, r.final);
  write_diagnostics_csv(os, r.diagnostics);
  const auto lines = export_levels(r.final, std::vector<double>{1e-3, 1e-2});
  write_contours_csv(os, lines.lines);
  return os.str();
}

Outcome c14_determinism() {
  const std::string a = evolve_csv();
  const std::string b = evolve_csv();
  return {a == b && !a.empty(),
          fmt("evolve + export-levels twice: %zu bytes, blob %s vs %s", a.size(), git_blob_hash(a).substr(0, 12).c_str(),
              git_blob_hash(b).substr(0, 12).c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number; the default runs all of them.
  std::vector<int> only;
  for (int k = 1; k < argc; ++k) only.push_back(std::atoi(argv[k]));
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exponent identities", c01_exponent_identities},
      {"isotropic Barenblatt oracle", c02_isotropic_oracle},
      {"barrier residual signs", c03_barrier_signs},
      {"smoothing exponent", c04_smoothing},
      {"tail sharpness", c05_tail},
      {"uniqueness of the profile", c06_uniqueness},
      {"L1 contraction", c07_contraction},
      {"SSNI preservation", c08_ssni},
      {"positivity floor", c09_positivity},
      {"time-shift identity", c10_time_shift},
      {"attraction", c11_attraction},
      {"heat marginal", c12_marginal},
      {"energy inequality", c13_energy},
      {"determinism", c14_determinism},
  };
  int failed = 0;
  int id = 0;
  for (const auto& [name, fn] : criteria) {
    ++id;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  const std::size_t ran = only.empty() ? criteria.size() : only.size();
  std::printf("%d/%zu criteria passed\n", static_cast<int>(ran) - failed, ran);
  return failed == 0 ? 0 : 1;
}
