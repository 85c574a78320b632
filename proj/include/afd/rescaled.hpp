#pragma once

#include <functional>
#include <vector>

#include "afd/barriers.hpp"
#include "afd/exponents.hpp"
#include "afd/field.hpp"
#include "afd/solver.hpp"

namespace afd {

/// v(y, tau) = (t + t0)^alpha u(x, t), tau = log(t + t0), y_i = x_i (t + t0)^{-sigma_i alpha}.
/// The field's time member holds tau.
struct RescaledState {
  Field v;
  double t0 = 1.0;
  double tau() const { return v.time(); }
  /// Physical time t = e^tau - t0.
  double physical_time() const;
};

/// Same node layout, grid spacings divided by (t + t0)^{a_i}; exact up to rounding.
RescaledState to_selfsimilar(const Field& u, double t0, const ExponentSet& e);
Field from_selfsimilar(const RescaledState& s, const ExponentSet& e);
/// v resampled (multilinear, zero extension) onto a prescribed y-grid.
Field to_selfsimilar_on(const Field& u, double t0, const ExponentSet& e, const Grid& y_grid);

/// Solver for v_tau = sum_i [ (v^{m_i})_{y_i y_i} + alpha sigma_i (y_i v)_{y_i} ].
Solver rescaled_solver(const RescaledState& s, const SolverConfig& cfg, const ExponentSet& e);
RescaledState rescaled_step(const RescaledState& s, const SolverConfig& cfg, const ExponentSet& e);

struct RelaxOptions {
  double tol_rel = 1e-5;   // stop when |v(tau + dtau) - v(tau)|_1 / dtau < tol_rel * mass
  double check_every = 0.5;  // dtau between convergence checks
  double tau_max = 30.0;
  /// Tail fit window as fractions of the half-width; one entry or one per axis.
  std::vector<double> tail_lo = {0.3};
  std::vector<double> tail_hi = {0.6};
  double window_lo(int axis) const { return tail_lo.size() == 1 ? tail_lo[0] : tail_lo.at(axis); }
  double window_hi(int axis) const { return tail_hi.size() == 1 ? tail_hi[0] : tail_hi.at(axis); }
};

struct TailFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  std::size_t points = 0;
};

struct ProfileEstimate {
  Field F_num;
  double residual_l1 = 0.0;
  /// Mass lost through the box faces per unit tau over the last check interval;
  /// the zero boundary drains the rescaled mass slowly, faster in small boxes.
  double mass_loss_rate = 0.0;
  std::vector<TailFit> tail_slopes;
  double mass = 0.0;
  bool converged = false;
  double tau = 0.0;
  std::size_t steps = 0;
};

ProfileEstimate relax_to_profile(const RescaledState& s0, const SolverConfig& cfg, const ExponentSet& e,
                                 const RelaxOptions& opt = {});

/// Least-squares slope of log f against log y_axis along the positive half of
/// the axis through the grid centre, over y in [lo_frac L, hi_frac L]. Shrinks
/// the window at the first nonpositive value; throws if fewer than 3 points remain.
TailFit tail_exponent_fit(const Field& f, int axis, double lo_frac, double hi_frac);

struct TimeShiftReport {
  std::vector<double> taus;
  std::vector<double> discrepancies;
  double max_discrepancy = 0.0;
};

/// u1[j] is the solution at time k t_j, uk[j] the solution from T_k(data) at
/// time t_j. Both are taken to self-similar variables with t0 = 0 and compared
/// in L^1 on u1's y-grid.
TimeShiftReport time_shift_check(const std::vector<Field>& u1, const std::vector<Field>& uk, double k,
                                 const ExponentSet& e);

struct AttractionSample {
  double t = 0.0;
  double sup_scaled = 0.0;  // t^alpha |u(t) - U_M(t)|_inf
  double l1 = 0.0;          // |u(t) - U_M(t)|_1
};

struct AttractionReport {
  std::vector<AttractionSample> samples;
  /// Largest increase of the L^1 series between consecutive samples.
  double max_l1_increase = 0.0;
  bool mass_ok = true;
  double mass_mismatch = 0.0;
};

/// Compares rescaled snapshots (time member = tau, shift t0) with the
/// fundamental solution U_M(x, t) = t^{-alpha} F(x_i t^{-a_i}); F must carry mass M.
AttractionReport attraction_check(const std::vector<Field>& v_snapshots, double t0, const Profile& F, double M,
                                  const ExponentSet& e);

}  // namespace afd
