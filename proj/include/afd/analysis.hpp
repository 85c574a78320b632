#pragma once

#include <string>
#include <vector>

#include "afd/barriers.hpp"
#include "afd/exponents.hpp"
#include "afd/field.hpp"
#include "afd/solver.hpp"

namespace afd {

struct ContractionReport {
  std::vector<double> times;
  std::vector<double> positive_part;  // int (u1 - u2)_+ per snapshot
  /// Largest rise of the functional between consecutive snapshots.
  double max_increase = 0.0;
  bool nonincreasing = true;
  /// Set when the initial data are ordered (u1 <= u2 or u2 <= u1).
  bool initially_ordered = false;
  /// Largest pointwise order violation over the run (ordered data only).
  double max_order_violation = 0.0;
  double relative_decrease = 0.0;  // 1 - final/initial
};

/// Snapshots must share grid shape and time stamps. Nonincrease tolerance is
/// rel_tol times the initial value.
ContractionReport l1_contraction_check(const std::vector<Field>& u1, const std::vector<Field>& u2,
                                       double rel_tol = 1e-3);

struct SmoothingFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// max over samples of |u(t)|_inf t^alpha M^{-2 alpha / N}
  double C1 = 0.0;
  std::size_t samples = 0;
};

/// Least-squares fit of log |u(t)|_inf against log t. Requires at least 1.5
/// decades of t.
SmoothingFit smoothing_fit(const std::vector<double>& t, const std::vector<double>& linf, double mass,
                           const ExponentSet& e);

struct SSNIReport {
  double symmetry_error = 0.0;
  std::size_t monotonicity_violations = 0;
};

/// Reflection error over every axis and the number of outward increases
/// larger than threshold along half-axis lines.
SSNIReport ssni_check(const Field& f, double threshold = 1e-12);

struct PositivityCertificate {
  double r0 = 0.0;
  double R_eps = 0.0;
  double eps_mass = 0.0;   // mass outside the box |y_i| <= R_eps
  double sup_bound = 0.0;  // bound on v used for the slab estimate
  double c1 = 0.0;         // M 2^{-(N+1)} (R_eps - r0)^{-N}
  bool outer_mass_ok = false;  // eps_mass < M/4
  bool slab_ok = false;        // sup_bound R_eps^{N-1} r0 < M/(4N)
  bool valid() const { return c1 > 0.0 && outer_mass_ok && slab_ok; }
};

PositivityCertificate make_positivity_certificate(double M, int dimension, double r0, double R_eps, double eps_mass,
                                                  double sup_bound);

struct PositivityReport {
  bool applicable = false;
  std::string reason;
  std::vector<double> taus;
  std::vector<double> minima;  // min over |y_i| <= r0 per snapshot
  double worst_ratio = 0.0;    // min over snapshots of minimum / c1
  bool ok = false;
};

PositivityReport positivity_check(const std::vector<Field>& v_snapshots, const PositivityCertificate& cert,
                                  double slack = 0.2);

struct AdmissibilityConditions {
  double M = 0.0;
  double L1 = 0.0;
  double tau0 = 0.0;
  double C1 = 0.0;
  double F_star = 0.0;
  bool cond1() const;  // C1 M^{2 alpha/N} <= F_star (1 - e^{-tau0})^alpha
  bool cond2() const;  // C1 M^{2 alpha/N} <= L1 (1 - e^{-tau0})^alpha
  bool cond3() const;  // L1 e^{alpha tau0} <= F_star
  double alpha = 0.0;
  int dimension = 2;
};

struct DominationReport {
  bool applicable = false;
  std::string reason;
  bool conditions_hold = false;
  double max_ratio = 0.0;  // max over nodes and snapshots of v / G
  bool ok = false;
};

/// Checks v <= G (1 + slack) at every node of every snapshot, where G is the
/// capped barrier. Inapplicable when the first snapshot exceeds Fbar inside Omega.
DominationReport barrier_domination_check(const std::vector<Field>& v_snapshots, const UpperBarrierSpec& s,
                                          const AdmissibilityConditions& conds, double slack = 5e-2);

struct MarginalReport {
  bool applicable = false;
  int axis = -1;
  std::vector<double> y;
  std::vector<double> w;
  double mass = 0.0;
  double l1_error = 0.0;  // relative to the mass
};

/// Integrates f over every axis except the first linear one.
MarginalReport marginal(const Field& f, const ExponentSet& e);
/// Profile marginal against (4 pi)^{-1/2} e^{-y^2/4} after mass normalisation.
MarginalReport marginal_heat_check(const Field& profile, const ExponentSet& e);
/// Physical trajectory: marginal at each later snapshot against the 1-D heat
/// flow of the first snapshot's marginal; l1_error is the worst case.
MarginalReport marginal_heat_evolution_check(const std::vector<Field>& traj, const ExponentSet& e);

struct NormMonotonicity {
  double worst_relative_increase = 0.0;
  bool ok = true;
};

/// |u|_p for each configured p (and |u|_inf, mass) must not increase between records.
NormMonotonicity lp_monotonicity(const RunDiagnostics& d, double rel_tol = 1e-10);

}  // namespace afd
