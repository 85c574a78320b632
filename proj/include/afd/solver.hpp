#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "afd/engine.hpp"
#include "afd/exponents.hpp"
#include "afd/field.hpp"

namespace afd {

/// Raised when an update produces a NaN or a clearly negative value.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DtPolicy { cfl, fixed };

struct SolverConfig {
  /// Regularization floor; negative means eps_rel * max(u0).
  double eps = -1.0;
  double eps_rel = 1e-8;
  DtPolicy dt_policy = DtPolicy::cfl;
  double safety = 0.9;
  double dt_fixed = 0.0;
  DriftScheme drift_scheme = DriftScheme::hybrid;
  /// Dirichlet value imposed on boundary nodes at start (0 for the plain
  /// truncated problem, eps for the lifted one).
  double boundary = 0.0;
  double t_end = 1.0;
  /// Steps between diagnostics records; 0 records only the endpoints.
  std::size_t record_every = 100;
  std::vector<double> norms_p = {2.0};
  bool track_energy = true;
  std::size_t max_steps = 50'000'000;
};

struct DiagnosticsRecord {
  double t = 0.0;
  std::size_t step = 0;
  double mass = 0.0;
  /// Mass lost through the boundary since the start.
  double outflow = 0.0;
  double min = 0.0;
  double linf = 0.0;
  std::vector<double> lp;  // one entry per configured p
  /// Cumulative gradient energy per axis (dt-weighted).
  std::array<double, Grid::kMaxDim> energy{};
  /// Integral of u^{m_i + 1} per axis at this record.
  std::array<double, Grid::kMaxDim> power_integral{};
};

struct RunDiagnostics {
  std::vector<double> norms_p;
  std::vector<double> m;
  std::vector<DiagnosticsRecord> records;
  /// Largest per-step |mass change + boundary outflow|.
  double max_balance_error = 0.0;
  double eps = 0.0;
};

/// Explicit time stepper for u_t = sum_i (phi_i(u))_{x_i x_i} + sum_i c_i (x_i u)_{x_i}
/// on a box with Dirichlet boundary nodes. The physical problem has c = 0.
class Solver {
 public:
  using Observer = std::function<void(const Solver&)>;

  Solver(Field u0, const SolverConfig& cfg, std::vector<double> m, std::vector<double> drift = {});
  Solver(Field u0, const SolverConfig& cfg, const ExponentSet& e);

  const Field& state() const { return u_; }
  double time() const { return u_.time(); }
  double eps() const { return engine_.eps(); }
  std::size_t steps() const { return steps_; }
  const SolverConfig& config() const { return cfg_; }
  const Engine& engine() const { return engine_; }
  const RunDiagnostics& diagnostics() const { return diag_; }

  /// Largest dt keeping the next step monotone for the current field.
  double stable_dt() const;
  /// Monotone dt for any field with values >= 0 (uses the eps-capped slope).
  double cap_dt() const;

  /// One update with the given dt; throws InstabilityError on NaN or negative values.
  StepReport step(double dt);
  /// Steps until time t (landing on it exactly), recording every record_every steps.
  void advance_to(double t, const Observer& on_record = {});
  void record();

 private:
  double next_dt() const;

  SolverConfig cfg_;
  Field u_;
  std::vector<double> scratch_;
  Engine engine_;
  RunDiagnostics diag_;
  std::size_t steps_ = 0;
  std::size_t since_record_ = 0;
  double outflow_ = 0.0;
  std::array<double, Grid::kMaxDim> energy_{};
  double last_min_ = 0.0;
};

double resolve_eps(const Field& u0, const SolverConfig& cfg);

/// One CFL-limited (or fixed-dt) step of the physical problem.
Field step(const Field& u, const SolverConfig& cfg, const ExponentSet& e);

struct RunResult {
  Field final;
  RunDiagnostics diagnostics;
};

/// Integrates from u0.time() to cfg.t_end.
RunResult run(const Field& u0, const SolverConfig& cfg, const ExponentSet& e);

struct EnergyAxisReport {
  double lhs = 0.0;  // time-integrated gradient energy
  double rhs = 0.0;  // (1/(m_i+1)) (int u0^{m_i+1} - int u(T)^{m_i+1})
  double relative_violation = 0.0;
  bool ok = true;
};

/// Checks the per-axis energy inequality between the first and last record.
std::vector<EnergyAxisReport> energy_check(const RunDiagnostics& d, double rel_tol = 1e-3);

enum class DataKind { bump, ellipse_bump, mollified_box, barenblatt, random_bumps };

struct DataParams {
  double mass = 1.0;
  double radius = 1.0;
  /// Per-axis semi-axes (ellipse_bump) or half-sides (mollified_box).
  std::vector<double> semi_axes;
  /// Center offset; empty means the origin.
  std::vector<double> center;
  double mollify = 0.25;  // transition half-width of the mollified box
  double barenblatt_time = 1.0;
  double barenblatt_m = 0.0;  // isotropic exponent for the Barenblatt snapshot
  std::uint64_t seed = 1;
  int random_count = 3;
};

/// Initial data generators; the amplitude is scaled so the discrete mass
/// equals params.mass (except for the Barenblatt snapshot, which is sampled
/// from its closed form).
Field init_data(DataKind kind, const DataParams& params, const Grid& grid);

}  // namespace afd
