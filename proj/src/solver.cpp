#include "afd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "afd/barriers.hpp"
#include "afd/simd.hpp"

namespace afd {

namespace {

constexpr double kNegativeTol = 1e-12;

std::vector<double> no_drift(const std::vector<double>& m) { return std::vector<double>(m.size(), 0.0); }

void impose_boundary(Field& u, double value) {
  const Grid& g = u.grid();
  g.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) {
    if (!g.is_interior(idx)) u[flat] = value;
  });
}

}  // namespace

double resolve_eps(const Field& u0, const SolverConfig& cfg) {
  if (cfg.eps >= 0.0) return cfg.eps;
  const double top = u0.lp_norm(std::numeric_limits<double>::infinity());
  return top > 0.0 ? cfg.eps_rel * top : cfg.eps_rel;
}

Solver::Solver(Field u0, const SolverConfig& cfg, std::vector<double> m, std::vector<double> drift)
    : cfg_(cfg),
      u_(std::move(u0)),
      scratch_(u_.size(), 0.0),
      engine_(u_.grid(), m, resolve_eps(u_, cfg), drift.empty() ? no_drift(m) : drift,
              cfg.drift_scheme) {
  if (!(cfg_.safety > 0.0 && cfg_.safety <= 1.0)) throw std::invalid_argument("solver: safety factor must lie in (0, 1]");
  if (cfg_.dt_policy == DtPolicy::fixed && !(cfg_.dt_fixed > 0.0)) throw std::invalid_argument("solver: fixed dt must be positive");
  if (!(cfg_.boundary >= 0.0)) throw std::invalid_argument("solver: boundary value must be nonnegative");
  for (double v : u_.values()) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("solver: initial data must be finite and nonnegative");
  }
  impose_boundary(u_, cfg_.boundary);
  diag_.norms_p = cfg_.norms_p;
  diag_.m = m;
  diag_.eps = engine_.eps();
  last_min_ = engine_.interior_min(u_.values());
  record();
}

Solver::Solver(Field u0, const SolverConfig& cfg, const ExponentSet& e)
    : Solver(std::move(u0), cfg, std::vector<double>(e.m().begin(), e.m().end())) {}

double Solver::stable_dt() const { return cfg_.safety / engine_.rate_bound(std::max(last_min_, 0.0)); }

double Solver::cap_dt() const { return cfg_.safety / engine_.rate_bound(0.0); }

double Solver::next_dt() const {
  if (cfg_.dt_policy == DtPolicy::fixed) return cfg_.dt_fixed;
  const double dt = stable_dt();
  if (!std::isfinite(dt) || !(dt > 0.0)) throw std::domain_error("solver: no stable time step (field reaches zero with eps = 0)");
  return dt;
}

StepReport Solver::step(double dt) {
  const simd::Kernels& K = simd::active();
  const double mass_before = K.sum(u_.values().data(), u_.size()) * u_.grid().cell_volume();
  StepReport rep = engine_.step(u_.values(), scratch_, dt, cfg_.track_energy);

  double mn = 0.0, mx = 0.0;
  K.min_max(scratch_.data(), scratch_.size(), &mn, &mx);
  const double mass_after = K.sum(scratch_.data(), scratch_.size()) * u_.grid().cell_volume();
  if (!std::isfinite(mass_after) || !std::isfinite(mn) || !std::isfinite(mx)) {
    std::ostringstream os;
    os << "solver: non-finite value after step " << steps_ << " at t = " << u_.time() << " (dt = " << dt << ")";
    throw InstabilityError(os.str());
  }
  if (mn < -kNegativeTol * std::max(mx, 1e-300)) {
    std::ostringstream os;
    os << "solver: negative value " << mn << " after step " << steps_ << " at t = " << u_.time() << " (dt = " << dt
       << ", stable dt = " << stable_dt() << ")";
    throw InstabilityError(os.str());
  }
  if (mn < 0.0) {
    for (double& v : scratch_) v = std::max(v, 0.0);
    mn = 0.0;
  }
  diag_.max_balance_error = std::max(diag_.max_balance_error, std::abs(mass_after - mass_before + rep.outflow));

  std::swap(u_.storage(), scratch_);
  u_.set_time(u_.time() + dt);
  last_min_ = engine_.interior_min(u_.values());
  outflow_ += rep.outflow;
  for (int i = 0; i < Grid::kMaxDim; ++i) energy_[i] += rep.energy[i];
  ++steps_;
  ++since_record_;
  return rep;
}

void Solver::advance_to(double t, const Observer& on_record) {
  if (t < u_.time()) throw std::invalid_argument("solver: cannot advance backwards in time");
  std::size_t budget = cfg_.max_steps;
  while (u_.time() < t) {
    if (budget-- == 0) throw std::runtime_error("solver: step budget exhausted before reaching the target time");
    double dt = next_dt();
    const double remaining = t - u_.time();
    const bool last = dt >= remaining * (1.0 - 1e-12);
    if (last) dt = remaining;
    step(dt);
    if (last) u_.set_time(t);
    if ((cfg_.record_every > 0 && since_record_ >= cfg_.record_every) || last) {
      record();
      if (on_record) on_record(*this);
    }
  }
}

void Solver::record() {
  const simd::Kernels& K = simd::active();
  const Grid& g = u_.grid();
  const double vol = g.cell_volume();
  DiagnosticsRecord r;
  r.t = u_.time();
  r.step = steps_;
  r.mass = K.sum(u_.values().data(), u_.size()) * vol;
  r.outflow = outflow_;
  K.min_max(u_.values().data(), u_.size(), &r.min, &r.linf);
  for (double p : diag_.norms_p) {
    if (std::isinf(p)) {
      r.lp.push_back(r.linf);
    } else {
      r.lp.push_back(std::pow(K.sum_pow(u_.values().data(), u_.size(), p) * vol, 1.0 / p));
    }
  }
  r.energy = energy_;
  for (int i = 0; i < g.dimension(); ++i) {
    r.power_integral[i] = K.sum_pow(u_.values().data(), u_.size(), diag_.m[i] + 1.0) * vol;
  }
  if (!diag_.records.empty() && diag_.records.back().t == r.t) {
    diag_.records.back() = std::move(r);
  } else {
    diag_.records.push_back(std::move(r));
  }
  since_record_ = 0;
}

Field step(const Field& u, const SolverConfig& cfg, const ExponentSet& e) {
  SolverConfig c = cfg;
  c.track_energy = false;
  Solver s(u, c, e);
  s.step(cfg.dt_policy == DtPolicy::fixed ? cfg.dt_fixed : s.stable_dt());
  return s.state();
}

RunResult run(const Field& u0, const SolverConfig& cfg, const ExponentSet& e) {
  Solver s(u0, cfg, e);
  s.advance_to(cfg.t_end);
  return {s.state(), s.diagnostics()};
}

std::vector<EnergyAxisReport> energy_check(const RunDiagnostics& d, double rel_tol) {
  std::vector<EnergyAxisReport> out;
  if (d.records.empty()) return out;
  const auto& first = d.records.front();
  const auto& last = d.records.back();
  for (std::size_t i = 0; i < d.m.size(); ++i) {
    EnergyAxisReport a;
    a.lhs = last.energy[i] - first.energy[i];
    a.rhs = (first.power_integral[i] - last.power_integral[i]) / (d.m[i] + 1.0);
    const double excess = a.lhs - a.rhs;
    const double scale = std::max(std::abs(a.rhs), std::abs(a.lhs));
    a.relative_violation = excess > 0.0 ? (scale > 0.0 ? excess / scale : excess) : 0.0;
    a.ok = a.relative_violation <= rel_tol;
    out.push_back(a);
  }
  return out;
}

namespace {

double bump_shape(double s) {
  if (s >= 1.0) return 0.0;
  const double b = 1.0 - s;
  return b * b * b;
}

double smooth_step(double x, double a, double w) {
  const double ax = std::abs(x);
  if (ax <= a - w) return 1.0;
  if (ax >= a + w) return 0.0;
  const double s = (a + w - ax) / (2.0 * w);
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

std::vector<double> center_of(const DataParams& p, int d) {
  if (p.center.empty()) return std::vector<double>(d, 0.0);
  if (static_cast<int>(p.center.size()) != d) throw std::invalid_argument("init_data: center dimension");
  return p.center;
}

void check_support(const Grid& g, std::span<const double> center, std::span<const double> half_extent) {
  for (int i = 0; i < g.dimension(); ++i) {
    if (std::abs(center[i]) + half_extent[i] >= g.half_width(i)) {
      throw std::invalid_argument("init_data: support exceeds the grid box");
    }
  }
}

void normalize_mass(Field& u, double M) {
  const double m = u.mass();
  if (!(m > 0.0)) throw std::invalid_argument("init_data: generator produced zero mass (support below grid resolution?)");
  const double s = M / m;
  for (double& v : u.values()) v *= s;
}

}  // namespace

Field init_data(DataKind kind, const DataParams& p, const Grid& grid) {
  if (!(p.mass > 0.0)) throw std::invalid_argument("init_data: mass must be positive");
  const int d = grid.dimension();
  Field u(grid, 0.0);
  const auto c = center_of(p, d);
  std::vector<double> x(d);

  auto fill = [&](auto&& f) {
    grid.for_each_node([&](std::size_t flat, std::span<const std::size_t> idx) {
      for (int i = 0; i < d; ++i) x[i] = grid.coord(i, idx[i]);
      u[flat] = f(x);
    });
  };

  switch (kind) {
    case DataKind::bump: {
      check_support(grid, c, std::vector<double>(d, p.radius));
      const double r2 = p.radius * p.radius;
      fill([&](const std::vector<double>& y) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += (y[i] - c[i]) * (y[i] - c[i]);
        return bump_shape(s / r2);
      });
      normalize_mass(u, p.mass);
      break;
    }
    case DataKind::ellipse_bump: {
      if (static_cast<int>(p.semi_axes.size()) != d) throw std::invalid_argument("init_data: semi_axes dimension");
      check_support(grid, c, p.semi_axes);
      fill([&](const std::vector<double>& y) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
          const double z = (y[i] - c[i]) / p.semi_axes[i];
          s += z * z;
        }
        return bump_shape(s);
      });
      normalize_mass(u, p.mass);
      break;
    }
    case DataKind::mollified_box: {
      std::vector<double> half = p.semi_axes.empty() ? std::vector<double>(d, p.radius) : p.semi_axes;
      if (static_cast<int>(half.size()) != d) throw std::invalid_argument("init_data: semi_axes dimension");
      std::vector<double> ext(d);
      for (int i = 0; i < d; ++i) ext[i] = half[i] + p.mollify;
      check_support(grid, c, ext);
      fill([&](const std::vector<double>& y) {
        double v = 1.0;
        for (int i = 0; i < d; ++i) v *= smooth_step(y[i] - c[i], half[i], p.mollify);
        return v;
      });
      normalize_mass(u, p.mass);
      break;
    }
    case DataKind::barenblatt: {
      const double C = barenblatt_mass_to_C(d, p.barenblatt_m, p.mass);
      const Barenblatt b = make_barenblatt(d, p.barenblatt_m, C);
      std::vector<double> shifted(d);
      fill([&](const std::vector<double>& y) {
        for (int i = 0; i < d; ++i) shifted[i] = y[i] - c[i];
        return b.eval(shifted, p.barenblatt_time);
      });
      u.set_time(p.barenblatt_time);
      break;
    }
    case DataKind::random_bumps: {
      std::mt19937_64 rng(p.seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      struct Blob {
        std::vector<double> c;
        double r;
        double w;
      };
      std::vector<Blob> blobs;
      for (int b = 0; b < std::max(1, p.random_count); ++b) {
        Blob bl;
        bl.r = p.radius * (0.4 + 0.6 * unit(rng));
        bl.c.resize(d);
        for (int i = 0; i < d; ++i) bl.c[i] = c[i] + (2.0 * unit(rng) - 1.0) * (p.radius - bl.r);
        bl.w = 0.5 + unit(rng);
        check_support(grid, bl.c, std::vector<double>(d, bl.r));
        blobs.push_back(std::move(bl));
      }
      fill([&](const std::vector<double>& y) {
        double v = 0.0;
        for (const auto& bl : blobs) {
          double s = 0.0;
          for (int i = 0; i < d; ++i) s += (y[i] - bl.c[i]) * (y[i] - bl.c[i]);
          v += bl.w * bump_shape(s / (bl.r * bl.r));
        }
        return v;
      });
      normalize_mass(u, p.mass);
      break;
    }
  }
  return u;
}

}  // namespace afd
