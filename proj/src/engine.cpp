#include "afd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "afd/simd.hpp"

namespace afd {

Engine::Engine(Grid grid, std::vector<double> m, double eps, std::vector<double> drift, DriftScheme scheme)
    : grid_(std::move(grid)), m_(std::move(m)), eps_(eps), drift_(std::move(drift)), scheme_(scheme) {
  const int d = grid_.dimension();
  if (static_cast<int>(m_.size()) != d) throw std::invalid_argument("engine: exponent count does not match grid");
  if (drift_.empty()) drift_.assign(d, 0.0);
  if (static_cast<int>(drift_.size()) != d) throw std::invalid_argument("engine: drift count does not match grid");
  if (!(eps_ >= 0.0)) throw std::invalid_argument("engine: eps must be nonnegative");

  phi_slot_.assign(d, -1);
  std::vector<double> seen;
  for (int i = 0; i < d; ++i) {
    auto it = std::find(seen.begin(), seen.end(), m_[i]);
    if (it == seen.end()) {
      phi_slot_[i] = static_cast<int>(seen.size());
      seen.push_back(m_[i]);
    } else {
      phi_slot_[i] = static_cast<int>(it - seen.begin());
    }
  }
  phi_.assign(seen.size(), std::vector<double>(grid_.size(), 0.0));

  face_wp_.resize(d);
  face_wm_.resize(d);
  face_cap_.resize(d);
  for (int i = 0; i < d; ++i) {
    const std::size_t n = grid_.points(i);
    face_wp_[i].assign(n - 1, 0.0);
    face_wm_[i].assign(n - 1, 0.0);
    face_cap_[i].assign(n - 1, 0.0);
    const double half = 0.5 * static_cast<double>(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double yf = (static_cast<double>(k) + 0.5 - half) * grid_.spacing(i);
      const double w = -(drift_[i] * yf);
      face_wp_[i][k] = std::max(w, 0.0);
      face_wm_[i][k] = std::min(w, 0.0);
      face_cap_[i][k] = 0.5 * std::abs(w) * grid_.spacing(i);
    }
  }
  const std::size_t rows = grid_.size() / grid_.points(d - 1);
  row_outflow_.assign(rows, 0.0);
  row_energy_.assign(rows, {});
}

double Engine::phi_slope(int axis, double z) const {
  const double mi = m_[axis];
  if (eps_ > 0.0 && z < eps_) z = eps_;
  if (mi == 1.0) return 1.0;
  if (!(z > 0.0)) return std::numeric_limits<double>::infinity();
  return mi * std::pow(z, mi - 1.0);
}

double Engine::anti_flux(int i, std::size_t k, double ua, double ub, double pa, double pb) const {
  const double du = ub - ua;
  const double slope = du != 0.0 ? (pb - pa) / du : phi_slope(i, ua);
  const double g = std::max(std::min(face_cap_[i][k], slope), 0.0);
  return g * du;
}

double Engine::rate_bound(double z_min) const {
  double rate = 0.0;
  for (int i = 0; i < grid_.dimension(); ++i) {
    const double h = grid_.spacing(i);
    rate += 2.0 * phi_slope(i, z_min) / (h * h);
    rate += drift_[i] * (grid_.half_width(i) - 0.5 * h) / h;
  }
  return rate;
}

double Engine::interior_min(std::span<const double> u) const {
  const Grid& g = grid_;
  const int d = g.dimension();
  const std::size_t nl = g.points(d - 1);
  const std::size_t rows = g.size() / nl;
  const simd::Kernels& K = simd::active();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < rows; ++r) {
    const auto idx = g.unflatten(r * nl);
    bool interior = true;
    for (int i = 0; i < d - 1; ++i) interior = interior && idx[i] > 0 && idx[i] + 1 < g.points(i);
    if (!interior) continue;
    double mn = 0.0, mx = 0.0;
    K.min_max(u.data() + r * nl + 1, nl - 2, &mn, &mx);
    best = std::min(best, mn);
  }
  return best;
}

double Engine::stable_dt(std::span<const double> u, double safety) const {
  const double rate = rate_bound(std::max(interior_min(u), 0.0));
  if (!std::isfinite(rate)) {
    throw std::domain_error("engine: unbounded diffusion rate (field reaches zero with eps = 0)");
  }
  return rate > 0.0 ? safety / rate : std::numeric_limits<double>::infinity();
}

StepReport Engine::step(std::span<const double> u, std::span<double> out, double dt, bool track_energy) {
  const Grid& g = grid_;
  const int d = g.dimension();
  const std::size_t nl = g.points(d - 1);
  const std::size_t rows = g.size() / nl;
  if (u.size() != g.size() || out.size() != g.size()) throw std::invalid_argument("engine: buffer size mismatch");
  const simd::Kernels& K = simd::active();

  for (std::size_t s = 0; s < phi_.size(); ++s) {
    int axis = 0;
    while (phi_slot_[axis] != static_cast<int>(s)) ++axis;
    double* phi = phi_[s].data();
    const double mi = m_[axis];
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r) {
      const std::size_t base = static_cast<std::size_t>(r) * nl;
      K.power_map(u.data() + base, phi + base, nl, mi, eps_);
    }
  }

  const double vol = g.cell_volume();
  const std::size_t len = nl - 2;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t rr = 0; rr < static_cast<std::ptrdiff_t>(rows); ++rr) {
    const std::size_t r = static_cast<std::size_t>(rr);
    const std::size_t base = r * nl;
    const auto idx = g.unflatten(base);
    std::copy(u.begin() + base, u.begin() + base + nl, out.begin() + base);

    bool interior = true;
    for (int i = 0; i < d - 1; ++i) interior = interior && idx[i] > 0 && idx[i] + 1 < g.points(i);

    double outflow = 0.0;
    if (interior) {
      const std::size_t p = base + 1;
      for (int i = 0; i < d; ++i) {
        const double* phi = phi_[phi_slot_[i]].data();
        const double h = g.spacing(i);
        const double coef = dt / (h * h);
        const double cd = dt / h;
        const bool has_drift = drift_[i] != 0.0;
        const bool hybrid = has_drift && scheme_ == DriftScheme::hybrid;
        if (i < d - 1) {
          const std::size_t s = g.stride(i);
          K.second_diff_accum(phi + p, phi + p + s, phi + p - s, out.data() + p, coef, len);
          const std::size_t k = idx[i];
          const double wpl = face_wp_[i][k - 1], wml = face_wm_[i][k - 1];
          const double wph = face_wp_[i][k], wmh = face_wm_[i][k];
          if (has_drift) K.drift_lines(u.data() + p, u.data() + p - s, u.data() + p + s, wpl, wml, wph, wmh,
                                       out.data() + p, cd, len);
          if (k == 1) {
            for (std::size_t j = p; j < p + len; ++j) {
              outflow += coef * (phi[j] - phi[j - s]);
              if (has_drift) outflow -= cd * (wpl * u[j - s] + wml * u[j]);
            }
          }
          if (k + 2 == g.points(i)) {
            for (std::size_t j = p; j < p + len; ++j) {
              outflow += coef * (phi[j] - phi[j + s]);
              if (has_drift) outflow += cd * (wph * u[j] + wmh * u[j + s]);
            }
          }
          if (hybrid) {
            for (std::size_t j = p; j < p + len; ++j) {
              const double alo = anti_flux(i, k - 1, u[j - s], u[j], phi[j - s], phi[j]);
              const double ahi = anti_flux(i, k, u[j], u[j + s], phi[j], phi[j + s]);
              out[j] -= coef * (ahi - alo);
              if (k == 1) outflow -= coef * alo;
              if (k + 2 == g.points(i)) outflow += coef * ahi;
            }
          }
        } else {
          K.second_diff_accum(phi + p, phi + p + 1, phi + p - 1, out.data() + p, coef, len);
          const double* wp = face_wp_[i].data();
          const double* wm = face_wm_[i].data();
          if (has_drift) K.drift_row(u.data() + p, wp + 1, wm + 1, out.data() + p, cd, len);
          const std::size_t lo = base + 1, hi = base + nl - 2;
          outflow += coef * (phi[lo] - phi[lo - 1]);
          outflow += coef * (phi[hi] - phi[hi + 1]);
          if (has_drift) {
            outflow -= cd * (wp[0] * u[lo - 1] + wm[0] * u[lo]);
            outflow += cd * (wp[nl - 2] * u[hi] + wm[nl - 2] * u[hi + 1]);
          }
          if (hybrid) {
            double alo = anti_flux(i, 0, u[base], u[base + 1], phi[base], phi[base + 1]);
            outflow -= coef * alo;
            for (std::size_t k = 1; k + 1 < nl; ++k) {
              const std::size_t j = base + k;
              const double ahi = anti_flux(i, k, u[j], u[j + 1], phi[j], phi[j + 1]);
              out[j] -= coef * (ahi - alo);
              alo = ahi;
            }
            outflow += coef * alo;
          }
        }
      }
    }
    row_outflow_[r] = outflow * vol;

    if (track_energy) {
      auto& e = row_energy_[r];
      for (int i = 0; i < d; ++i) {
        const double* phi = phi_[phi_slot_[i]].data();
        const double h = g.spacing(i);
        double s = 0.0;
        if (i == d - 1) {
          s = K.sum_sq_diff(phi + base + 1, phi + base, nl - 1);
        } else if (idx[i] + 1 < g.points(i)) {
          s = K.sum_sq_diff(phi + base + g.stride(i), phi + base, nl);
        }
        e[i] = s / (h * h) * vol * dt;
      }
    }
  }

  StepReport rep;
  for (std::size_t r = 0; r < rows; ++r) {
    rep.outflow += row_outflow_[r];
    if (track_energy) {
      for (int i = 0; i < d; ++i) rep.energy[i] += row_energy_[r][i];
    }
  }
  return rep;
}

}  // namespace afd
