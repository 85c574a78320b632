#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "afd/analysis.hpp"
#include "afd/barriers.hpp"
#include "afd/config.hpp"
#include "afd/contour.hpp"
#include "afd/exponents.hpp"
#include "afd/io.hpp"
#include "afd/rescaled.hpp"
#include "afd/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace afd;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  int threads = -1;
  long long seed = -1;
  std::vector<std::string> sets;
};

std::string read_text(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string canonical_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.echo()) out += k + " = " + v + "\n";
  return out;
}

RunConfig load_config(const Common& c) {
  RunConfig cfg = parse_config(c.config_path.empty() ? std::string() : read_text(c.config_path));
  apply_env_overrides(cfg);
  for (const std::string& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (c.threads >= 0) cfg.threads = c.threads;
  if (c.seed >= 0) cfg.data_params.seed = static_cast<std::uint64_t>(c.seed);
  validate(cfg);
  return cfg;
}

void apply_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
}

int thread_count() { return omp_get_max_threads(); }

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

json base_manifest(const std::string& kind, const RunConfig& cfg, const ExponentSet& e) {
  json m;
  m["kind"] = kind;
  m["config"] = cfg.echo();
  m["exponents"] = exponent_table(e);
  m["inputs"]["config_blob"] = git_blob_hash(canonical_text(cfg));
  m["threads"] = thread_count();
  m["outputs"] = json::object();
  return m;
}

void add_output(json& m, const std::string& name, const fs::path& p) {
  m["outputs"][name] = {{"path", p.string()}, {"blob", file_blob_hash(p)}};
}

void write_contours(const fs::path& p, const Field& f, const std::vector<double>& levels, json& m) {
  const LevelSet ls = export_levels(f, levels);
  for (double l : ls.skipped) std::fprintf(stderr, "warning: level %g outside the field range, no contour\n", l);
  std::ofstream os(p, std::ios::binary);
  write_contours_csv(os, ls.lines);
  os.close();
  json ext = json::array();
  for (const Polyline& pl : ls.lines) {
    const Extent x = extent(pl);
    ext.push_back({{"level", pl.level}, {"closed", pl.closed}, {"width", x.width()}, {"height", x.height()}});
  }
  m["contours"] = ext;
  m["skipped_levels"] = ls.skipped;
}

Field initial_field(const RunConfig& cfg) {
  Field u0 = init_data(cfg.data, cfg.data_params, cfg.grid());
  if (cfg.data != DataKind::barenblatt) u0.set_time(cfg.t_start);
  return u0;
}

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "field_%04zu.csv", k);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_exponents(const RunConfig& cfg, const fs::path& out, bool as_json) {
  const ExponentSet e = compute_exponents(cfg.model);
  const json t = exponent_table(e);
  if (as_json) {
    std::cout << t.dump(2) << '\n';
  } else {
    std::printf("N = %d  alpha = %.12g  m_c = %.12g  m_bar = %.12g  beta = %.12g\n", e.dimension(), e.alpha(), e.mc(),
                e.mbar(), e.beta());
    std::printf("%4s %14s %14s %14s %14s\n", "i", "m_i", "sigma_i", "a_i", "gamma_i");
    for (int i = 0; i < e.dimension(); ++i) {
      std::printf("%4d %14.10g %14.10g %14.10g %14.10g\n", i + 1, e.m(i), e.sigma(i), e.a(i), e.gamma_stat()[i]);
    }
  }
  if (!out.empty()) {
    fs::create_directories(out);
    write_json(out / "exponents.json", t);
  }
  return 0;
}

int cmd_barriers(const RunConfig& cfg, const fs::path& out) {
  const ExponentSet e = compute_exponents(cfg.model);
  const int n = e.dimension();
  const UpperBarrierSpec us = select_upper_params(e, cfg.upper_slack);
  const LowerBarrierSpec ls = select_lower_params(e, cfg.lower_slack, cfg.lower_a_factor);
  const Profile up = upper_profile(us), lo = lower_profile(ls), cap = capped_profile(us);
  fs::create_directories(out);

  const double h = 0.02;
  const double tol = std::max(10.0 * h * h, 1e-8);
  std::mt19937_64 rng(cfg.data_params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::ofstream rs(out / "barrier_residuals.csv", std::ios::binary);
  rs << "barrier";
  for (int i = 0; i < n; ++i) rs << ",y" << i + 1;
  rs << ",residual,scale,ok\n";
  std::size_t bad_upper = 0, bad_lower = 0;
  std::vector<double> y(n), hs(n), w(n);
  char buf[160];
  auto emit = [&](const char* name, const Residual& r, bool ok) {
    rs << name;
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", y[i]);
      rs << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,", r.value, r.scale);
    rs << buf << (ok ? 1 : 0) << '\n';
  };
  for (std::size_t s = 0; s < cfg.residual_samples; ++s) {
    // A point of Omega: level X in [r, 1e3 r], split randomly between the axes.
    const double X = us.r * std::pow(10.0, 3.0 * unit(rng));
    double tot = 0.0;
    for (int i = 0; i < n; ++i) tot += (w[i] = -std::log(1.0 - unit(rng)));
    for (int i = 0; i < n; ++i) {
      const double len = std::pow(X, 1.0 / us.theta[i]);
      y[i] = (unit(rng) < 0.5 ? -1.0 : 1.0) * std::max(std::pow(w[i] / tot * X, 1.0 / us.theta[i]), 1e-3 * len);
      hs[i] = h * len;
    }
    const Residual r = stationary_residual(up, e, y, hs);
    const bool ok = r.value <= tol * r.scale;
    bad_upper += !ok;
    emit("upper", r, ok);
  }
  for (std::size_t s = 0; s < cfg.residual_samples; ++s) {
    for (int i = 0; i < n; ++i) {
      const double mag = std::pow(10.0, -2.0 + std::log10(5e3) * unit(rng));
      y[i] = (unit(rng) < 0.5 ? -1.0 : 1.0) * mag;
      hs[i] = h * mag;
    }
    const Residual r = stationary_residual(lo, e, y, hs);
    const bool ok = r.value >= -tol * r.scale;
    bad_lower += !ok;
    emit("lower", r, ok);
  }
  rs.close();

  std::ofstream cs(out / "barrier_sections.csv", std::ios::binary);
  cs << "axis,y,upper,capped,lower\n";
  for (int i = 0; i < n; ++i) {
    const double L = cfg.grid().half_width(i);
    for (int k = 0; k <= 200; ++k) {
      std::fill(y.begin(), y.end(), 0.0);
      y[i] = 1e-2 * std::pow(L / 1e-2, k / 200.0);
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", i + 1, y[i], up.eval(y), cap.eval(y), lo.eval(y));
      cs << buf;
    }
  }
  cs.close();

  json m = base_manifest("barriers", cfg, e);
  m["upper"] = {{"delta", us.delta}, {"theta", us.theta}, {"r", us.r}, {"F_star", us.F_star},
                {"mass_outside", upper_mass_outside(us)}};
  m["lower"] = {{"gamma", ls.gamma}, {"vartheta", ls.vartheta}, {"A0", ls.A0}, {"A", ls.A}, {"mass", lower_mass(ls)}};
  m["residual_check"] = {{"samples", cfg.residual_samples}, {"h", h}, {"tol", tol}, {"upper_violations", bad_upper},
                         {"lower_violations", bad_lower}};
  add_output(m, "residuals", out / "barrier_residuals.csv");
  add_output(m, "sections", out / "barrier_sections.csv");
  write_json(out / "manifest.json", m);

  std::printf("upper: delta = %g, theta = (", us.delta);
  for (int i = 0; i < n; ++i) std::printf(i ? ", %.6g" : "%.6g", us.theta[i]);
  std::printf("), r = %.6g, F_star = %.6g\n", us.r, us.F_star);
  std::printf("lower: gamma = %.6g, A0 = %.6g, A = %.6g\n", ls.gamma, ls.A0, ls.A);
  std::printf("residual signs (tol %.1e): %zu/%zu upper violations, %zu/%zu lower violations\n", tol, bad_upper,
              cfg.residual_samples, bad_lower, cfg.residual_samples);
  return 0;
}

// Largest observed |u|_inf t^alpha M^{-2 alpha/N}; the smoothing constant estimate.
double smoothing_constant(const RunDiagnostics& d, const ExponentSet& e) {
  double c = 0.0;
  for (const auto& r : d.records) {
    if (r.t <= 0.0 || r.mass <= 0.0) continue;
    c = std::max(c, r.linf * std::pow(r.t, e.alpha()) * std::pow(r.mass, -2.0 * e.alpha() / e.dimension()));
  }
  return c;
}

json run_evolve(const RunConfig& cfg, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const ExponentSet e = compute_exponents(cfg.model);
  fs::create_directories(out);
  const Field u0 = initial_field(cfg);
  Solver s(u0, cfg.solver, e);
  json m = base_manifest("evolve", cfg, e);
  write_field_csv(out / snapshot_name(0), s.state());
  add_output(m, "snapshot_0", out / snapshot_name(0));
  const double t0 = u0.time();
  for (std::size_t k = 1; k <= cfg.snapshots; ++k) {
    s.advance_to(t0 + (cfg.solver.t_end - t0) * static_cast<double>(k) / static_cast<double>(cfg.snapshots + 1));
    write_field_csv(out / snapshot_name(k), s.state());
    add_output(m, "snapshot_" + std::to_string(k), out / snapshot_name(k));
  }
  s.advance_to(cfg.solver.t_end);
  s.record();
  write_field_csv(out / "field_final.csv", s.state());
  add_output(m, "final", out / "field_final.csv");
  write_diagnostics_csv(out / "diagnostics.csv", s.diagnostics());
  add_output(m, "diagnostics", out / "diagnostics.csv");
  if (e.dimension() == 2 && !cfg.levels.empty()) {
    write_contours(out / "contours.csv", s.state(), cfg.levels, m);
    add_output(m, "contours", out / "contours.csv");
  }
  m["results"] = {{"steps", s.steps()},
                  {"eps", s.eps()},
                  {"final_time", s.time()},
                  {"mass_initial", u0.mass()},
                  {"mass_final", s.state().mass()},
                  {"max_balance_error", s.diagnostics().max_balance_error},
                  {"C1_estimate", smoothing_constant(s.diagnostics(), e)}};
  m["timings"] = {{"wall_seconds", seconds_since(start)}};
  write_json(out / "manifest.json", m);
  return m;
}

json run_relax(const RunConfig& cfg, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const ExponentSet e = compute_exponents(cfg.model);
  fs::create_directories(out);
  Field v0 = init_data(cfg.data, cfg.data_params, cfg.grid());
  v0.set_time(0.0);
  const ProfileEstimate est = relax_to_profile(RescaledState{v0, cfg.t0}, cfg.solver, e, cfg.relax);
  json m = base_manifest("relax", cfg, e);
  write_field_csv(out / "profile.csv", est.F_num);
  add_output(m, "profile", out / "profile.csv");
  if (e.dimension() == 2 && !cfg.levels.empty()) {
    write_contours(out / "contours.csv", est.F_num, cfg.levels, m);
    add_output(m, "contours", out / "contours.csv");
  }
  json tails = json::array();
  for (const TailFit& t : est.tail_slopes) {
    tails.push_back({{"slope", t.slope}, {"stderr", t.stderr_slope}, {"points", t.points}});
  }
  m["results"] = {{"converged", est.converged}, {"tau", est.tau},        {"steps", est.steps},
                  {"residual_l1", est.residual_l1}, {"mass_loss_rate", est.mass_loss_rate}, {"mass", est.mass}, {"peak", est.F_num.max()},
                  {"tail_slopes", tails}};
  m["timings"] = {{"wall_seconds", seconds_since(start)}};
  write_json(out / "manifest.json", m);
  return m;
}

int cmd_evolve(const RunConfig& cfg, const fs::path& out) {
  const json m = run_evolve(cfg, out);
  std::printf("evolve: %s steps to t = %.6g, mass %.6g -> %.6g, wrote %s\n", m["results"]["steps"].dump().c_str(),
              m["results"]["final_time"].get<double>(), m["results"]["mass_initial"].get<double>(),
              m["results"]["mass_final"].get<double>(), (out / "manifest.json").string().c_str());
  return 0;
}

int cmd_relax(const RunConfig& cfg, const fs::path& out) {
  const json m = run_relax(cfg, out);
  const json& r = m["results"];
  std::printf("relax: converged = %s at tau = %.3f, residual %.3e, mass %.6g, peak %.6g\n",
              r["converged"].get<bool>() ? "yes" : "no", r["tau"].get<double>(), r["residual_l1"].get<double>(),
              r["mass"].get<double>(), r["peak"].get<double>());
  for (std::size_t i = 0; i < r["tail_slopes"].size(); ++i) {
    std::printf("  tail slope axis %zu: %.4f (sharp rate %.4f)\n", i + 1, r["tail_slopes"][i]["slope"].get<double>(),
                -2.0 / (1.0 - cfg.model.m[i]));
  }
  return r["converged"].get<bool>() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string name;
  std::string property;
  std::string manifest;
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RunConfig config_from_manifest(const json& m) {
  std::string text;
  for (const auto& [k, v] : m["config"].items()) text += k + " = " + v.get<std::string>() + "\n";
  return parse_config(text);
}

bool wants(const std::string& suite, const std::string& name) { return suite == "all" || suite == name; }

fs::path output_path(const json& m, const fs::path& manifest_path, const std::string& name) {
  const fs::path p = m["outputs"].at(name)["path"].get<std::string>();
  if (fs::exists(p)) return p;
  return manifest_path.parent_path() / p.filename();
}

void verify_determinism(const json& m, const fs::path& mp, const RunConfig& cfg, std::vector<Check>& out) {
  Check c{"determinism", "byte-identical rerun", mp.string(), false, {}};
  if (m["threads"].get<int>() != thread_count()) {
    c.pass = false;
    c.detail = fmt("thread count differs (%d recorded, %d now); rerun with --threads", m["threads"].get<int>(),
                   thread_count());
    out.push_back(c);
    return;
  }
  const fs::path tmp = fs::temp_directory_path() / fmt("afd_rerun_%lld", static_cast<long long>(::getpid()));
  const json r = m["kind"] == "evolve" ? run_evolve(cfg, tmp) : run_relax(cfg, tmp);
  std::size_t diff = 0, total = 0;
  for (const auto& [name, o] : m["outputs"].items()) {
    ++total;
    if (!r["outputs"].contains(name) || r["outputs"][name]["blob"] != o["blob"]) ++diff;
  }
  fs::remove_all(tmp);
  c.pass = diff == 0 && total > 0;
  c.detail = fmt("%zu of %zu outputs differ after rerun", diff, total);
  out.push_back(c);
}

void verify_manifest(const fs::path& mp, const std::string& suite, std::vector<Check>& out) {
  const json m = read_json(mp);
  const RunConfig cfg = config_from_manifest(m);
  const ExponentSet e = compute_exponents(cfg.model);
  const std::vector<double> mv(e.m().begin(), e.m().end());
  const std::string kind = m["kind"];
  const std::string ms = mp.string();

  if (kind == "evolve") {
    const RunDiagnostics d = read_diagnostics_csv(output_path(m, mp, "diagnostics"), mv);
    if (wants(suite, "energy") && cfg.solver.track_energy) {
      const auto rep = energy_check(d, 1e-3);
      Check c{"energy", "per-axis energy inequality", ms, true, {}};
      double worst = 0.0;
      for (const auto& a : rep) {
        c.pass = c.pass && a.ok;
        worst = std::max(worst, a.relative_violation);
      }
      c.detail = fmt("worst relative violation %.3e over %zu axes", worst, rep.size());
      out.push_back(c);
    }
    if (wants(suite, "monotonicity")) {
      const NormMonotonicity r = lp_monotonicity(d, 1e-10);
      out.push_back({"monotonicity", "L^p norms nonincreasing", ms, r.ok,
                     fmt("worst relative increase %.3e", r.worst_relative_increase)});
    }
    const Field fin = read_field_csv(output_path(m, mp, "final"));
    const bool symmetric_data = cfg.data_params.center.empty() &&
                                (cfg.data == DataKind::bump || cfg.data == DataKind::ellipse_bump ||
                                 cfg.data == DataKind::mollified_box || cfg.data == DataKind::barenblatt);
    if (wants(suite, "symmetry") && symmetric_data) {
      const SSNIReport r = ssni_check(fin, 1e-12);
      out.push_back({"symmetry", "SSNI preservation", ms, r.symmetry_error <= 1e-10 && r.monotonicity_violations == 0,
                     fmt("symmetry error %.3e, %zu monotonicity violations", r.symmetry_error,
                         r.monotonicity_violations)});
    }
    if (wants(suite, "positivity")) {
      const Grid& g = fin.grid();
      double mn = std::numeric_limits<double>::infinity();
      g.for_each_node([&](std::size_t k, std::span<const std::size_t> idx) {
        for (int i = 0; i < g.dimension(); ++i) {
          if (idx[i] < 4 || idx[i] + 4 >= g.points(i)) return;
        }
        mn = std::min(mn, fin[k]);
      });
      out.push_back({"positivity", "everywhere positivity", ms, mn > 0.0,
                     fmt("minimum %.3e over nodes at least 4 cells from the faces", mn)});
    }
  } else if (kind == "relax") {
    const Field F = read_field_csv(output_path(m, mp, "profile"));
    const json& r = m["results"];
    if (wants(suite, "tail")) {
      Check c{"tail", "sharp tail decay", ms, r["converged"].get<bool>(), {}};
      std::string det = r["converged"].get<bool>() ? "converged" : "not converged";
      for (int i = 0; i < e.dimension(); ++i) {
        if (e.m(i) >= 1.0) continue;
        const TailFit f = tail_exponent_fit(F, i, cfg.relax.window_lo(i), cfg.relax.window_hi(i));
        const double sharp = -2.0 / (1.0 - e.m(i));
        const bool in = f.slope >= sharp - 0.3 && f.slope <= sharp + 1.0;
        c.pass = c.pass && in;
        det += fmt("; axis %d slope %.3f in [%.2f, %.2f]: %s", i + 1, f.slope, sharp - 0.3, sharp + 1.0,
                   in ? "yes" : "no");
      }
      c.detail = det;
      out.push_back(c);
    }
    if (wants(suite, "marginal")) {
      const MarginalReport mr = marginal_heat_check(F, e);
      if (mr.applicable) {
        out.push_back({"marginal", "heat-kernel marginal", ms, mr.l1_error <= 0.03,
                       fmt("axis %d marginal L1 error %.3e", mr.axis + 1, mr.l1_error)});
      }
    }
    if (wants(suite, "symmetry") && cfg.data_params.center.empty()) {
      const SSNIReport sr = ssni_check(F, 1e-12);
      out.push_back({"symmetry", "SSNI profile", ms, sr.symmetry_error <= 1e-10 && sr.monotonicity_violations == 0,
                     fmt("symmetry error %.3e, %zu monotonicity violations", sr.symmetry_error,
                         sr.monotonicity_violations)});
    }
  } else {
    throw std::runtime_error(ms + ": cannot verify a '" + kind + "' manifest");
  }
  if (wants(suite, "determinism")) verify_determinism(m, mp, cfg, out);
}

int cmd_verify(const std::vector<std::string>& manifests, const std::string& suite, const fs::path& out) {
  static const std::vector<std::string> suites = {"all",      "energy", "monotonicity", "symmetry", "positivity",
                                                  "tail",     "marginal", "determinism"};
  if (std::find(suites.begin(), suites.end(), suite) == suites.end()) {
    throw std::runtime_error("unknown suite '" + suite + "'");
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<Check> checks;
  for (const auto& p : manifests) verify_manifest(p, suite, checks);
  json report;
  report["suite"] = suite;
  report["checks"] = json::array();
  std::size_t failed = 0;
  for (const Check& c : checks) {
    report["checks"].push_back(
        {{"check", c.name}, {"property", c.property}, {"manifest", c.manifest}, {"pass", c.pass}, {"detail", c.detail}});
    std::printf("[%s] %s (%s): %s  [%s]\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.property.c_str(),
                c.detail.c_str(), c.manifest.c_str());
    failed += !c.pass;
  }
  report["passed"] = checks.size() - failed;
  report["failed"] = failed;
  report["timings"] = {{"wall_seconds", seconds_since(start)}};
  fs::create_directories(out);
  write_json(out / "verify_report.json", report);
  std::printf("%zu/%zu checks passed\n", checks.size() - failed, checks.size());
  return failed == 0 && !checks.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_verify_attraction(const RunConfig& cfg, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const ExponentSet e = compute_exponents(cfg.model);
  const Grid g = cfg.grid();
  fs::create_directories(out);
  bool isotropic = true;
  for (int i = 1; i < e.dimension(); ++i) isotropic = isotropic && e.m(i) == e.m(0);

  Profile F;
  double M = cfg.data_params.mass;
  json m = base_manifest("verify-attraction", cfg, e);
  if (isotropic) {
    F = barenblatt_profile(make_barenblatt(e.dimension(), e.m(0), barenblatt_mass_to_C(e.dimension(), e.m(0), M)));
    m["profile"] = "closed form";
  } else {
    DataParams dp;
    dp.mass = M;
    const ProfileEstimate est =
        relax_to_profile(RescaledState{init_data(DataKind::bump, dp, g), 1.0}, cfg.solver, e, cfg.relax);
    write_field_csv(out / "profile.csv", est.F_num);
    add_output(m, "profile", out / "profile.csv");
    F = numeric_profile(est.F_num);
    M = est.mass;
    m["profile"] = {{"kind", "relaxed"}, {"converged", est.converged}, {"tau", est.tau}, {"mass", est.mass}};
  }
  DataParams dp = cfg.data_params;
  dp.mass = M;
  Field v0 = init_data(cfg.data, dp, g);
  v0.set_time(0.0);
  Solver s = rescaled_solver(RescaledState{v0, 1.0}, cfg.solver, e);
  std::vector<Field> snaps;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    s.advance_to(std::log(t + 1.0));
    snaps.push_back(s.state());
  }
  const AttractionReport rep = attraction_check(snaps, 1.0, F, M, e);
  json series = json::array();
  for (const auto& smp : rep.samples) series.push_back({{"t", smp.t}, {"sup_scaled", smp.sup_scaled}, {"l1", smp.l1}});
  const double drop =
      rep.samples.empty() ? 0.0 : 1.0 - rep.samples.back().sup_scaled / rep.samples.front().sup_scaled;
  const bool pass = rep.mass_ok && drop >= 0.5;
  m["results"] = {{"series", series}, {"drop", drop}, {"mass_ok", rep.mass_ok}, {"pass", pass}};
  m["timings"] = {{"wall_seconds", seconds_since(start)}};
  write_json(out / "manifest.json", m);
  for (const auto& smp : rep.samples) {
    std::printf("t = %6.2f  t^alpha |u - U|_inf = %.4e  |u - U|_1 = %.4e\n", smp.t, smp.sup_scaled, smp.l1);
  }
  std::printf("[%s] attraction: decrease %.1f%% from t = 1 to t = 16 (need 50%%)\n", pass ? "PASS" : "FAIL",
              100.0 * drop);
  return pass ? 0 : 1;
}

int cmd_export_levels(const RunConfig& cfg, const fs::path& field, const std::vector<double>& levels,
                      const fs::path& out) {
  const Field f = read_field_csv(field);
  fs::create_directories(out);
  json m;
  write_contours(out / "contours.csv", f, levels.empty() ? cfg.levels : levels, m);
  for (const auto& c : m["contours"]) {
    std::printf("level %.6g: %s polyline, extent %.4f x %.4f\n", c["level"].get<double>(),
                c["closed"].get<bool>() ? "closed" : "open", c["width"].get<double>(), c["height"].get<double>());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic fast diffusion: simulation, self-similar profiles and verification"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  bool help_config = false;
  app.add_option("--config", c.config_path, "INI-style key = value file")->check(CLI::ExistingFile);
  app.add_option("--out", c.out_dir, "output directory");
  app.add_option("--threads", c.threads, "OpenMP threads (0 keeps the default)");
  app.add_option("--seed", c.seed, "seed for randomized initial data");
  app.add_option("--set", c.sets, "override a configuration key (key=value), repeatable");
  app.add_flag("--help-config", help_config, "list configuration keys and defaults");

  bool as_json = false;
  auto* exps = app.add_subcommand("exponents", "print the self-similar exponent table");
  exps->add_flag("--json", as_json, "print JSON instead of text");
  auto* bars = app.add_subcommand("barriers", "barrier parameters, residual-sign sample and cross-sections");
  auto* evo = app.add_subcommand("evolve", "integrate the physical problem");
  auto* rel = app.add_subcommand("relax", "relax to the self-similar profile in rescaled variables");
  std::string suite;
  std::vector<std::string> manifests;
  auto* ver = app.add_subcommand("verify", "check stored run manifests against a named suite");
  ver->add_option("--suite", suite,
                  "all, energy, monotonicity, symmetry, positivity, tail, marginal, determinism (default: config key suite)");
  ver->add_option("manifests", manifests, "manifest.json files")->required()->check(CLI::ExistingFile);
  auto* att = app.add_subcommand("verify-attraction", "decay of t^alpha |u - U_M|_inf towards the profile");
  std::string field;
  std::vector<double> levels;
  auto* lev = app.add_subcommand("export-levels", "marching-squares level lines of a 2-D field CSV");
  lev->add_option("field", field, "field CSV")->required()->check(CLI::ExistingFile);
  lev->add_option("--levels", levels, "contour levels (defaults to the config)")->delimiter(',');
  app.footer(config_help());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (help_config) {
      std::cout << config_help();
      return 0;
    }
    return app.exit(e);
  }

  try {
    const RunConfig cfg = load_config(c);
    apply_threads(cfg);
    const fs::path out = c.out_dir;
    if (*exps) return cmd_exponents(cfg, app.get_option("--out")->count() ? out : fs::path(), as_json);
    if (*bars) return cmd_barriers(cfg, out);
    if (*evo) return cmd_evolve(cfg, out);
    if (*rel) return cmd_relax(cfg, out);
    if (*ver) return cmd_verify(manifests, suite.empty() ? cfg.suite : suite, out);
    if (*att) return cmd_verify_attraction(cfg, out);
    if (*lev) return cmd_export_levels(cfg, field, levels, out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
