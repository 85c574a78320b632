#include "afd/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>

namespace afd {

ConfigError::ConfigError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "inf") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
  return out;
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

const char* data_name(DataKind k) {
  switch (k) {
    case DataKind::bump: return "bump";
    case DataKind::ellipse_bump: return "ellipse_bump";
    case DataKind::mollified_box: return "mollified_box";
    case DataKind::barenblatt: return "barenblatt";
    case DataKind::random_bumps: return "random_bumps";
  }
  return "bump";
}

struct Entry {
  const char* key;
  const char* doc;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = {
      {"N", "space dimension (2 or 3)",
       [](RunConfig& c, const std::string& v) { c.model.dimension = static_cast<int>(to_uint("N", v)); },
       [](const RunConfig& c) { return std::to_string(c.model.dimension); }},
      {"m", "diffusion exponents, one per axis, comma separated",
       [](RunConfig& c, const std::string& v) { c.model.m = to_doubles("m", v); },
       [](const RunConfig& c) { return join(c.model.m); }},
      {"allow_linear", "permit m_i = 1 on some axes",
       [](RunConfig& c, const std::string& v) { c.model.allow_linear = to_bool("allow_linear", v); },
       [](const RunConfig& c) { return std::string(c.model.allow_linear ? "true" : "false"); }},
      {"half_width", "box half-width, one value or one per axis",
       [](RunConfig& c, const std::string& v) { c.half_width = to_doubles("half_width", v); },
       [](const RunConfig& c) { return join(c.half_width); }},
      {"points", "grid nodes per axis, one value or one per axis",
       [](RunConfig& c, const std::string& v) {
         c.points.clear();
         for (const auto& s : split_list(v)) c.points.push_back(to_uint("points", s));
       },
       [](const RunConfig& c) { return join(c.points); }},
      {"t_start", "initial time",
       [](RunConfig& c, const std::string& v) { c.t_start = to_double("t_start", v); },
       [](const RunConfig& c) { return fmt(c.t_start); }},
      {"t_end", "final time (physical runs)",
       [](RunConfig& c, const std::string& v) { c.solver.t_end = to_double("t_end", v); },
       [](const RunConfig& c) { return fmt(c.solver.t_end); }},
      {"t0", "time shift of the rescaled variables",
       [](RunConfig& c, const std::string& v) { c.t0 = to_double("t0", v); },
       [](const RunConfig& c) { return fmt(c.t0); }},
      {"eps", "regularization floor; negative selects eps_rel * max(u0)",
       [](RunConfig& c, const std::string& v) { c.solver.eps = to_double("eps", v); },
       [](const RunConfig& c) { return fmt(c.solver.eps); }},
      {"eps_rel", "relative regularization floor",
       [](RunConfig& c, const std::string& v) { c.solver.eps_rel = to_double("eps_rel", v); },
       [](const RunConfig& c) { return fmt(c.solver.eps_rel); }},
      {"dt_policy", "cfl or fixed",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "cfl") {
           c.solver.dt_policy = DtPolicy::cfl;
         } else if (t == "fixed") {
           c.solver.dt_policy = DtPolicy::fixed;
         } else {
           throw ConfigError("dt_policy: expected cfl or fixed, got '" + v + "'");
         }
       },
       [](const RunConfig& c) { return std::string(c.solver.dt_policy == DtPolicy::cfl ? "cfl" : "fixed"); }},
      {"drift_scheme", "upwind or hybrid (rescaled runs)",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "upwind") {
           c.solver.drift_scheme = DriftScheme::upwind;
         } else if (t == "hybrid") {
           c.solver.drift_scheme = DriftScheme::hybrid;
         } else {
           throw ConfigError("drift_scheme: expected upwind or hybrid, got '" + v + "'");
         }
       },
       [](const RunConfig& c) {
         return std::string(c.solver.drift_scheme == DriftScheme::upwind ? "upwind" : "hybrid");
       }},
      {"safety", "fraction of the monotone time step",
       [](RunConfig& c, const std::string& v) { c.solver.safety = to_double("safety", v); },
       [](const RunConfig& c) { return fmt(c.solver.safety); }},
      {"dt_fixed", "time step for dt_policy = fixed",
       [](RunConfig& c, const std::string& v) { c.solver.dt_fixed = to_double("dt_fixed", v); },
       [](const RunConfig& c) { return fmt(c.solver.dt_fixed); }},
      {"boundary", "Dirichlet value on the box faces",
       [](RunConfig& c, const std::string& v) { c.solver.boundary = to_double("boundary", v); },
       [](const RunConfig& c) { return fmt(c.solver.boundary); }},
      {"record_every", "steps between diagnostics records (0: endpoints only)",
       [](RunConfig& c, const std::string& v) { c.solver.record_every = to_uint("record_every", v); },
       [](const RunConfig& c) { return std::to_string(c.solver.record_every); }},
      {"norms_p", "finite p values tracked in the diagnostics",
       [](RunConfig& c, const std::string& v) { c.solver.norms_p = to_doubles("norms_p", v); },
       [](const RunConfig& c) { return join(c.solver.norms_p); }},
      {"track_energy", "accumulate the per-axis gradient energy",
       [](RunConfig& c, const std::string& v) { c.solver.track_energy = to_bool("track_energy", v); },
       [](const RunConfig& c) { return std::string(c.solver.track_energy ? "true" : "false"); }},
      {"max_steps", "step budget",
       [](RunConfig& c, const std::string& v) { c.solver.max_steps = to_uint("max_steps", v); },
       [](const RunConfig& c) { return std::to_string(c.solver.max_steps); }},
      {"data", "initial data: bump, ellipse_bump, mollified_box, barenblatt, random_bumps",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         for (DataKind k : {DataKind::bump, DataKind::ellipse_bump, DataKind::mollified_box, DataKind::barenblatt,
                            DataKind::random_bumps}) {
           if (t == data_name(k)) {
             c.data = k;
             return;
           }
         }
         throw ConfigError("data: unknown generator '" + v + "'");
       },
       [](const RunConfig& c) { return std::string(data_name(c.data)); }},
      {"mass", "initial mass",
       [](RunConfig& c, const std::string& v) { c.data_params.mass = to_double("mass", v); },
       [](const RunConfig& c) { return fmt(c.data_params.mass); }},
      {"radius", "bump radius",
       [](RunConfig& c, const std::string& v) { c.data_params.radius = to_double("radius", v); },
       [](const RunConfig& c) { return fmt(c.data_params.radius); }},
      {"semi_axes", "ellipse semi-axes or box half-sides",
       [](RunConfig& c, const std::string& v) { c.data_params.semi_axes = to_doubles("semi_axes", v); },
       [](const RunConfig& c) { return join(c.data_params.semi_axes); }},
      {"center", "data centre offset",
       [](RunConfig& c, const std::string& v) { c.data_params.center = to_doubles("center", v); },
       [](const RunConfig& c) { return join(c.data_params.center); }},
      {"mollify", "transition half-width of the mollified box",
       [](RunConfig& c, const std::string& v) { c.data_params.mollify = to_double("mollify", v); },
       [](const RunConfig& c) { return fmt(c.data_params.mollify); }},
      {"barenblatt_time", "time of the Barenblatt snapshot",
       [](RunConfig& c, const std::string& v) { c.data_params.barenblatt_time = to_double("barenblatt_time", v); },
       [](const RunConfig& c) { return fmt(c.data_params.barenblatt_time); }},
      {"random_count", "number of bumps for random_bumps",
       [](RunConfig& c, const std::string& v) {
         c.data_params.random_count = static_cast<int>(to_uint("random_count", v));
       },
       [](const RunConfig& c) { return std::to_string(c.data_params.random_count); }},
      {"seed", "seed of the randomized generators",
       [](RunConfig& c, const std::string& v) { c.data_params.seed = to_uint("seed", v); },
       [](const RunConfig& c) { return std::to_string(c.data_params.seed); }},
      {"tau_max", "relaxation budget in rescaled time",
       [](RunConfig& c, const std::string& v) { c.relax.tau_max = to_double("tau_max", v); },
       [](const RunConfig& c) { return fmt(c.relax.tau_max); }},
      {"tol_rel", "relaxation stop: L1 increment rate relative to mass",
       [](RunConfig& c, const std::string& v) { c.relax.tol_rel = to_double("tol_rel", v); },
       [](const RunConfig& c) { return fmt(c.relax.tol_rel); }},
      {"check_every", "rescaled time between convergence checks",
       [](RunConfig& c, const std::string& v) { c.relax.check_every = to_double("check_every", v); },
       [](const RunConfig& c) { return fmt(c.relax.check_every); }},
      {"tail_lo", "tail fit window start (fraction of the half-width; one value or one per axis)",
       [](RunConfig& c, const std::string& v) { c.relax.tail_lo = to_doubles("tail_lo", v); },
       [](const RunConfig& c) { return join(c.relax.tail_lo); }},
      {"tail_hi", "tail fit window end (fraction of the half-width; one value or one per axis)",
       [](RunConfig& c, const std::string& v) { c.relax.tail_hi = to_doubles("tail_hi", v); },
       [](const RunConfig& c) { return join(c.relax.tail_hi); }},
      {"levels", "contour levels for export-levels",
       [](RunConfig& c, const std::string& v) { c.levels = to_doubles("levels", v); },
       [](const RunConfig& c) { return join(c.levels); }},
      {"upper_slack", "position of theta inside the upper-barrier window",
       [](RunConfig& c, const std::string& v) { c.upper_slack = to_double("upper_slack", v); },
       [](const RunConfig& c) { return fmt(c.upper_slack); }},
      {"lower_slack", "relative margin of gamma above the lower-barrier threshold",
       [](RunConfig& c, const std::string& v) { c.lower_slack = to_double("lower_slack", v); },
       [](const RunConfig& c) { return fmt(c.lower_slack); }},
      {"lower_a_factor", "A as a multiple of A0",
       [](RunConfig& c, const std::string& v) { c.lower_a_factor = to_double("lower_a_factor", v); },
       [](const RunConfig& c) { return fmt(c.lower_a_factor); }},
      {"residual_samples", "sample points of the barrier sign report",
       [](RunConfig& c, const std::string& v) { c.residual_samples = to_uint("residual_samples", v); },
       [](const RunConfig& c) { return std::to_string(c.residual_samples); }},
      {"snapshots", "intermediate field snapshots written by evolve",
       [](RunConfig& c, const std::string& v) { c.snapshots = to_uint("snapshots", v); },
       [](const RunConfig& c) { return std::to_string(c.snapshots); }},
      {"threads", "OpenMP threads (0: runtime default)",
       [](RunConfig& c, const std::string& v) { c.threads = static_cast<int>(to_uint("threads", v)); },
       [](const RunConfig& c) { return std::to_string(c.threads); }},
      {"suite", "verify suite: all, energy, monotonicity, symmetry, positivity, tail, marginal, determinism",
       [](RunConfig& c, const std::string& v) { c.suite = trim(v); },
       [](const RunConfig& c) { return c.suite; }},
  };
  return t;
}

RunConfig defaults() {
  RunConfig c;
  c.model.dimension = 2;
  c.model.m = {0.6, 0.8};
  c.half_width = {20.0};
  c.points = {129};
  c.data_params.radius = 1.0;
  c.levels = {1e-3, 1e-2, 1e-1};
  return c;
}

}  // namespace

Grid RunConfig::grid() const {
  const int n = model.dimension;
  std::vector<double> hw(n);
  std::vector<std::size_t> pts(n);
  for (int i = 0; i < n; ++i) {
    hw[i] = half_width.size() == 1 ? half_width[0] : half_width.at(i);
    pts[i] = points.size() == 1 ? points[0] : points.at(i);
  }
  return Grid(std::move(hw), std::move(pts));
}

std::map<std::string, std::string> RunConfig::echo() const {
  std::map<std::string, std::string> out;
  for (const auto& e : table()) out[e.key] = e.get(*this);
  return out;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& e : table()) {
    if (key == e.key) {
      e.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg = defaults();
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (auto c = s.find_first_of("#;"); c != std::string::npos) s.erase(c);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value, got '" + trim(raw) + "'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line);
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& err) {
      throw ConfigError(err.what(), line);
    }
  }
  validate(cfg);
  return cfg;
}

void apply_env_overrides(RunConfig& cfg) {
  for (const auto& e : table()) {
    std::string name = "AFD_";
    for (const char* p = e.key; *p; ++p) name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    if (const char* v = std::getenv(name.c_str())) {
      try {
        e.set(cfg, v);
      } catch (const ConfigError& err) {
        throw ConfigError(name + ": " + err.what());
      }
    }
  }
  validate(cfg);
}

void validate(const RunConfig& cfg) {
  const int n = cfg.model.dimension;
  if (n < 1 || n > Grid::kMaxDim) throw ConfigError("N must be 1, 2 or 3");
  auto check_len = [&](const char* key, std::size_t len, bool allow_one, bool allow_empty) {
    if (allow_empty && len == 0) return;
    if (allow_one && len == 1) return;
    if (len != static_cast<std::size_t>(n)) {
      throw ConfigError(std::string(key) + ": dimension mismatch, " + std::to_string(len) + " values for N = " +
                        std::to_string(n));
    }
  };
  check_len("m", cfg.model.m.size(), false, false);
  check_len("half_width", cfg.half_width.size(), true, false);
  check_len("points", cfg.points.size(), true, false);
  check_len("tail_lo", cfg.relax.tail_lo.size(), true, false);
  check_len("tail_hi", cfg.relax.tail_hi.size(), true, false);
  check_len("semi_axes", cfg.data_params.semi_axes.size(), false, true);
  check_len("center", cfg.data_params.center.size(), false, true);
}

std::string config_help() {
  const RunConfig d = defaults();
  std::ostringstream os;
  os << "Configuration keys (key = value; environment override AFD_<KEY>):\n";
  for (const auto& e : table()) {
    std::string def = e.get(d);
    os << "  " << e.key << " = " << (def.empty() ? "(empty)" : def) << "\n      " << e.doc << "\n";
  }
  return os.str();
}

}  // namespace afd
