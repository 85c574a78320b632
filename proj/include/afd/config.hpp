#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "afd/exponents.hpp"
#include "afd/field.hpp"
#include "afd/rescaled.hpp"
#include "afd/solver.hpp"

namespace afd {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0);
  /// 1-based line of the offending entry; 0 for semantic or environment errors.
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  ModelParams model;
  std::vector<double> half_width;  // one entry or one per axis
  std::vector<std::size_t> points;
  double t_start = 0.0;
  double t0 = 1.0;
  SolverConfig solver;
  DataKind data = DataKind::bump;
  DataParams data_params;
  RelaxOptions relax;
  std::vector<double> levels;
  double upper_slack = 0.1;
  double lower_slack = 0.1;
  double lower_a_factor = 2.0;
  std::size_t residual_samples = 1000;
  std::size_t snapshots = 0;  // field snapshots written by evolve besides the final one
  int threads = 0;            // 0 leaves the OpenMP default
  std::string suite = "all";

  Grid grid() const;
  /// Every key with its current value, in table order.
  std::map<std::string, std::string> echo() const;
};

/// INI-style key = value lines; '#' and ';' start comments. Unknown keys and
/// malformed values raise ConfigError with the line number.
RunConfig parse_config(const std::string& text);

/// Applies AFD_<KEY> (upper case) variables from the environment.
void apply_env_overrides(RunConfig& cfg);

/// Sets one key; throws ConfigError on unknown keys or bad values.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Cross-field checks (vector lengths against N). Throws ConfigError.
void validate(const RunConfig& cfg);

/// Help text listing every key, its default and a short description.
std::string config_help();

}  // namespace afd
