#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tunnelling/core_model.hpp"
#include "tunnelling/errors.hpp"
#include "tunnelling/tdse_oracle.hpp"

namespace tunnelling::io {

/// Malformed configuration text.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed configuration whose values break a model invariant.
class ValidationError : public InputError {
 public:
  ValidationError(std::string field, const std::string& message);
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class AlphaNormalization { amplitude, probability };

struct DensityOptions {
  std::size_t nt = 101;
  std::size_t nx = 101;
  double t_max = 10.0;

  friend bool operator==(const DensityOptions&, const DensityOptions&) = default;
};

struct TimesOptions {
  std::optional<double> measured_energy;
  AlphaNormalization alpha_normalization = AlphaNormalization::amplitude;
  /// Empty selects the barrier-default dispersion.
  std::vector<std::pair<double, double>> dispersion_table;

  friend bool operator==(const TimesOptions&, const TimesOptions&) = default;
};

struct OracleOptions {
  double x_min = -400.0;
  double x_max = 450.0;
  std::size_t n_points = 17001;
  double dt = 0.05;
  std::size_t steps = 7000;
  double x0 = -150.0;
  double sigma = 20.0;
  double k0 = 0.0;  ///< resolved to sqrt(2 m E) when absent
  std::size_t snapshot_every = 0;
  oracle::PerturbationRegion region = oracle::PerturbationRegion::barrier_only;

  friend bool operator==(const OracleOptions&, const OracleOptions&) = default;
};

struct ScenarioConfig {
  Particle particle{1.0, 0.5};
  BarrierSpec barrier = BarrierSpec::rectangular(1.0, 1.0);
  PerturbationSpec perturbation = PerturbationSpec::constant(0.1);
  EnergyPair energy_pair{0.5, 0.5};
  double x_j = 0.0;
  double x_k = 1.0;
  double incident_amplitude = 1.0;
  DensityOptions density;
  TimesOptions times;
  std::vector<double> hartman_lengths{0.5, 1.0, 2.0, 4.0, 8.0};
  OracleOptions oracle;
  std::string output_prefix;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses `section.key = value` lines; `#` starts a comment. Unknown keys
/// and duplicates are ParseErrors; invariant violations are
/// ValidationErrors naming the offending field.
ScenarioConfig parse_config(std::string_view text);

/// Inverse of parse_config: every field written explicitly.
std::string serialize_config(const ScenarioConfig& cfg);

/// Scientific notation with 17 significant digits.
std::string format_number(double value);

enum class Command { model, density, times, oracle, hartman_scan, compare };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command cmd);

/// Runs one command and writes its output files under `prefix`. Returns
/// 0 on success, 1 for invalid input and 2 for numerical failures; the
/// error message goes to `log`.
int run_command(Command cmd, const ScenarioConfig& cfg, const std::string& prefix,
                std::ostream& log);

/// Flat JSON object with keys in insertion order and numbers formatted by
/// format_number.
class JsonRecord {
 public:
  JsonRecord& add(std::string key, double value);
  JsonRecord& add(std::string key, std::optional<double> value);
  JsonRecord& add(std::string key, std::size_t value);
  JsonRecord& add(std::string key, std::string_view value);
  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

}  // namespace tunnelling::io
