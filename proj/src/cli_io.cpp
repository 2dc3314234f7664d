#include "tunnelling/cli_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "tunnelling/coupling.hpp"
#include "tunnelling/density.hpp"
#include "tunnelling/stationary.hpp"
#include "tunnelling/tunnelling_time.hpp"

namespace tunnelling::io {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                 message),
      line_(line),
      column_(column) {}

ValidationError::ValidationError(std::string field, const std::string& message)
    : InputError(field + ": " + message), field_(std::move(field)) {}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "particle.mass",         "particle.energy",
    "barrier.U0",            "barrier.L",
    "barrier.segments",      "perturbation.kind",
    "perturbation.V0",       "perturbation.omega",
    "perturbation.t0",       "perturbation.sigma_t",
    "energy_pair.E_k",       "energy_pair.E_j",
    "measurement.x_j",       "measurement.x_k",
    "model.incident_amplitude",
    "density.nt",            "density.nx",
    "density.t_max",         "times.E_meas",
    "times.alpha_norm",      "times.dispersion_table",
    "hartman.L_values",      "oracle.x_min",
    "oracle.x_max",          "oracle.n_points",
    "oracle.dt",             "oracle.steps",
    "oracle.x0",             "oracle.sigma",
    "oracle.k0",             "oracle.snapshot_every",
    "oracle.perturbation_region",
    "output.prefix",
};

struct Entry {
  std::string value;
  std::size_t line;
  std::size_t column;  ///< 1-based column of the value
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) parts.push_back(s.substr(start, i - start));
  }
  return parts;
}

class Document {
 public:
  explicit Document(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = text.find('\n', pos);
      std::string_view line = text.substr(pos, end == std::string_view::npos ? end : end - pos);
      ++line_no;
      parse_line(line, line_no);
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
  }

  [[nodiscard]] bool has(std::string_view key) const { return entries_.count(std::string(key)) > 0; }

  [[nodiscard]] const Entry* find(std::string_view key) const {
    auto it = entries_.find(std::string(key));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::optional<double> number(std::string_view key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    return parse_double(e->value, *e, key);
  }

  std::optional<std::size_t> count(std::string_view key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    std::size_t v = 0;
    const auto* last = e->value.data() + e->value.size();
    auto [ptr, ec] = std::from_chars(e->value.data(), last, v);
    if (ec != std::errc{} || ptr != last) {
      throw ParseError(e->line, e->column,
                       "expected a non-negative integer for '" + std::string(key) + "'");
    }
    return v;
  }

  static double parse_double(std::string_view text, const Entry& e, std::string_view key) {
    double v = 0.0;
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, v);
    if (ec != std::errc{} || ptr != last || text.empty()) {
      throw ParseError(e.line, e.column,
                       "expected a number for '" + std::string(key) + "', got '" +
                           std::string(text) + "'");
    }
    return v;
  }

  std::vector<double> number_list(std::string_view key) const {
    const Entry* e = find(key);
    std::vector<double> out;
    for (auto part : split(e->value, ',')) out.push_back(parse_double(part, *e, key));
    return out;
  }

  /// Rows separated by ';', columns by whitespace.
  std::vector<std::vector<double>> table(std::string_view key, std::size_t columns) const {
    const Entry* e = find(key);
    std::vector<std::vector<double>> rows;
    for (auto row : split(e->value, ';')) {
      auto cells = split_whitespace(row);
      if (cells.size() != columns) {
        throw ParseError(e->line, e->column,
                         "each row of '" + std::string(key) + "' needs " +
                             std::to_string(columns) + " values");
      }
      std::vector<double> values;
      for (auto c : cells) values.push_back(parse_double(c, *e, key));
      rows.push_back(std::move(values));
    }
    return rows;
  }

 private:
  void parse_line(std::string_view raw, std::size_t line_no) {
    std::string_view line = raw.substr(0, raw.find('#'));
    if (trim(line).empty()) return;
    const auto eq = line.find('=');
    const std::size_t indent = line.find_first_not_of(" \t") + 1;
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, indent, "expected 'section.key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value_part = line.substr(eq + 1);
    const std::string_view value = trim(value_part);
    if (key.empty()) throw ParseError(line_no, indent, "missing key before '='");
    if (!kKnownKeys.contains(key)) {
      throw ParseError(line_no, indent, "unknown key '" + key + "'");
    }
    if (value.empty()) throw ParseError(line_no, eq + 2, "missing value for '" + key + "'");
    const std::size_t column = static_cast<std::size_t>(value.data() - raw.data()) + 1;
    if (!entries_.emplace(key, Entry{std::string(value), line_no, column}).second) {
      throw ParseError(line_no, indent, "duplicate key '" + key + "'");
    }
  }

  std::map<std::string, Entry> entries_;
};

// Runs `build`, turning library domain errors into a ValidationError for `field`.
template <typename F>
auto validated(const std::string& field, F&& build) {
  try {
    return build();
  } catch (const ValidationError&) {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ValidationError(field, e.what());
  }
}

double require(const Document& doc, std::string_view key) {
  auto v = doc.number(key);
  if (!v) throw ValidationError(std::string(key), "required field is missing");
  return *v;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  const Document doc(text);
  ScenarioConfig cfg;

  cfg.particle = validated("particle", [&] {
    return Particle(require(doc, "particle.mass"), require(doc, "particle.energy"));
  });

  const bool rectangular = doc.has("barrier.U0") || doc.has("barrier.L");
  if (rectangular && doc.has("barrier.segments")) {
    throw ValidationError("barrier", "give either U0/L or segments, not both");
  }
  if (doc.has("barrier.segments")) {
    auto rows = doc.table("barrier.segments", 3);
    std::vector<BarrierSegment> segments;
    for (const auto& r : rows) segments.push_back({r[0], r[1], r[2]});
    cfg.barrier = validated("barrier.segments", [&] { return BarrierSpec(segments); });
  } else {
    const double U0 = require(doc, "barrier.U0");
    const double L = require(doc, "barrier.L");
    cfg.barrier = validated("barrier.L", [&] { return BarrierSpec::rectangular(U0, L); });
  }
  for (const auto& s : cfg.barrier.segments()) {
    if (!(s.value > cfg.particle.energy())) {
      throw ValidationError("barrier", "potential must exceed the particle energy everywhere");
    }
  }

  const double v0 = doc.number("perturbation.V0").value_or(0.1);
  const Entry* kind = doc.find("perturbation.kind");
  const std::string kind_name = kind ? kind->value : "constant";
  if (kind_name == "constant") {
    cfg.perturbation = validated("perturbation.V0", [&] { return PerturbationSpec::constant(v0); });
  } else if (kind_name == "sinusoidal") {
    cfg.perturbation = validated("perturbation.omega", [&] {
      return PerturbationSpec::sinusoidal(v0, require(doc, "perturbation.omega"));
    });
  } else if (kind_name == "gaussian_pulse") {
    cfg.perturbation = validated("perturbation.sigma_t", [&] {
      return PerturbationSpec::gaussian_pulse(v0, require(doc, "perturbation.t0"),
                                              require(doc, "perturbation.sigma_t"));
    });
  } else {
    throw ParseError(kind->line, kind->column,
                     "perturbation.kind must be constant, sinusoidal or gaussian_pulse");
  }

  const double energy = cfg.particle.energy();
  cfg.energy_pair = validated("energy_pair", [&] {
    return EnergyPair(doc.number("energy_pair.E_k").value_or(energy),
                      doc.number("energy_pair.E_j").value_or(energy));
  });

  const double L = cfg.barrier.length();
  cfg.x_j = doc.number("measurement.x_j").value_or(0.0);
  cfg.x_k = doc.number("measurement.x_k").value_or(L);
  if (!(cfg.x_j >= 0.0 && cfg.x_j < cfg.x_k && cfg.x_k <= L)) {
    throw ValidationError("measurement", "interval must satisfy 0 <= x_j < x_k <= L");
  }

  cfg.incident_amplitude = doc.number("model.incident_amplitude").value_or(1.0);
  if (!(cfg.incident_amplitude > 0.0 && cfg.incident_amplitude <= 1.0)) {
    throw ValidationError("model.incident_amplitude", "must lie in (0, 1]");
  }

  cfg.density.nt = doc.count("density.nt").value_or(cfg.density.nt);
  cfg.density.nx = doc.count("density.nx").value_or(cfg.density.nx);
  cfg.density.t_max = doc.number("density.t_max").value_or(cfg.density.t_max);
  if (cfg.density.nt < 2) throw ValidationError("density.nt", "must be at least 2");
  if (cfg.density.nx < 2) throw ValidationError("density.nx", "must be at least 2");
  if (!(cfg.density.t_max > 0.0)) throw ValidationError("density.t_max", "must be positive");

  cfg.times.measured_energy = doc.number("times.E_meas");
  if (const Entry* e = doc.find("times.alpha_norm")) {
    if (e->value == "amplitude") {
      cfg.times.alpha_normalization = AlphaNormalization::amplitude;
    } else if (e->value == "probability") {
      cfg.times.alpha_normalization = AlphaNormalization::probability;
    } else {
      throw ParseError(e->line, e->column, "times.alpha_norm must be amplitude or probability");
    }
  }
  if (doc.has("times.dispersion_table")) {
    for (const auto& r : doc.table("times.dispersion_table", 2)) {
      cfg.times.dispersion_table.emplace_back(r[0], r[1]);
    }
    validated("times.dispersion_table",
              [&] { return DispersionProfile::user_table(cfg.times.dispersion_table); });
  }

  if (doc.has("hartman.L_values")) {
    cfg.hartman_lengths = doc.number_list("hartman.L_values");
    for (double l : cfg.hartman_lengths) {
      if (!(l > 0.0)) throw ValidationError("hartman.L_values", "lengths must be positive");
    }
  }

  auto& o = cfg.oracle;
  o.x_min = doc.number("oracle.x_min").value_or(o.x_min);
  o.x_max = doc.number("oracle.x_max").value_or(o.x_max);
  o.n_points = doc.count("oracle.n_points").value_or(o.n_points);
  o.dt = doc.number("oracle.dt").value_or(o.dt);
  o.steps = doc.count("oracle.steps").value_or(o.steps);
  o.x0 = doc.number("oracle.x0").value_or(o.x0);
  o.sigma = doc.number("oracle.sigma").value_or(o.sigma);
  o.k0 = doc.number("oracle.k0").value_or(incident_wavevector(cfg.particle));
  o.snapshot_every = doc.count("oracle.snapshot_every").value_or(0);
  if (const Entry* e = doc.find("oracle.perturbation_region")) {
    if (e->value == "barrier_only") {
      o.region = oracle::PerturbationRegion::barrier_only;
    } else if (e->value == "everywhere") {
      o.region = oracle::PerturbationRegion::everywhere;
    } else {
      throw ParseError(e->line, e->column,
                       "oracle.perturbation_region must be barrier_only or everywhere");
    }
  }
  validated("oracle", [&] { return oracle::GridSpec(o.x_min, o.x_max, o.n_points, o.dt, L); });
  if (!(o.sigma > 0.0)) throw ValidationError("oracle.sigma", "must be positive");
  if (!(o.k0 > 0.0)) throw ValidationError("oracle.k0", "must be positive");
  if (!(o.x0 < 0.0)) throw ValidationError("oracle.x0", "packet must start left of the barrier");

  if (const Entry* e = doc.find("output.prefix")) cfg.output_prefix = e->value;
  return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  auto num = [&](std::string_view key, double v) { out << key << " = " << format_number(v) << '\n'; };
  auto cnt = [&](std::string_view key, std::size_t v) { out << key << " = " << v << '\n'; };

  num("particle.mass", cfg.particle.mass());
  num("particle.energy", cfg.particle.energy());
  if (cfg.barrier.is_rectangular()) {
    num("barrier.U0", cfg.barrier.segments().front().value);
    num("barrier.L", cfg.barrier.length());
  } else {
    out << "barrier.segments = ";
    const auto& segs = cfg.barrier.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (i) out << "; ";
      out << format_number(segs[i].x_start) << ' ' << format_number(segs[i].x_end) << ' '
          << format_number(segs[i].value);
    }
    out << '\n';
  }
  const auto& p = cfg.perturbation;
  switch (p.kind()) {
    case PerturbationKind::constant:
      out << "perturbation.kind = constant\n";
      break;
    case PerturbationKind::sinusoidal:
      out << "perturbation.kind = sinusoidal\n";
      num("perturbation.omega", p.angular_frequency());
      break;
    case PerturbationKind::gaussian_pulse:
      out << "perturbation.kind = gaussian_pulse\n";
      num("perturbation.t0", p.center());
      num("perturbation.sigma_t", p.width());
      break;
  }
  num("perturbation.V0", p.amplitude());
  num("energy_pair.E_k", cfg.energy_pair.e_k());
  num("energy_pair.E_j", cfg.energy_pair.e_j());
  num("measurement.x_j", cfg.x_j);
  num("measurement.x_k", cfg.x_k);
  num("model.incident_amplitude", cfg.incident_amplitude);
  cnt("density.nt", cfg.density.nt);
  cnt("density.nx", cfg.density.nx);
  num("density.t_max", cfg.density.t_max);
  if (cfg.times.measured_energy) num("times.E_meas", *cfg.times.measured_energy);
  out << "times.alpha_norm = "
      << (cfg.times.alpha_normalization == AlphaNormalization::amplitude ? "amplitude"
                                                                          : "probability")
      << '\n';
  if (!cfg.times.dispersion_table.empty()) {
    out << "times.dispersion_table = ";
    for (std::size_t i = 0; i < cfg.times.dispersion_table.size(); ++i) {
      if (i) out << "; ";
      out << format_number(cfg.times.dispersion_table[i].first) << ' '
          << format_number(cfg.times.dispersion_table[i].second);
    }
    out << '\n';
  }
  out << "hartman.L_values = ";
  for (std::size_t i = 0; i < cfg.hartman_lengths.size(); ++i) {
    if (i) out << ", ";
    out << format_number(cfg.hartman_lengths[i]);
  }
  out << '\n';
  const auto& o = cfg.oracle;
  num("oracle.x_min", o.x_min);
  num("oracle.x_max", o.x_max);
  cnt("oracle.n_points", o.n_points);
  num("oracle.dt", o.dt);
  cnt("oracle.steps", o.steps);
  num("oracle.x0", o.x0);
  num("oracle.sigma", o.sigma);
  num("oracle.k0", o.k0);
  cnt("oracle.snapshot_every", o.snapshot_every);
  out << "oracle.perturbation_region = "
      << (o.region == oracle::PerturbationRegion::barrier_only ? "barrier_only" : "everywhere")
      << '\n';
  if (!cfg.output_prefix.empty()) out << "output.prefix = " << cfg.output_prefix << '\n';
  return out.str();
}

JsonRecord& JsonRecord::add(std::string key, double value) {
  fields_.emplace_back(std::move(key), std::isfinite(value) ? format_number(value)
                                                            : "\"" + format_number(value) + "\"");
  return *this;
}

JsonRecord& JsonRecord::add(std::string key, std::optional<double> value) {
  if (!value) {
    fields_.emplace_back(std::move(key), "null");
    return *this;
  }
  return add(std::move(key), *value);
}

JsonRecord& JsonRecord::add(std::string key, std::size_t value) {
  fields_.emplace_back(std::move(key), std::to_string(value));
  return *this;
}

JsonRecord& JsonRecord::add(std::string key, std::string_view value) {
  fields_.emplace_back(std::move(key), "\"" + std::string(value) + "\"");
  return *this;
}

std::string JsonRecord::str() const {
  std::string out = "{\n";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    out += "  \"" + fields_[i].first + "\": " + fields_[i].second;
    out += i + 1 < fields_.size() ? ",\n" : "\n";
  }
  out += "}\n";
  return out;
}

std::optional<Command> parse_command(std::string_view name) {
  if (name == "model") return Command::model;
  if (name == "density") return Command::density;
  if (name == "times") return Command::times;
  if (name == "oracle") return Command::oracle;
  if (name == "hartman-scan") return Command::hartman_scan;
  if (name == "compare") return Command::compare;
  return std::nullopt;
}

std::string_view command_name(Command cmd) {
  switch (cmd) {
    case Command::model: return "model";
    case Command::density: return "density";
    case Command::times: return "times";
    case Command::oracle: return "oracle";
    case Command::hartman_scan: return "hartman-scan";
    case Command::compare: return "compare";
  }
  return "";
}

namespace {

class OutputFile {
 public:
  explicit OutputFile(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw InputError("cannot open output file " + path);
  }
  std::ofstream& stream() { return out_; }

 private:
  std::string path_;
  std::ofstream out_;
};

void write_text(const std::string& path, const std::string& text) {
  OutputFile f(path);
  f.stream() << text;
}

void add_complex(JsonRecord& r, const std::string& key, Complex z) {
  r.add(key + "_re", z.real());
  r.add(key + "_im", z.imag());
}

DensitySolution make_solution(const ScenarioConfig& cfg) {
  return DensitySolution(cfg.particle, cfg.barrier, cfg.perturbation, cfg.energy_pair, cfg.x_j,
                         cfg.x_k, Complex{cfg.incident_amplitude, 0.0});
}

void run_model(const ScenarioConfig& cfg, const std::string& prefix) {
  const DensitySolution sol = make_solution(cfg);
  const auto& X = sol.overlap();
  const auto& Y = sol.transition();
  const auto& rp = sol.rabi();
  JsonRecord r;
  r.add("K", incident_wavevector(cfg.particle));
  r.add("chi_abs", sol.chi_abs());
  r.add("segment_count", cfg.barrier.segments().size());
  add_complex(r, "alpha", sol.matching().alpha);
  add_complex(r, "beta", sol.matching().beta);
  r.add("x_j", X.x_j);
  r.add("x_k", X.x_k);
  add_complex(r, "X_kk", X.kk);
  add_complex(r, "X_kj", X.kj);
  add_complex(r, "X_jk", X.jk);
  add_complex(r, "X_jj", X.jj);
  add_complex(r, "Y_kj", Y.kj);
  add_complex(r, "Y_jk", Y.jk);
  r.add("Y_kk", TransitionMatrix::kk);
  r.add("Y_jj", TransitionMatrix::jj);
  r.add("omega0", rp.omega0);
  r.add("omega", rp.omega);
  r.add("omega_kj", rp.omega_kj);
  write_text(prefix + "model.json", r.str());

  if (rp.omega0 != 0.0) {
    const auto profile = coupled_residual_profile(rp, X, Y, 10.0 / std::abs(rp.omega0), 201);
    OutputFile f(prefix + "residuals.csv");
    f.stream() << "t,residual_first,residual_second,relative_first,relative_second\n";
    for (const auto& s : profile) {
      f.stream() << format_number(s.t) << ',' << format_number(s.residual_first) << ','
                 << format_number(s.residual_second) << ',' << format_number(s.relative_first)
                 << ',' << format_number(s.relative_second) << '\n';
    }
  }
}

void run_density(const ScenarioConfig& cfg, const std::string& prefix) {
  const DensitySolution sol = make_solution(cfg);
  const double L = cfg.barrier.length();
  const DensityGrid grid =
      density_grid(sol, 0.0, cfg.density.t_max, cfg.density.nt, 0.0, L, cfg.density.nx);
  {
    OutputFile f(prefix + "density.csv");
    f.stream() << "t,x,rho\n";
    for (std::size_t i = 0; i < grid.t_values.size(); ++i) {
      for (std::size_t j = 0; j < grid.x_values.size(); ++j) {
        f.stream() << format_number(grid.t_values[i]) << ',' << format_number(grid.x_values[j])
                   << ',' << format_number(grid.at(i, j)) << '\n';
      }
    }
  }
  if (sol.is_rectangular()) {
    OutputFile f(prefix + "envelope.csv");
    f.stream() << "x,rho_min,rho_max\n";
    for (double x : grid.x_values) {
      const auto env = envelope(sol, x);
      f.stream() << format_number(x) << ',' << format_number(env.rho_min) << ','
                 << format_number(env.rho_max) << '\n';
    }
  }
  JsonRecord summary;
  summary.add("nt", grid.t_values.size());
  summary.add("nx", grid.x_values.size());
  summary.add("negative_count", grid.negative_count);
  write_text(prefix + "density_summary.json", summary.str());
}

void run_times(const ScenarioConfig& cfg, const std::string& prefix) {
  const DensitySolution sol = make_solution(cfg);
  const double m = cfg.particle.mass();
  std::optional<double> tau_exact;
  std::optional<double> tau_simplified;
  std::optional<double> root;
  std::optional<double> z;
  if (sol.is_rectangular()) {
    tau_exact = stop_time_exact(sol.rabi().omega0, sol.chi_abs(), m);
    tau_simplified = stop_time_simplified(cfg.particle, cfg.barrier.segments().front().value);
    root = flow_stop_root(sol);
    z = m * sol.rabi().omega0 / (4.0 * sol.chi_abs() * sol.chi_abs());
  }
  const double alpha = std::abs(sol.matching().alpha);
  const double alpha_mag =
      cfg.times.alpha_normalization == AlphaNormalization::amplitude ? alpha : alpha * alpha;
  const DispersionProfile disp = cfg.times.dispersion_table.empty()
                                     ? DispersionProfile::barrier_default()
                                     : DispersionProfile::user_table(cfg.times.dispersion_table);
  const double tau_transfer =
      traversal_time_transfer_matrix(alpha_mag, cfg.barrier, cfg.particle.energy(), m, disp);
  std::optional<double> bound;
  if (cfg.times.measured_energy) {
    bound = measured_time_bound(cfg.particle.energy(), *cfg.times.measured_energy);
  }
  JsonRecord r;
  r.add("tau_exact", tau_exact);
  r.add("tau_simplified", tau_simplified);
  r.add("tau_transfer", tau_transfer);
  r.add("tau_measured_bound", bound);
  r.add("arcsine_argument", z);
  r.add("flow_stop_root", root);
  r.add("omega0", sol.rabi().omega0);
  r.add("omega", sol.rabi().omega);
  write_text(prefix + "times.json", r.str());
}

void run_hartman(const ScenarioConfig& cfg, const std::string& prefix) {
  if (!cfg.barrier.is_rectangular()) {
    throw UnsupportedBarrier("hartman-scan varies the length of a rectangular barrier");
  }
  const auto rows = hartman_scan(cfg.particle, cfg.barrier.segments().front().value,
                                 cfg.perturbation.amplitude(), cfg.energy_pair,
                                 cfg.hartman_lengths);
  OutputFile f(prefix + "hartman.csv");
  f.stream() << "L,tau_exact,tau_simplified\n";
  for (const auto& row : rows) {
    f.stream() << format_number(row.L) << ','
               << (row.tau_exact ? format_number(*row.tau_exact) : std::string()) << ','
               << format_number(row.tau_simplified) << '\n';
  }
}

struct OracleSetup {
  oracle::GridSpec grid;
  oracle::WavePacket packet;
};

OracleSetup oracle_setup(const ScenarioConfig& cfg) {
  const auto& o = cfg.oracle;
  return {oracle::GridSpec(o.x_min, o.x_max, o.n_points, o.dt, cfg.barrier.length()),
          oracle::WavePacket{o.x0, o.sigma, o.k0}};
}

std::optional<double> exact_transmission_for(const ScenarioConfig& cfg, double energy) {
  if (!cfg.barrier.is_rectangular()) return std::nullopt;
  const double U0 = cfg.barrier.segments().front().value;
  if (!(U0 > energy)) return std::nullopt;
  return exact_rectangular_transmission(Particle(cfg.particle.mass(), energy), U0,
                                        cfg.barrier.length());
}

void run_oracle(const ScenarioConfig& cfg, const std::string& prefix) {
  const OracleSetup setup = oracle_setup(cfg);
  const auto& grid = setup.grid;
  const auto& packet = setup.packet;
  const double m = cfg.particle.mass();
  oracle::PropagationOptions options;
  options.region = cfg.oracle.region;
  std::optional<OutputFile> snapshots;
  if (cfg.oracle.snapshot_every > 0) {
    snapshots.emplace(prefix + "snapshots.csv");
    snapshots->stream() << "step,x,abs_psi_sq\n";
    options.snapshot_every = cfg.oracle.snapshot_every;
    options.on_snapshot = [&](std::size_t step, std::span<const Complex> psi) {
      for (std::size_t i = 0; i < psi.size(); ++i) {
        snapshots->stream() << step << ',' << format_number(grid.x(i)) << ','
                            << format_number(std::norm(psi[i])) << '\n';
      }
    };
  }
  const auto result = oracle::propagate(oracle::init_packet(grid, packet), grid, cfg.barrier,
                                        cfg.perturbation, m, cfg.oracle.steps, options);
  double drift = 0.0;
  for (double n : result.norm_history) {
    drift = std::max(drift, std::abs(n - result.norm_history.front()));
  }
  const double mean_energy = packet.mean_energy(m);
  JsonRecord r;
  r.add("transmission", result.transmission);
  r.add("reflection", result.reflection);
  r.add("in_barrier", result.in_barrier);
  r.add("norm_initial", result.norm_history.front());
  r.add("norm_final", result.norm_history.back());
  r.add("max_norm_drift", drift);
  r.add("final_time", static_cast<double>(cfg.oracle.steps) * grid.dt());
  r.add("mean_energy", mean_energy);
  r.add("energy_spread", packet.energy_spread(m));
  r.add("exact_transmission", exact_transmission_for(cfg, mean_energy));
  write_text(prefix + "oracle.json", r.str());
}

void run_compare(const ScenarioConfig& cfg, const std::string& prefix) {
  const DensitySolution sol = make_solution(cfg);
  const OracleSetup setup = oracle_setup(cfg);
  const auto& grid = setup.grid;
  const auto& packet = setup.packet;
  const double m = cfg.particle.mass();
  const double L = cfg.barrier.length();
  oracle::PropagationOptions options;
  options.region = cfg.oracle.region;
  options.snapshot_every = cfg.oracle.snapshot_every > 0
                               ? cfg.oracle.snapshot_every
                               : std::max<std::size_t>(1, cfg.oracle.steps / 10);
  OutputFile table(prefix + "compare.csv");
  table.stream() << "t,x,rho_model,abs_psi_sq_oracle\n";
  options.on_snapshot = [&](std::size_t step, std::span<const Complex> psi) {
    const double t = static_cast<double>(step) * grid.dt();
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const double x = grid.x(i);
      if (x < 0.0 || x > L) continue;
      table.stream() << format_number(t) << ',' << format_number(x) << ','
                     << format_number(density_at(sol, t, x)) << ','
                     << format_number(std::norm(psi[i])) << '\n';
    }
  };
  const auto result = oracle::propagate(oracle::init_packet(grid, packet), grid, cfg.barrier,
                                        cfg.perturbation, m, cfg.oracle.steps, options);
  const double transmitted = oracle::transmission_probability(result.psi_final, grid, L);
  const double mean_energy = packet.mean_energy(m);
  const auto exact = exact_transmission_for(cfg, mean_energy);
  JsonRecord r;
  r.add("transmission_oracle", transmitted);
  r.add("transmission_exact", exact);
  r.add("relative_difference",
        exact ? std::optional<double>((transmitted - *exact) / *exact) : std::nullopt);
  r.add("mean_energy", mean_energy);
  r.add("energy_spread", packet.energy_spread(m));
  r.add("omega0", sol.rabi().omega0);
  write_text(prefix + "compare.json", r.str());
}

}  // namespace

int run_command(Command cmd, const ScenarioConfig& cfg, const std::string& prefix,
                std::ostream& log) {
  try {
    switch (cmd) {
      case Command::model: run_model(cfg, prefix); break;
      case Command::density: run_density(cfg, prefix); break;
      case Command::times: run_times(cfg, prefix); break;
      case Command::oracle: run_oracle(cfg, prefix); break;
      case Command::hartman_scan: run_hartman(cfg, prefix); break;
      case Command::compare: run_compare(cfg, prefix); break;
    }
  } catch (const InputError& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace tunnelling::io
