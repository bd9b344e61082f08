#include "sruq/pipeline/config.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "sruq/csv.hpp"
#include "sruq/errors.hpp"

namespace sruq::pipeline {

namespace {

struct RawValue {
  std::string text;
  int line = 0;
};

using Section = std::map<std::string, RawValue>;
using Document = std::map<std::string, Section>;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

Document parse_document(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ParseError("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(t.substr(1, t.size() - 2));
      doc[section];
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    doc[section][key] = RawValue{value, lineno};
  }
  return doc;
}

class Reader {
public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  bool has(const std::string& section, const std::string& key) const {
    auto s = doc_.find(section);
    return s != doc_.end() && s->second.count(key) > 0;
  }

  std::string raw(const std::string& section, const std::string& key) const {
    auto s = doc_.find(section);
    if (s == doc_.end() || !s->second.count(key))
      throw ParseError("config: missing [" + section + "] " + key);
    return s->second.at(key).text;
  }

  std::string str(const std::string& section, const std::string& key,
                  const std::string& fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = raw(section, key);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
      v = v.substr(1, v.size() - 2);
    return v;
  }

  double num(const std::string& section, const std::string& key, double fallback) const {
    if (!has(section, key)) return fallback;
    return parse_double(raw(section, key), "config [" + section + "] " + key);
  }

  double num_required(const std::string& section, const std::string& key) const {
    return parse_double(raw(section, key), "config [" + section + "] " + key);
  }

  bool flag(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = raw(section, key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ParseError("config [" + section + "] " + key + ": expected true/false");
  }

  Eigen::VectorXd vec(const std::string& section, const std::string& key) const {
    const std::string v = raw(section, key);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
      throw ParseError("config [" + section + "] " + key + ": expected [a, b, ...]");
    const auto fields = split_csv_line(v.substr(1, v.size() - 2));
    Eigen::VectorXd out(static_cast<Eigen::Index>(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i)
      out(static_cast<Eigen::Index>(i)) =
          parse_double(trim(fields[i]), "config [" + section + "] " + key);
    return out;
  }

  const Document& doc() const { return doc_; }

private:
  const Document& doc_;
};

std::string emit_vector(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += sruq::format_double(v(i));
  }
  return out + "]";
}

}  // namespace

void ScenarioConfig::validate() const {
  if (mean_state.size() != 6)
    throw ContractError("ScenarioConfig: mean state must have 6 components");
  if (std_state.size() != mean_state.size())
    throw ContractError("ScenarioConfig: std vector length must match the mean state");
  if (std_state.minCoeff() < 0.0) throw ContractError("ScenarioConfig: negative STD");
  for (const auto& p : extra_params)
    if (p.std_dev < 0.0)
      throw ContractError("ScenarioConfig: negative STD for extra param " + p.name);
  if (span_hours < 0.0) throw ContractError("ScenarioConfig: negative span");
  if (n_train < 1 || n_validate < 0)
    throw ContractError("ScenarioConfig: sample counts out of range");
  if (integrator_tol < 1e-14 || integrator_tol > 1e-6)
    throw ContractError("ScenarioConfig: integrator tolerance outside [1e-14, 1e-6]");
  if (retrograde_factor != +1 && retrograde_factor != -1)
    throw ContractError("ScenarioConfig: retrograde_factor must be +1 or -1");
  als.validate();
  force_model.validate();
}

ScenarioConfig parse_config(const std::string& text) {
  const Document doc = parse_document(text);
  const Reader r(doc);
  ScenarioConfig cfg;

  const std::string system = r.str("scenario", "coordinate_system", "cartesian");
  if (system == "cartesian")
    cfg.coordinate_system = CoordinateSystem::cartesian;
  else if (system == "equinoctial")
    cfg.coordinate_system = CoordinateSystem::equinoctial;
  else
    throw ParseError("config [scenario] coordinate_system: unknown value '" + system + "'");

  cfg.mean_state = r.vec("scenario", "mean");
  cfg.std_state = r.vec("scenario", "std");
  cfg.span_hours = r.num("scenario", "span_hours", cfg.span_hours);
  cfg.retrograde_factor =
      static_cast<int>(r.num("scenario", "retrograde_factor", cfg.retrograde_factor));

  if (doc.count("extra_params")) {
    for (const auto& [name, value] : doc.at("extra_params")) {
      const std::string v = value.text;
      if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ParseError("config [extra_params] " + name + ": expected [mean, std]");
      const auto fields = split_csv_line(v.substr(1, v.size() - 2));
      if (fields.size() != 2)
        throw ParseError("config [extra_params] " + name + ": expected [mean, std]");
      ExtraParam p;
      p.name = name;
      p.mean = parse_double(trim(fields[0]), "config [extra_params] " + name);
      p.std_dev = parse_double(trim(fields[1]), "config [extra_params] " + name);
      cfg.extra_params.push_back(p);
    }
  }

  cfg.force_model.mu = r.num("force_model", "mu", cfg.force_model.mu);
  cfg.force_model.harmonic_degree = static_cast<int>(
      r.num("force_model", "harmonic_degree", cfg.force_model.harmonic_degree));
  cfg.force_model.drag_enabled = r.flag("force_model", "drag", cfg.force_model.drag_enabled);
  cfg.force_model.drag_coefficient =
      r.num("force_model", "c_d", cfg.force_model.drag_coefficient);
  cfg.force_model.area_to_mass_m2_kg =
      r.num("force_model", "area_to_mass", cfg.force_model.area_to_mass_m2_kg);
  cfg.force_model.earth_rotation_rate_rad_s = r.num(
      "force_model", "earth_rotation_rate", cfg.force_model.earth_rotation_rate_rad_s);
  cfg.atmosphere_file = r.str("force_model", "atmosphere_file", "");
  cfg.stokes_file = r.str("force_model", "stokes_file", "");
  if (!cfg.atmosphere_file.empty())
    cfg.force_model.atmosphere = astro::Atmosphere::from_csv(cfg.atmosphere_file);
  if (!cfg.stokes_file.empty())
    cfg.force_model.stokes = astro::StokesTable::from_csv(cfg.stokes_file);

  cfg.als.epsilon = r.num("als", "epsilon", cfg.als.epsilon);
  cfg.als.delta = r.num("als", "delta", cfg.als.delta);
  cfg.als.max_rank = static_cast<int>(r.num("als", "max_rank", cfg.als.max_rank));
  cfg.als.max_sweeps_per_rank =
      static_cast<int>(r.num("als", "max_sweeps_per_rank", cfg.als.max_sweeps_per_rank));
  cfg.als.ridge_lambda = r.num("als", "ridge_lambda", cfg.als.ridge_lambda);
  cfg.als.degree_count = static_cast<int>(r.num("als", "degree_count", cfg.als.degree_count));
  cfg.als.init_seed =
      static_cast<std::int64_t>(r.num("als", "init_seed", static_cast<double>(cfg.als.init_seed)));

  cfg.n_train = static_cast<Eigen::Index>(r.num("sampling", "n_train", cfg.n_train));
  cfg.n_validate = static_cast<Eigen::Index>(r.num("sampling", "n_validate", cfg.n_validate));
  cfg.n_surrogate_mc =
      static_cast<Eigen::Index>(r.num("sampling", "n_surrogate_mc", cfg.n_surrogate_mc));
  cfg.train_seed =
      static_cast<std::uint64_t>(r.num("sampling", "train_seed", cfg.train_seed));
  cfg.validate_seed =
      static_cast<std::uint64_t>(r.num("sampling", "validate_seed", cfg.validate_seed));
  cfg.mc_seed = static_cast<std::uint64_t>(r.num("sampling", "mc_seed", cfg.mc_seed));

  cfg.sobol_samples =
      static_cast<Eigen::Index>(r.num("sobol", "n_samples", cfg.sobol_samples));
  cfg.sobol_seed_a = static_cast<std::uint64_t>(r.num("sobol", "seed_a", cfg.sobol_seed_a));
  cfg.sobol_seed_b = static_cast<std::uint64_t>(r.num("sobol", "seed_b", cfg.sobol_seed_b));

  cfg.integrator_tol = r.num("integrator", "tolerance", cfg.integrator_tol);

  cfg.histogram_bins = static_cast<int>(r.num("output", "histogram_bins", cfg.histogram_bins));
  cfg.ric_reference_index = static_cast<Eigen::Index>(
      r.num("output", "ric_reference_index", cfg.ric_reference_index));
  cfg.output_directory = r.str("output", "directory", cfg.output_directory);
  cfg.validation_ratio_max =
      r.num("output", "validation_ratio_max", cfg.validation_ratio_max);

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  try {
    return parse_config(read_text_file(path));
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

std::string emit_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "coordinate_system = \""
      << (cfg.coordinate_system == CoordinateSystem::cartesian ? "cartesian" : "equinoctial")
      << "\"\n";
  out << "mean = " << emit_vector(cfg.mean_state) << "\n";
  out << "std = " << emit_vector(cfg.std_state) << "\n";
  out << "span_hours = " << format_double(cfg.span_hours) << "\n";
  out << "retrograde_factor = " << cfg.retrograde_factor << "\n";
  if (!cfg.extra_params.empty()) {
    out << "\n[extra_params]\n";
    for (const auto& p : cfg.extra_params)
      out << p.name << " = [" << format_double(p.mean) << ", " << format_double(p.std_dev)
          << "]\n";
  }
  out << "\n[force_model]\n";
  out << "mu = " << format_double(cfg.force_model.mu) << "\n";
  out << "harmonic_degree = " << cfg.force_model.harmonic_degree << "\n";
  out << "drag = " << (cfg.force_model.drag_enabled ? "true" : "false") << "\n";
  out << "c_d = " << format_double(cfg.force_model.drag_coefficient) << "\n";
  out << "area_to_mass = " << format_double(cfg.force_model.area_to_mass_m2_kg) << "\n";
  out << "earth_rotation_rate = " << format_double(cfg.force_model.earth_rotation_rate_rad_s)
      << "\n";
  if (!cfg.atmosphere_file.empty())
    out << "atmosphere_file = \"" << cfg.atmosphere_file << "\"\n";
  if (!cfg.stokes_file.empty()) out << "stokes_file = \"" << cfg.stokes_file << "\"\n";
  out << "\n[als]\n";
  out << "epsilon = " << format_double(cfg.als.epsilon) << "\n";
  out << "delta = " << format_double(cfg.als.delta) << "\n";
  out << "max_rank = " << cfg.als.max_rank << "\n";
  out << "max_sweeps_per_rank = " << cfg.als.max_sweeps_per_rank << "\n";
  out << "ridge_lambda = " << format_double(cfg.als.ridge_lambda) << "\n";
  out << "degree_count = " << cfg.als.degree_count << "\n";
  out << "init_seed = " << cfg.als.init_seed << "\n";
  out << "\n[sampling]\n";
  out << "n_train = " << cfg.n_train << "\n";
  out << "n_validate = " << cfg.n_validate << "\n";
  out << "n_surrogate_mc = " << cfg.n_surrogate_mc << "\n";
  out << "train_seed = " << cfg.train_seed << "\n";
  out << "validate_seed = " << cfg.validate_seed << "\n";
  out << "mc_seed = " << cfg.mc_seed << "\n";
  out << "\n[sobol]\n";
  out << "n_samples = " << cfg.sobol_samples << "\n";
  out << "seed_a = " << cfg.sobol_seed_a << "\n";
  out << "seed_b = " << cfg.sobol_seed_b << "\n";
  out << "\n[integrator]\n";
  out << "tolerance = " << format_double(cfg.integrator_tol) << "\n";
  out << "\n[output]\n";
  out << "histogram_bins = " << cfg.histogram_bins << "\n";
  out << "ric_reference_index = " << cfg.ric_reference_index << "\n";
  out << "directory = \"" << cfg.output_directory << "\"\n";
  out << "validation_ratio_max = " << format_double(cfg.validation_ratio_max) << "\n";
  return out.str();
}

bool operator==(const ExtraParam& a, const ExtraParam& b) {
  return a.name == b.name && a.mean == b.mean && a.std_dev == b.std_dev;
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  auto stokes_equal = [](const astro::StokesTable& x, const astro::StokesTable& y) {
    for (int n = 0; n <= astro::kMaxHarmonicDegree; ++n)
      for (int m = 0; m <= astro::kMaxHarmonicDegree; ++m)
        if (x.c[n][m] != y.c[n][m] || x.s[n][m] != y.s[n][m] ||
            x.sigma_c[n][m] != y.sigma_c[n][m] || x.sigma_s[n][m] != y.sigma_s[n][m])
          return false;
    return true;
  };
  auto atm_equal = [](const astro::Atmosphere& x, const astro::Atmosphere& y) {
    if (x.bands.size() != y.bands.size()) return false;
    for (std::size_t i = 0; i < x.bands.size(); ++i) {
      const auto& p = x.bands[i];
      const auto& q = y.bands[i];
      if (p.h_min_km != q.h_min_km || p.h_max_km != q.h_max_km ||
          p.rho0_kg_m3 != q.rho0_kg_m3 || p.h0_km != q.h0_km ||
          p.scale_height_km != q.scale_height_km)
        return false;
    }
    return true;
  };
  return a.coordinate_system == b.coordinate_system && a.mean_state == b.mean_state &&
         a.std_state == b.std_state && a.extra_params == b.extra_params &&
         a.span_hours == b.span_hours && a.integrator_tol == b.integrator_tol &&
         a.force_model.mu == b.force_model.mu &&
         a.force_model.harmonic_degree == b.force_model.harmonic_degree &&
         a.force_model.drag_enabled == b.force_model.drag_enabled &&
         a.force_model.drag_coefficient == b.force_model.drag_coefficient &&
         a.force_model.area_to_mass_m2_kg == b.force_model.area_to_mass_m2_kg &&
         a.force_model.earth_rotation_rate_rad_s == b.force_model.earth_rotation_rate_rad_s &&
         stokes_equal(a.force_model.stokes, b.force_model.stokes) &&
         atm_equal(a.force_model.atmosphere, b.force_model.atmosphere) &&
         a.atmosphere_file == b.atmosphere_file && a.stokes_file == b.stokes_file &&
         a.retrograde_factor == b.retrograde_factor && a.als.epsilon == b.als.epsilon &&
         a.als.delta == b.als.delta && a.als.max_rank == b.als.max_rank &&
         a.als.max_sweeps_per_rank == b.als.max_sweeps_per_rank &&
         a.als.ridge_lambda == b.als.ridge_lambda &&
         a.als.degree_count == b.als.degree_count && a.als.init_seed == b.als.init_seed &&
         a.n_train == b.n_train && a.n_validate == b.n_validate &&
         a.n_surrogate_mc == b.n_surrogate_mc && a.train_seed == b.train_seed &&
         a.validate_seed == b.validate_seed && a.mc_seed == b.mc_seed &&
         a.sobol_seed_a == b.sobol_seed_a && a.sobol_seed_b == b.sobol_seed_b &&
         a.sobol_samples == b.sobol_samples && a.histogram_bins == b.histogram_bins &&
         a.ric_reference_index == b.ric_reference_index &&
         a.output_directory == b.output_directory &&
         a.validation_ratio_max == b.validation_ratio_max;
}

}  // namespace sruq::pipeline
