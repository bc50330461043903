#pragma once

// Run configuration: a single JSON document, validated and normalized, plus the
// custom coefficient file format.

#include "acx/acs_core.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace acx {

using ordered_json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  int radii = 32;
  int angles = 0;  // 0 picks 2 * degree + 9
  int degree = 24;
};

struct Tolerances {
  double interior = 1e-5;
  double boundary = 1e-5;
  double psh = 1e-7;
  double bracket = 1e-6;
};

struct ProbeConfig {
  double rho_min = 0.1;
  double rho_max = 0.9;
  int samples = 20;
};

struct StructureConfig {
  Family family = Family::standard;
  double epsilon = 0.1, rho0 = 0.3, delta = 0.2;
  double kappa = 0.2, rho_in = 0.3, rho_out = 0.7;
  std::string coefficient_file;  // as written in the config
  std::filesystem::path resolved_file;
};

struct RunConfig {
  int dimension = 2;
  StructureConfig structure;
  GridConfig grid;
  Tolerances tolerances;
  ProbeConfig probes;
  std::uint64_t seed = 1;
};

inline Family parse_family(const std::string& s) {
  if (s == "standard") return Family::standard;
  if (s == "radial_h") return Family::radial_h;
  if (s == "bump") return Family::bump;
  if (s == "radial_invariant") return Family::radial_invariant;
  if (s == "custom") return Family::custom;
  throw ConfigError("unknown structure family '" + s + "'");
}

namespace detail {

template <class T>
void read_opt(const ordered_json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

inline void require_object(const ordered_json& j, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

}  // namespace detail

inline void validate(const RunConfig& c) {
  if (c.dimension != 2) throw ConfigError("only dimension n = 2 is implemented");
  const auto& s = c.structure;
  if (s.family == Family::radial_h && !(0.0 < s.rho0 && s.rho0 + s.delta < 1.0 && s.delta > 0.0))
    throw ConfigError("radial_h needs 0 < rho0 < rho0 + delta < 1");
  if (s.family == Family::bump && !(0.0 < s.rho_in && s.rho_in < s.rho_out && s.rho_out < 1.0))
    throw ConfigError("bump needs 0 < rho_in < rho_out < 1");
  if (c.grid.degree < 8) throw ConfigError("grid.degree must be at least 8");
  if (c.grid.radii < c.grid.degree / 2 + 1) throw ConfigError("grid.radii must be at least degree / 2 + 1");
  if (c.grid.angles != 0 && c.grid.angles <= 2 * c.grid.degree) throw ConfigError("grid.angles must exceed 2 * degree");
  const auto& t = c.tolerances;
  if (!(t.interior > 0 && t.boundary > 0 && t.psh > 0 && t.bracket > 0)) throw ConfigError("tolerances must be positive");
  const auto& p = c.probes;
  if (!(0.0 < p.rho_min && p.rho_min < p.rho_max && p.rho_max < 1.0)) throw ConfigError("probes need 0 < rho_min < rho_max < 1");
  if (p.samples < 1) throw ConfigError("probes.samples must be positive");
}

inline RunConfig parse_config(const ordered_json& j, const std::filesystem::path& base_dir = {}) {
  detail::require_object(j, "config");
  RunConfig c;
  detail::read_opt(j, "dimension", c.dimension);
  detail::read_opt(j, "seed", c.seed);
  if (j.contains("structure")) {
    const auto& s = j.at("structure");
    detail::require_object(s, "structure");
    std::string fam = "standard";
    detail::read_opt(s, "family", fam);
    c.structure.family = parse_family(fam);
    detail::read_opt(s, "epsilon", c.structure.epsilon);
    detail::read_opt(s, "rho0", c.structure.rho0);
    detail::read_opt(s, "delta", c.structure.delta);
    detail::read_opt(s, "kappa", c.structure.kappa);
    detail::read_opt(s, "rho_in", c.structure.rho_in);
    detail::read_opt(s, "rho_out", c.structure.rho_out);
    detail::read_opt(s, "file", c.structure.coefficient_file);
    if (c.structure.family == Family::custom) {
      if (c.structure.coefficient_file.empty()) throw ConfigError("custom family needs structure.file");
      std::filesystem::path f(c.structure.coefficient_file);
      c.structure.resolved_file = f.is_absolute() ? f : base_dir / f;
    }
  }
  if (j.contains("grid")) {
    detail::require_object(j.at("grid"), "grid");
    detail::read_opt(j.at("grid"), "radii", c.grid.radii);
    detail::read_opt(j.at("grid"), "angles", c.grid.angles);
    detail::read_opt(j.at("grid"), "degree", c.grid.degree);
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    detail::require_object(t, "tolerances");
    detail::read_opt(t, "interior", c.tolerances.interior);
    detail::read_opt(t, "boundary", c.tolerances.boundary);
    detail::read_opt(t, "psh", c.tolerances.psh);
    detail::read_opt(t, "bracket", c.tolerances.bracket);
  }
  if (j.contains("probes")) {
    const auto& p = j.at("probes");
    detail::require_object(p, "probes");
    detail::read_opt(p, "rho_min", c.probes.rho_min);
    detail::read_opt(p, "rho_max", c.probes.rho_max);
    detail::read_opt(p, "samples", c.probes.samples);
  }
  validate(c);
  return c;
}

inline ordered_json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json_file(path), path.parent_path());
}

// Normalized form with every field present, used for hashing and echoing.
inline ordered_json to_json(const RunConfig& c) {
  ordered_json s;
  s["family"] = family_name(c.structure.family);
  switch (c.structure.family) {
    case Family::radial_h:
      s["epsilon"] = c.structure.epsilon;
      s["rho0"] = c.structure.rho0;
      s["delta"] = c.structure.delta;
      break;
    case Family::bump:
      s["kappa"] = c.structure.kappa;
      s["rho_in"] = c.structure.rho_in;
      s["rho_out"] = c.structure.rho_out;
      break;
    case Family::radial_invariant: s["kappa"] = c.structure.kappa; break;
    case Family::custom: s["file"] = c.structure.coefficient_file; break;
    case Family::standard: break;
  }
  ordered_json j;
  j["dimension"] = c.dimension;
  j["structure"] = s;
  j["grid"] = {{"radii", c.grid.radii}, {"angles", c.grid.angles}, {"degree", c.grid.degree}};
  j["tolerances"] = {{"interior", c.tolerances.interior},
                     {"boundary", c.tolerances.boundary},
                     {"psh", c.tolerances.psh},
                     {"bracket", c.tolerances.bracket}};
  j["probes"] = {{"rho_min", c.probes.rho_min}, {"rho_max", c.probes.rho_max}, {"samples", c.probes.samples}};
  j["seed"] = c.seed;
  return j;
}

// Custom coefficient file:
//   {"n": N, "c": [[re, im], ...], "b": [[re, im], ...]}
// with N*N entries each, row-major over (Im z0, Re z0) on the uniform grid
// [-1, 1]^2 of the chart variable z0.
inline std::shared_ptr<const CoefficientGrid> load_coefficient_grid(const std::filesystem::path& path) {
  const ordered_json j = read_json_file(path);
  detail::require_object(j, "coefficient file");
  auto g = std::make_shared<CoefficientGrid>();
  detail::read_opt(j, "n", g->n);
  if (g->n < 4) throw ConfigError("coefficient grid needs n >= 4");
  const auto read = [&](const char* key, std::vector<cd>& out) {
    const std::size_t count = std::size_t(g->n) * std::size_t(g->n);
    if (!j.contains(key)) {
      out.assign(count, cd(0.0));
      return;
    }
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != count) throw ConfigError(std::string("coefficient '") + key + "' needs n*n entries");
    out.clear();
    for (const auto& e : a) {
      if (e.is_number()) {
        out.emplace_back(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError(std::string("coefficient '") + key + "' entries must be numbers or [re, im] pairs");
      }
    }
  };
  read("c", g->c);
  read("b", g->b);
  return g;
}

inline DeformationTensor make_deformation(const RunConfig& c) {
  const auto& s = c.structure;
  switch (s.family) {
    case Family::standard: return DeformationTensor::standard();
    case Family::radial_h: return DeformationTensor::radial_h(s.epsilon, s.rho0, s.delta);
    case Family::bump: return DeformationTensor::bump(s.kappa, s.rho_in, s.rho_out);
    case Family::radial_invariant: return DeformationTensor::radial_invariant(s.kappa);
    case Family::custom: {
      FamilyParams p;
      p.grid = load_coefficient_grid(s.resolved_file);
      return {Family::custom, p};
    }
  }
  throw ConfigError("unknown family");
}

// "1", "-0.5", "2i", "-i", "0.6+0.2i", "1e-3-4.5e-2i".
inline cd parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
  const auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse complex number '" + s + "'");
    }
    if (used != t.size()) throw ConfigError("cannot parse complex number '" + s + "'");
    return v;
  };
  if (s.empty()) throw ConfigError("empty complex number");
  if (s.back() != 'i') return {number(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  const auto imag = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return number(t);
  };
  if (split == std::string::npos) return {0.0, imag(body)};
  return {number(body.substr(0, split)), imag(body.substr(split))};
}

inline CVec2 parse_complex_vector(const std::string& s) {
  std::vector<cd> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) parts.push_back(parse_complex(item));
  if (parts.size() != 2) throw ConfigError("expected two complex components, got '" + s + "'");
  return {parts[0], parts[1]};
}

// ACX_THREADS, clamped to [1, 64]; 1 when unset or malformed.
inline int thread_hint() {
  const char* env = std::getenv("ACX_THREADS");
  if (!env) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1) return 1;
  return int(std::min(n, 64L));
}

}  // namespace acx
