#pragma once

// Run configuration: a flat `key = value` text format with `#` comments, and
// the built-in initial conditions it can name.
//
//   basis      = legendre | hermite
//   v_min      = -6          # velocity interval (required for legendre)
//   v_max      = 6
//   v_unbounded = false      # hermite on R; an interval is then optional
//   n_s = 16                 # velocity modes
//   n_f = 16                 # Fourier modes |k| <= n_f
//   dt = 1e-3
//   t_end = 10
//   stride = 100             # diagnostics every `stride` steps
//   penalty = true           # default: on unless hermite on R
//   ic = landau              # maxwellian | landau | two_stream | single_mode
//   ic.alpha = 0.1           # initial-condition parameters
//   output_dir = out
//   seed = 0

#include "vps/basis.hpp"
#include "vps/errors.hpp"
#include "vps/projection.hpp"
#include "vps/vlasov_rhs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace vps {

struct InitialConditionSpec {
  std::string name = "landau";
  std::map<std::string, double> params;

  double get(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
};

struct RunConfig {
  BasisKind basis_kind = BasisKind::Hermite;
  double v_min = std::numeric_limits<double>::quiet_NaN();
  double v_max = std::numeric_limits<double>::quiet_NaN();
  bool v_unbounded = false;
  int n_s = 16;
  int n_f = 16;
  double dt = 1e-3;
  double t_end = 1.0;
  int stride = 10;
  bool penalty_enabled = false;
  InitialConditionSpec initial_condition;
  std::string output_dir = ".";
  unsigned long long seed = 0;

  Domain domain() const { return Domain{v_min, v_max, v_unbounded}; }
  Resolution resolution() const { return {n_s, n_f}; }
  PenaltyConfig penalty() const { return {penalty_enabled}; }
};

namespace config_detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

inline std::optional<long long> to_integer(const std::string& s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

inline std::optional<bool> to_bool(const std::string& s) {
  if (s == "true" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "off" || s == "no") return false;
  return std::nullopt;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace config_detail

/// Parameter names accepted by each built-in initial condition, with defaults.
inline const std::map<std::string, std::map<std::string, double>>& initial_condition_catalog() {
  static const std::map<std::string, std::map<std::string, double>> catalog = {
      {"maxwellian", {{"density", 1.0}, {"v0", 0.0}, {"vt", 1.0}}},
      {"landau", {{"alpha", 0.1}, {"k", 1.0}}},
      {"two_stream", {{"alpha", 0.01}, {"k", 1.0}, {"v0", 2.4}, {"vt", 1.0}}},
      {"single_mode", {{"n", 0.0}, {"k", 1.0}, {"amplitude", 1.0}}},
  };
  return catalog;
}

/// Range violations of `spec`'s parameters (empty when valid). `n_s` bounds
/// the single_mode index.
inline std::vector<std::string> validate_initial_condition(const InitialConditionSpec& spec, int n_s) {
  std::vector<std::string> out;
  const auto& cat = initial_condition_catalog();
  const auto it = cat.find(spec.name);
  if (it == cat.end()) {
    std::string names;
    for (const auto& [n, _] : cat) names += (names.empty() ? "" : ", ") + n;
    out.push_back("unknown initial condition '" + spec.name + "' (allowed: " + names + ")");
    return out;
  }
  for (const auto& [key, _] : spec.params)
    if (!it->second.count(key)) out.push_back("initial condition '" + spec.name + "' has no parameter '" + key + "'");
  auto p = [&](const char* key) { return spec.get(key, it->second.at(key)); };
  auto is_int = [](double v) { return std::isfinite(v) && v == std::round(v); };
  if (spec.name == "maxwellian") {
    if (!(p("density") > 0.0)) out.push_back("ic.density must be > 0");
    if (!(p("vt") > 0.0)) out.push_back("ic.vt must be > 0");
    if (!std::isfinite(p("v0"))) out.push_back("ic.v0 must be finite");
  } else if (spec.name == "landau" || spec.name == "two_stream") {
    if (!(std::abs(p("alpha")) <= 1.0)) out.push_back("ic.alpha must lie in [-1, 1]");
    if (!is_int(p("k")) || p("k") < 1.0) out.push_back("ic.k must be a positive integer (periodic on [0, 2pi))");
    if (spec.name == "two_stream") {
      if (!(p("vt") > 0.0)) out.push_back("ic.vt must be > 0");
      if (!std::isfinite(p("v0"))) out.push_back("ic.v0 must be finite");
    }
  } else if (spec.name == "single_mode") {
    if (!is_int(p("n")) || p("n") < 0.0 || p("n") >= n_s)
      out.push_back("ic.n must be an integer in [0, n_s) = [0, " + std::to_string(n_s) + ")");
    if (!is_int(p("k")) || p("k") < 0.0) out.push_back("ic.k must be a non-negative integer");
    if (!std::isfinite(p("amplitude"))) out.push_back("ic.amplitude must be finite");
  }
  return out;
}

/// f0(x, v) for a built-in initial condition. single_mode evaluates a basis
/// function and therefore needs `basis`.
inline PhaseSpaceFunction builtin_initial_condition(const InitialConditionSpec& spec, const VelocityBasis& basis) {
  const auto errors = validate_initial_condition(spec, basis.size());
  if (!errors.empty()) throw ConfigParseError(errors);
  const auto& defaults = initial_condition_catalog().at(spec.name);
  auto p = [&](const char* key) { return spec.get(key, defaults.at(key)); };
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  if (spec.name == "maxwellian") {
    const double rho = p("density"), v0 = p("v0"), vt = p("vt");
    return [=](double, double v) {
      const double u = (v - v0) / vt;
      return rho * inv_sqrt_2pi / vt * std::exp(-0.5 * u * u);
    };
  }
  if (spec.name == "landau") {
    const double alpha = p("alpha"), k = p("k");
    return [=](double x, double v) { return (1.0 + alpha * std::cos(k * x)) * inv_sqrt_2pi * std::exp(-0.5 * v * v); };
  }
  if (spec.name == "two_stream") {
    const double alpha = p("alpha"), k = p("k"), v0 = p("v0"), vt = p("vt");
    return [=](double x, double v) {
      const double a = (v - v0) / vt, b = (v + v0) / vt;
      return (1.0 + alpha * std::cos(k * x)) * 0.5 * inv_sqrt_2pi / vt * (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b));
    };
  }
  // single_mode: amplitude * phi_n(v) * (eta_k + eta_{-k}), or phi_n eta_0 for k = 0.
  const int n = static_cast<int>(p("n"));
  const double k = p("k"), amp = p("amplitude");
  return [=, basis = basis](double x, double v) {
    const double phi = basis.evaluate(v, n + 1)[n];
    const double xs = k == 0.0 ? inv_sqrt_2pi : 2.0 * inv_sqrt_2pi * std::cos(k * x);
    return amp * phi * xs;
  };
}

/// Parse and validate a configuration. Every violation is collected and
/// reported together, each tagged with its line number where one applies.
inline RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>") {
  using namespace config_detail;
  RunConfig cfg;
  std::vector<std::string> errors;
  std::map<std::string, int> line_of;
  std::map<std::string, std::string> raw;
  std::vector<std::pair<std::string, int>> ic_params;

  static const std::set<std::string> known = {"basis", "v_min", "v_max",   "v_unbounded", "n_s",        "n_f",
                                              "dt",    "t_end", "stride",  "penalty",     "ic",         "output_dir",
                                              "seed"};
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto where = [&](int l) { return source + ":" + std::to_string(l) + ": "; };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where(lineno) + "expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      errors.push_back(where(lineno) + "missing key before '='");
      continue;
    }
    if (value.empty()) {
      errors.push_back(where(lineno) + "missing value for '" + key + "'");
      continue;
    }
    const bool is_ic_param = key.rfind("ic.", 0) == 0 && key.size() > 3;
    if (!is_ic_param && !known.count(key)) {
      errors.push_back(where(lineno) + "unknown key '" + key + "'");
      continue;
    }
    if (line_of.count(key)) {
      errors.push_back(where(lineno) + "duplicate key '" + key + "' (first set on line " +
                       std::to_string(line_of[key]) + ")");
      continue;
    }
    line_of[key] = lineno;
    raw[key] = value;
    if (is_ic_param) ic_params.emplace_back(key, lineno);
  }

  auto get_double = [&](const std::string& key, double& target) {
    if (!raw.count(key)) return;
    if (const auto v = to_double(raw[key]); v && std::isfinite(*v)) {
      target = *v;
    } else {
      errors.push_back(where(line_of[key]) + key + ": expected a finite real number, got '" + raw[key] + "'");
    }
  };
  auto get_int = [&](const std::string& key, auto& target) {
    if (!raw.count(key)) return;
    if (const auto v = to_integer(raw[key])) {
      target = static_cast<std::remove_reference_t<decltype(target)>>(*v);
    } else {
      errors.push_back(where(line_of[key]) + key + ": expected an integer, got '" + raw[key] + "'");
    }
  };
  auto get_bool = [&](const std::string& key, bool& target) -> bool {
    if (!raw.count(key)) return false;
    if (const auto v = to_bool(raw[key])) {
      target = *v;
      return true;
    }
    errors.push_back(where(line_of[key]) + key + ": expected true or false, got '" + raw[key] + "'");
    return false;
  };

  bool basis_ok = true;
  if (raw.count("basis")) {
    if (const auto kind = basis_kind_from_string(raw["basis"])) {
      cfg.basis_kind = *kind;
    } else {
      errors.push_back(where(line_of["basis"]) + "basis: unknown basis kind '" + raw["basis"] +
                       "' (allowed: hermite, legendre)");
      basis_ok = false;
    }
  } else {
    errors.push_back(source + ": missing required key 'basis' (allowed: hermite, legendre)");
    basis_ok = false;
  }
  get_double("v_min", cfg.v_min);
  get_double("v_max", cfg.v_max);
  const bool unbounded_set = get_bool("v_unbounded", cfg.v_unbounded);
  get_int("n_s", cfg.n_s);
  get_int("n_f", cfg.n_f);
  get_double("dt", cfg.dt);
  get_double("t_end", cfg.t_end);
  get_int("stride", cfg.stride);
  bool penalty = false;
  const bool penalty_set = get_bool("penalty", penalty);
  if (raw.count("ic")) cfg.initial_condition.name = raw["ic"];
  if (raw.count("output_dir")) cfg.output_dir = raw["output_dir"];
  get_int("seed", cfg.seed);
  for (const auto& [key, l] : ic_params) {
    if (const auto v = to_double(raw[key]); v && std::isfinite(*v)) {
      cfg.initial_condition.params[key.substr(3)] = *v;
    } else {
      errors.push_back(where(l) + key + ": expected a finite real number, got '" + raw[key] + "'");
    }
  }

  auto at = [&](const char* key) { return line_of.count(key) ? where(line_of[key]) : source + ": "; };

  // Domain.
  const bool has_min = raw.count("v_min") > 0, has_max = raw.count("v_max") > 0;
  if (has_min != has_max) {
    const std::string present = has_min ? "v_min" : "v_max";
    errors.push_back(where(line_of[present]) + "v_min and v_max must be given together");
  }
  if (basis_ok && cfg.basis_kind == BasisKind::Hermite && !unbounded_set) cfg.v_unbounded = !(has_min && has_max);
  if (basis_ok && cfg.basis_kind == BasisKind::Legendre) {
    if (cfg.v_unbounded)
      errors.push_back(at("v_unbounded") + "legendre basis requires a bounded velocity domain");
    if (!has_min && !has_max) errors.push_back(source + ": legendre basis requires v_min and v_max");
  }
  if (has_min && has_max && std::isfinite(cfg.v_min) && std::isfinite(cfg.v_max) && !(cfg.v_min < cfg.v_max)) {
    errors.push_back(where(line_of["v_max"]) + "v_min must be < v_max (got v_min = " + fmt(cfg.v_min) +
                     ", v_max = " + fmt(cfg.v_max) + ")");
  }
  if (!cfg.v_unbounded && !(has_min && has_max) && basis_ok && cfg.basis_kind == BasisKind::Hermite)
    errors.push_back(at("v_unbounded") + "bounded hermite domain requires v_min and v_max");

  // Resolution and time grid.
  if (cfg.n_s < 1) errors.push_back(at("n_s") + "n_s must be >= 1 (got " + std::to_string(cfg.n_s) + ")");
  if (cfg.n_f < 1) errors.push_back(at("n_f") + "n_f must be >= 1 (got " + std::to_string(cfg.n_f) + ")");
  if (!(cfg.dt > 0.0)) errors.push_back(at("dt") + "dt must be > 0 (got " + fmt(cfg.dt) + ")");
  if (!(cfg.t_end >= 0.0)) errors.push_back(at("t_end") + "t_end must be >= 0 (got " + fmt(cfg.t_end) + ")");
  if (cfg.dt > 0.0 && cfg.t_end >= 0.0) {
    const double steps = std::round(cfg.t_end / cfg.dt);
    if (std::abs(steps * cfg.dt - cfg.t_end) > 1e-12 * std::max(1.0, cfg.t_end))
      errors.push_back(at("t_end") + "t_end = " + fmt(cfg.t_end) + " is not an integer multiple of dt = " +
                       fmt(cfg.dt));
  }
  if (cfg.stride < 1) errors.push_back(at("stride") + "stride must be >= 1 (got " + std::to_string(cfg.stride) + ")");

  // Penalty.
  if (basis_ok) {
    cfg.penalty_enabled = penalty_set ? penalty : PenaltyConfig::default_for(cfg.basis_kind, cfg.domain()).enabled;
    if (cfg.penalty_enabled && !(has_min && has_max))
      errors.push_back(at("penalty") + "penalty requires a velocity interval (set v_min and v_max)");
  }

  // Initial condition.
  for (const auto& e : validate_initial_condition(cfg.initial_condition, std::max(cfg.n_s, 1)))
    errors.push_back((raw.count("ic") ? where(line_of["ic"]) : source + ": ") + e);

  if (!errors.empty()) throw ConfigParseError(errors);
  return cfg;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError({path + ": cannot open config file"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace vps
