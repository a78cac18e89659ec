#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cqnc/analysis.hpp"
#include "cqnc/params.hpp"

namespace cqnc {

enum class AxisScale { linear, log };

inline const char* to_string(AxisScale s) { return s == AxisScale::linear ? "linear" : "log"; }

struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  AxisScale scale = AxisScale::linear;

  // count >= 2 with min < max, or a single point with min == max.
  void validate() const {
    const std::string who = "axis '" + name + "': ";
    if (!std::isfinite(min) || !std::isfinite(max)) throw DomainError(who + "bounds must be finite");
    if (count == 1) {
      if (min != max) throw DomainError(who + "a single-point axis needs min == max");
    } else {
      if (count < 2) throw DomainError(who + "count must be >= 2");
      if (!(min < max)) throw DomainError(who + "min must be < max");
    }
    if (scale == AxisScale::log && !(min > 0.0)) throw DomainError(who + "log axis requires min > 0");
  }

  std::vector<double> values() const {
    validate();
    return scale == AxisScale::log ? log_grid(min, max, count) : linear_grid(min, max, count);
  }
};

// Resolved run configuration: reference defaults, then config-file keys, then
// command-line overrides.
struct RunConfig {
  SystemParams system;
  DriveParams drive;
  bool g_prime_tracks_g = true;   // G' = g unless g_prime is given
  bool gamma_tracks_damping = true;  // Gamma = gamma_m unless Gamma is given
  bool g_from_power = true;       // g derived from the drive power unless g is given

  std::vector<double> gain_ratios{0.0, 0.05, 0.1, 0.15, 0.2};  // G / kappa per curve
  std::vector<double> map_gain_ratios{0.0, 0.1};
  // Spectrum operating point in units of g_SQL(omega_m); unset means the
  // configured coupling g.
  std::optional<double> g_over_gsql;
  ThermalModel thermal = ThermalModel::classical;

  AxisSpec spectrum_axis{"omega/omega_m", 1e-2, 1e2, 2001, AxisScale::log};
  AxisSpec power_axis{"(g/g_SQL)^2", 1e-3, 1e3, 601, AxisScale::log};
  AxisSpec map_coupling_axis{"(g/g_SQL)^2", 1e-2, 1e2, 101, AxisScale::log};
  AxisSpec map_frequency_axis{"omega/omega_m", 0.5, 1.5, 101, AxisScale::linear};
};

inline RunConfig default_config() {
  RunConfig cfg;
  std::tie(cfg.system, cfg.drive) = reference_defaults();
  return cfg;
}

namespace detail {

inline double number(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number()) throw DomainError("config key '" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DomainError("config key '" + key + "' must be finite");
  return v;
}

inline AxisSpec parse_axis(const nlohmann::json& j, AxisSpec axis, const std::string& key) {
  if (!j.is_object()) throw DomainError("config key '" + key + "' must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k == "min") axis.min = number(v, key + ".min");
    else if (k == "max") axis.max = number(v, key + ".max");
    else if (k == "count") {
      if (!v.is_number_integer()) throw DomainError("config key '" + key + ".count' must be an integer");
      axis.count = v.get<int>();
    } else if (k == "scale") {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "log") axis.scale = AxisScale::log;
      else if (s == "linear") axis.scale = AxisScale::linear;
      else throw DomainError("config key '" + key + ".scale' must be \"log\" or \"linear\"");
    } else {
      throw DomainError("unknown config key '" + key + "." + k + "'");
    }
  }
  axis.validate();
  return axis;
}

inline std::vector<double> parse_ratios(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) throw DomainError("config key '" + key + "' must be a non-empty array");
  std::vector<double> out;
  for (const auto& v : j) {
    const double r = number(v, key);
    if (r < 0.0) throw DomainError("config key '" + key + "' entries must be >= 0");
    out.push_back(r);
  }
  return out;
}

}  // namespace detail

// Frequencies (omega_m, gamma_m, kappa, Gamma, g, g_prime, G_opa, Delta,
// omega_L, g0) are read in Hz; phases in rad, power in W, temperature in K,
// mirror_mass in kg.
inline RunConfig load_config(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  RunConfig cfg = default_config();
  SystemParams& p = cfg.system;
  DriveParams& d = cfg.drive;

  std::optional<double> g_hz, g_prime_hz, gamma_hz;
  for (const auto& [k, v] : j.items()) {
    if (k == "omega_m") p.omega_m = to_angular(detail::number(v, k));
    else if (k == "gamma_m") p.gamma_m = to_angular(detail::number(v, k));
    else if (k == "kappa") p.kappa = to_angular(detail::number(v, k));
    else if (k == "Gamma") gamma_hz = detail::number(v, k);
    else if (k == "g") g_hz = detail::number(v, k);
    else if (k == "g_prime") g_prime_hz = detail::number(v, k);
    else if (k == "G_opa") p.G_opa = to_angular(detail::number(v, k));
    else if (k == "theta") p.theta = detail::number(v, k);
    else if (k == "phi") p.phi = detail::number(v, k);
    else if (k == "Delta") p.Delta = to_angular(detail::number(v, k));
    else if (k == "temperature") p.temperature = detail::number(v, k);
    else if (k == "power") d.power = detail::number(v, k);
    else if (k == "omega_L") d.omega_L = to_angular(detail::number(v, k));
    else if (k == "g0") d.g0 = to_angular(detail::number(v, k));
    else if (k == "mirror_mass") d.mirror_mass = detail::number(v, k);
    else if (k == "gain_ratios") cfg.gain_ratios = detail::parse_ratios(v, k);
    else if (k == "map_gain_ratios") cfg.map_gain_ratios = detail::parse_ratios(v, k);
    else if (k == "g_over_gsql") cfg.g_over_gsql = detail::number(v, k);
    else if (k == "thermal_model") {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "classical") cfg.thermal = ThermalModel::classical;
      else if (s == "quantum") cfg.thermal = ThermalModel::quantum;
      else throw DomainError("config key 'thermal_model' must be \"classical\" or \"quantum\"");
    } else if (k == "spectrum") cfg.spectrum_axis = detail::parse_axis(v, cfg.spectrum_axis, k);
    else if (k == "power_sweep") cfg.power_axis = detail::parse_axis(v, cfg.power_axis, k);
    else if (k == "map2d") {
      if (!v.is_object()) throw DomainError("config key 'map2d' must be an object");
      for (const auto& [mk, mv] : v.items()) {
        if (mk == "coupling") cfg.map_coupling_axis = detail::parse_axis(mv, cfg.map_coupling_axis, "map2d.coupling");
        else if (mk == "frequency") cfg.map_frequency_axis = detail::parse_axis(mv, cfg.map_frequency_axis, "map2d.frequency");
        else throw DomainError("unknown config key 'map2d." + mk + "'");
      }
    } else {
      throw DomainError("unknown config key '" + k + "'");
    }
  }

  if (gamma_hz) {
    p.Gamma = to_angular(*gamma_hz);
    cfg.gamma_tracks_damping = false;
  } else {
    p.Gamma = p.gamma_m;
  }
  validate(d);
  if (g_hz) {
    p.g = to_angular(*g_hz);
    cfg.g_from_power = false;
    d.power = coupling_to_power(p.g, d, p.kappa);
  } else {
    p.g = power_to_coupling(d, p.kappa);
  }
  if (g_prime_hz) {
    p.g_prime = to_angular(*g_prime_hz);
    cfg.g_prime_tracks_g = false;
  } else {
    p.g_prime = p.g;
  }
  if (cfg.g_over_gsql && !(*cfg.g_over_gsql > 0.0)) throw DomainError("config key 'g_over_gsql' must be > 0");
  validate(p);
  return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return load_config(j);
}

// Applies the coupling for a sweep point, keeping G' on g when it tracks.
inline SystemParams with_coupling(const RunConfig& cfg, double g) {
  SystemParams p = cfg.system;
  p.g = g;
  if (cfg.g_prime_tracks_g) p.g_prime = g;
  return p;
}

}  // namespace cqnc
