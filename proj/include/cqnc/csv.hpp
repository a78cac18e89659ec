#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cqnc/config.hpp"
#include "cqnc/params.hpp"

namespace cqnc::csv {

// 17 significant digits round-trips every double, so golden files compare
// byte for byte.
inline std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string unstable_cell() { return "unstable"; }
inline std::string na_cell() { return "n/a"; }

inline void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

// FNV-1a over the 17-digit rendering of every field.
inline std::string parameter_hash(const SystemParams& p) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&h](double v) {
    for (char c : number(v)) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    h ^= static_cast<unsigned char>(';');
    h *= 1099511628211ull;
  };
  for (double v : {p.omega_m, p.gamma_m, p.kappa, p.Gamma, p.g, p.g_prime, p.G_opa, p.theta, p.phi,
                   p.Delta, p.temperature})
    feed(v);
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Column label for a curve at G / kappa = ratio.
inline std::string curve_label(std::string_view prefix, double ratio) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*s_G%g", static_cast<int>(prefix.size()), prefix.data(), ratio);
  return buf;
}

inline void header_line(std::ostream& os, std::string_view text) { os << "# " << text << '\n'; }

inline void header_rate(std::ostream& os, std::string_view name, double angular) {
  os << "# " << name << " = " << number(to_hz(angular)) << " Hz = " << number(angular) << " rad/s\n";
}

// Resolved parameters, conventions and version, shared by every CSV output.
inline void write_preamble(std::ostream& os, std::string_view command, const RunConfig& cfg) {
  const SystemParams& p = cfg.system;
  const DriveParams& d = cfg.drive;
  os << "# cqnc-force " << version << " " << command << '\n';
  header_line(os, "PSD normalized to hbar*m*omega_m*gamma_m (dimensionless)");
  os << "# normalization hbar*m*omega_m*gamma_m = " << number(force_psd_normalization(p, d)) << " N^2/Hz\n";
  header_rate(os, "omega_m", p.omega_m);
  header_rate(os, "gamma_m", p.gamma_m);
  header_rate(os, "kappa", p.kappa);
  header_rate(os, "Gamma", p.Gamma);
  header_rate(os, "g (config)", p.g);
  header_rate(os, "g_prime (config)", p.g_prime);
  header_rate(os, "G_opa (config)", p.G_opa);
  header_rate(os, "Delta", p.Delta);
  os << "# theta = " << number(p.theta) << " rad\n";
  os << "# phi = " << number(p.phi) << " rad\n";
  os << "# temperature = " << number(p.temperature) << " K\n";
  os << "# quality_factor = " << number(p.quality_factor()) << '\n';
  os << "# power (config) = " << number(d.power) << " W\n";
  header_rate(os, "omega_L", d.omega_L);
  header_rate(os, "g0", d.g0);
  os << "# mirror_mass = " << number(d.mirror_mass) << " kg\n";
  os << "# hbar = " << number(codata::hbar) << " J s, kB = " << number(codata::k_boltzmann) << " J/K\n";
  os << "# convention: power P = 2*hbar*omega_L*kappa*(g/g0)^2\n";
  os << "# convention: g_SQL = sqrt(kappa)/(2*sqrt(|chi_m|)); spectrum operating point ";
  if (cfg.g_over_gsql)
    os << "g/g_SQL(omega_m) = " << number(*cfg.g_over_gsql) << '\n';
  else
    os << "g (config)\n";
  os << "# convention: g_prime " << (cfg.g_prime_tracks_g ? "tracks g" : "fixed by config") << "; Gamma "
     << (cfg.gamma_tracks_damping ? "= gamma_m" : "fixed by config") << '\n';
  os << "# convention: thermal model " << to_string(cfg.thermal)
     << (cfg.thermal == ThermalModel::classical ? " (kB*T/(hbar*omega_m))" : " (n_th + 1/2)") << '\n';
  os << "# convention: S_cqnc_approx is the omega << kappa cancellation-regime form; S_cqnc_exact is the "
        "state-space oracle\n";
  if (!p.resonant())
    os << "# note: Delta/theta/phi nonzero; closed-form columns are n/a and oracle columns are an "
          "unvalidated extension\n";
}

}  // namespace cqnc::csv
