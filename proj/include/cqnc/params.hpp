#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "cqnc/constants.hpp"

namespace cqnc {

// Rates and couplings of the hybrid cavity, all angular (rad/s).
struct SystemParams {
  double omega_m = 0.0;      // mechanical resonance
  double gamma_m = 0.0;      // mechanical damping
  double kappa = 0.0;        // cavity decay
  double Gamma = 0.0;        // collective atomic dephasing
  double g = 0.0;            // linearized optomechanical coupling
  double g_prime = 0.0;      // atom-field coupling G'
  double G_opa = 0.0;        // OPA nonlinear gain G
  double theta = 0.0;        // OPA pump phase (rad)
  double phi = 0.0;          // intracavity field phase (rad)
  double Delta = 0.0;        // cavity detuning
  double temperature = 0.0;  // bath temperature (K)

  double quality_factor() const noexcept { return omega_m / gamma_m; }

  // Delta = theta = phi = 0, the regime of all closed-form spectra.
  bool resonant() const noexcept { return theta == 0.0 && phi == 0.0 && Delta == 0.0; }

  bool operator==(const SystemParams&) const = default;
};

struct DriveParams {
  double power = 0.0;        // input laser power (W)
  double omega_L = 0.0;      // laser angular frequency (rad/s)
  double g0 = 0.0;           // single-photon coupling (rad/s)
  double mirror_mass = 0.0;  // kg, metadata for the force normalization only

  static constexpr double hbar = codata::hbar;
  static constexpr double kB = codata::k_boltzmann;

  bool operator==(const DriveParams&) const = default;
};

inline void validate(const SystemParams& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(finite(p.omega_m) && finite(p.gamma_m) && finite(p.kappa) && finite(p.Gamma) &&
        finite(p.g) && finite(p.g_prime) && finite(p.G_opa) && finite(p.theta) &&
        finite(p.phi) && finite(p.Delta) && finite(p.temperature)))
    throw DomainError("SystemParams: non-finite field");
  if (!(p.omega_m > 0.0)) throw DomainError("SystemParams: omega_m must be > 0");
  if (!(p.gamma_m > 0.0)) throw DomainError("SystemParams: gamma_m must be > 0");
  if (!(p.kappa > 0.0)) throw DomainError("SystemParams: kappa must be > 0");
  if (p.Gamma < 0.0) throw DomainError("SystemParams: Gamma must be >= 0");
  if (p.G_opa < 0.0) throw DomainError("SystemParams: G_opa must be >= 0");
  if (p.temperature < 0.0) throw DomainError("SystemParams: temperature must be >= 0");
  if (!(p.quality_factor() > 1.0)) throw DomainError("SystemParams: quality factor must exceed 1");
}

inline void validate(const DriveParams& d) {
  if (!(d.power >= 0.0) || !std::isfinite(d.power)) throw DomainError("DriveParams: power must be >= 0");
  if (!(d.omega_L > 0.0)) throw DomainError("DriveParams: omega_L must be > 0");
  if (!(d.g0 > 0.0)) throw DomainError("DriveParams: g0 must be > 0");
}

// P = 2 hbar omega_L kappa (g/g0)^2
inline double power_to_coupling(const DriveParams& drive, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("power_to_coupling: kappa must be > 0");
  if (!(drive.omega_L > 0.0)) throw DomainError("power_to_coupling: omega_L must be > 0");
  if (!(drive.g0 > 0.0)) throw DomainError("power_to_coupling: g0 must be > 0");
  if (!(drive.power >= 0.0)) throw DomainError("power_to_coupling: power must be >= 0");
  return drive.g0 * std::sqrt(drive.power / (2.0 * DriveParams::hbar * drive.omega_L * kappa));
}

inline double coupling_to_power(double g, const DriveParams& drive, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("coupling_to_power: kappa must be > 0");
  if (!(drive.omega_L > 0.0)) throw DomainError("coupling_to_power: omega_L must be > 0");
  if (!(drive.g0 > 0.0)) throw DomainError("coupling_to_power: g0 must be > 0");
  const double ratio = g / drive.g0;
  return 2.0 * DriveParams::hbar * drive.omega_L * kappa * ratio * ratio;
}

// Reference hybrid-system parameters, with the coherent-cancellation
// defaults Gamma = gamma_m (matched atomic and mechanical susceptibilities),
// g' = g, Delta = theta = phi = 0, T = 0. The coupling g is the one produced
// by the 100 mW reference drive.
inline std::pair<SystemParams, DriveParams> reference_defaults() {
  DriveParams drive;
  drive.power = 0.1;
  drive.omega_L = to_angular(384e12);
  drive.g0 = to_angular(300.0);
  drive.mirror_mass = 50e-12;

  SystemParams p;
  p.omega_m = to_angular(300e3);
  p.gamma_m = to_angular(30.0);
  p.kappa = to_angular(1e6);
  p.Gamma = p.gamma_m;
  p.g = power_to_coupling(drive, p.kappa);
  p.g_prime = p.g;
  return {p, drive};
}

enum class ThermalModel { classical, quantum };

inline const char* to_string(ThermalModel m) {
  return m == ThermalModel::classical ? "classical" : "quantum";
}

// Force-referred thermal weight. classical: kB T/(hbar omega_m).
// quantum: n + 1/2 with n the Bose occupation at omega_m.
inline double thermal_weight(double temperature, double omega_m,
                             ThermalModel model = ThermalModel::classical) {
  if (temperature < 0.0) throw DomainError("thermal_weight: temperature must be >= 0");
  if (model == ThermalModel::classical)
    return codata::k_boltzmann * temperature / (codata::hbar * omega_m);
  if (temperature == 0.0) return 0.5;
  const double x = codata::hbar * omega_m / (codata::k_boltzmann * temperature);
  return 1.0 / std::expm1(x) + 0.5;
}

// hbar m omega_m gamma_m in N^2/Hz; every PSD in this library is divided by it.
inline double force_psd_normalization(const SystemParams& p, const DriveParams& d) {
  return codata::hbar * d.mirror_mass * p.omega_m * p.gamma_m;
}

}  // namespace cqnc
