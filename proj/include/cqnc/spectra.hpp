#pragma once

#include <cmath>
#include <complex>

#include "cqnc/params.hpp"
#include "cqnc/susceptibility.hpp"

namespace cqnc {

// Symmetrized spectral weight of each vacuum quadrature input.
inline constexpr double vacuum_weight = 0.5;

// Decomposition of the detected phase quadrature
//   p_out = c_force (F_th + F_ext) + c_xa_in x_in + c_pa_in p_in
//         + c_xd_in xd_in + c_pd_in pd_in.
struct OutputCoefficients {
  Complex c_force;  // s^(1/2)
  Complex c_xa_in;
  Complex c_pa_in;
  Complex c_xd_in;
  Complex c_pd_in;
};

// Noise channels divided by the force transfer. The thermal entry is 1 by
// construction since F_th enters exactly like F_ext.
struct ReferredNoise {
  Complex thermal{1.0, 0.0};
  Complex xa_in;  // back-action
  Complex pa_in;  // shot noise
  Complex xd_in;
  Complex pd_in;
};

// physical: chi'_d from the atomic dynamics.
// ideal_negative_mass: chi'_d replaced by -chi_m, the exact-cancellation
// surrogate used to isolate the back-action channel.
enum class AtomicResponse { physical, ideal_negative_mass };

struct PsdValue {
  double value = 0.0;  // normalized to hbar m omega_m gamma_m
  double omega = 0.0;  // rad/s
};

// Per-channel contributions to the added-force PSD.
struct NoiseBreakdown {
  double thermal = 0.0;
  double back_action = 0.0;
  double shot = 0.0;
  double atomic_x = 0.0;
  double atomic_p = 0.0;

  double quantum() const noexcept { return back_action + shot + atomic_x + atomic_p; }
  double total() const noexcept { return thermal + quantum(); }
};

namespace detail {

inline void require_resonant_stable(const SystemParams& p, const char* who) {
  validate(p);
  if (!p.resonant())
    throw DomainError(std::string(who) + ": closed form requires Delta = theta = phi = 0");
  if (!(p.G_opa < 0.25 * p.kappa))
    throw DomainError(std::string(who) + ": unstable, OPA gain must satisfy G < kappa/4");
}

inline void require_coupling(const SystemParams& p, const char* who) {
  validate(p);
  if (!(p.g > 0.0)) throw DomainError(std::string(who) + ": coupling g must be > 0");
}

}  // namespace detail

// g^2 chi_m + G'^2 chi'_d, the residual back-action response. Near the
// cancellation point the two terms agree to ~Gamma^2/omega^2, so the sum is
// formed over the common denominator:
//   omega_m [ (g^2 - G'^2)(omega_m^2 - omega^2) + g^2 Gamma^2/4
//             + i omega (g^2 Gamma - G'^2 gamma_m) ] / (D_m D_d)
// with D_m, D_d the denominators of chi_m and chi'_d.
inline Complex back_action_response(double omega, const SystemParams& p,
                                    AtomicResponse atoms = AtomicResponse::physical) {
  const double g2 = p.g * p.g;
  const double coupling_gap = (p.g - p.g_prime) * (p.g + p.g_prime);  // g^2 - G'^2
  if (atoms == AtomicResponse::ideal_negative_mass) return coupling_gap * chi_m(omega, p);

  const double detuning = (p.omega_m - omega) * (p.omega_m + omega);
  const double half = 0.5 * p.Gamma;
  const Complex d_mech{detuning, omega * p.gamma_m};
  const Complex d_atom{detuning + half * half, omega * p.Gamma};
  if (d_mech == Complex{} || d_atom == Complex{})
    throw DomainError("back_action_response: probe frequency hits a pole");
  const Complex numerator{coupling_gap * detuning + g2 * half * half,
                          omega * (g2 * (p.Gamma - p.gamma_m) + coupling_gap * p.gamma_m)};
  return p.omega_m * numerator / (d_mech * d_atom);
}

inline OutputCoefficients output_coefficients(double omega, const SystemParams& p,
                                              AtomicResponse atoms = AtomicResponse::physical) {
  detail::require_resonant_stable(p, "output_coefficients");
  const Complex chim = chi_m(omega, p);
  const auto [lp, lm] = lambda_pm(omega, p);
  const double gp = p.g_prime;

  OutputCoefficients c;
  c.c_force = -p.g * chim * lm * std::sqrt(2.0 * p.gamma_m * p.kappa);
  c.c_pa_in = lm * p.kappa - 1.0;

  const Complex chidg =
      atoms == AtomicResponse::ideal_negative_mass ? -chim : chi_d_gen(omega, p);
  c.c_xa_in = back_action_response(omega, p, atoms) * lp * lm * p.kappa;
  // Without atomic damping the atomic inputs decouple (sqrt(kappa Gamma) = 0).
  if (p.Gamma > 0.0) {
    const double root = std::sqrt(p.kappa * p.Gamma);
    c.c_xd_in = -gp * lm * root * chi_d(omega, p) * (p.omega_m * chidg + 1.0);
    c.c_pd_in = -gp * lm * root * chidg;
  }
  return c;
}

inline ReferredNoise referred_noise(const OutputCoefficients& c) {
  if (c.c_force == Complex{0.0, 0.0})
    throw DomainError("referred_noise: no signal transfer (c_force = 0)");
  ReferredNoise r;
  r.xa_in = c.c_xa_in / c.c_force;
  r.pa_in = c.c_pa_in / c.c_force;
  r.xd_in = c.c_xd_in / c.c_force;
  r.pd_in = c.c_pd_in / c.c_force;
  return r;
}

inline NoiseBreakdown added_noise_breakdown(double omega, const SystemParams& p, double temperature,
                                            ThermalModel thermal = ThermalModel::classical,
                                            AtomicResponse atoms = AtomicResponse::physical) {
  const ReferredNoise r = referred_noise(output_coefficients(omega, p, atoms));
  NoiseBreakdown b;
  b.thermal = thermal_weight(temperature, p.omega_m, thermal) * std::norm(r.thermal);
  b.back_action = vacuum_weight * std::norm(r.xa_in);
  b.shot = vacuum_weight * std::norm(r.pa_in);
  b.atomic_x = vacuum_weight * std::norm(r.xd_in);
  b.atomic_p = vacuum_weight * std::norm(r.pd_in);
  return b;
}

// Exact added-force PSD of the resonant model, no small-omega expansion.
inline PsdValue added_noise_psd_exact(double omega, const SystemParams& p, double temperature,
                                      ThermalModel thermal = ThermalModel::classical,
                                      AtomicResponse atoms = AtomicResponse::physical) {
  return {added_noise_breakdown(omega, p, temperature, thermal, atoms).total(), omega};
}

// Shot term of the cancellation-regime PSD for omega << kappa,
//   (kappa/2 - 2G)^2 / (2 g^2 |chi_m|^2 2 gamma_m kappa).
inline double cqnc_shot_term(double omega, const SystemParams& p) {
  detail::require_coupling(p, "cqnc_shot_term");
  const double squeeze = 0.5 * p.kappa - 2.0 * p.G_opa;
  return vacuum_weight * squeeze * squeeze /
         (p.g * p.g * std::norm(chi_m(omega, p)) * 2.0 * p.gamma_m * p.kappa);
}

// Atomic term (1/2)((omega^2 + Gamma^2/4)/omega_m^2 + 1).
inline double cqnc_atomic_term(double omega, const SystemParams& p) {
  const double half = 0.5 * p.Gamma;
  return vacuum_weight * ((omega * omega + half * half) / (p.omega_m * p.omega_m) + 1.0);
}

// Cancellation-regime PSD for omega << kappa, assuming the back-action
// channel cancels (g = G', Gamma = gamma_m). Shot and atomic terms add.
inline PsdValue cqnc_psd_approx(double omega, const SystemParams& p, double temperature,
                                ThermalModel thermal = ThermalModel::classical) {
  detail::require_coupling(p, "cqnc_psd_approx");
  if (!(p.G_opa < 0.25 * p.kappa))
    throw DomainError("cqnc_psd_approx: unstable, OPA gain must satisfy G < kappa/4");
  const double quantum = cqnc_shot_term(omega, p) + cqnc_atomic_term(omega, p);
  return {thermal_weight(temperature, p.omega_m, thermal) + quantum, omega};
}

// Standard optomechanical system: shot noise ~ 1/g^2 plus back-action ~ g^2.
inline PsdValue standard_psd(double omega, const SystemParams& p, double temperature,
                             ThermalModel thermal = ThermalModel::classical) {
  detail::require_coupling(p, "standard_psd");
  const double g2 = p.g * p.g;
  const double shot = p.kappa / p.gamma_m / (g2 * std::norm(chi_m(omega, p))) * 0.25;
  const double back_action = 4.0 * g2 / (p.kappa * p.gamma_m);
  return {thermal_weight(temperature, p.omega_m, thermal) + 0.5 * (shot + back_action), omega};
}

// Standard quantum limit 1/(gamma_m |chi_m|).
inline PsdValue sql_psd(double omega, const SystemParams& p) {
  validate(p);
  return {1.0 / (p.gamma_m * std::abs(chi_m(omega, p))), omega};
}

// Cancellation floor (omega^2 + omega_m^2 + Gamma^2/4) / (2 omega_m^2).
inline PsdValue cqnc_floor_psd(double omega, const SystemParams& p) {
  validate(p);
  const double half = 0.5 * p.Gamma;
  return {(omega * omega + p.omega_m * p.omega_m + half * half) / (2.0 * p.omega_m * p.omega_m), omega};
}

}  // namespace cqnc
