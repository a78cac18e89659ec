#pragma once

#include <complex>

#include "cqnc/params.hpp"

namespace cqnc {

using Complex = std::complex<double>;

// A complex response at one probe frequency. Susceptibilities carry units of
// seconds; ratios are dimensionless.
using ComplexResponse = Complex;

namespace detail {

inline Complex checked_inverse(Complex denom, const char* who) {
  if (denom == Complex{0.0, 0.0})
    throw DomainError(std::string(who) + ": probe frequency hits a pole");
  return 1.0 / denom;
}

}  // namespace detail

// omega_m / (omega_m^2 - omega^2 + i omega gamma_m)
inline ComplexResponse chi_m(double omega, const SystemParams& p) {
  const Complex denom{p.omega_m * p.omega_m - omega * omega, omega * p.gamma_m};
  return p.omega_m * detail::checked_inverse(denom, "chi_m");
}

// 1 / (i omega + kappa/2)
inline ComplexResponse chi_a(double omega, const SystemParams& p) {
  return detail::checked_inverse({0.5 * p.kappa, omega}, "chi_a");
}

// 1 / (i omega + Gamma/2)
inline ComplexResponse chi_d(double omega, const SystemParams& p) {
  return detail::checked_inverse({0.5 * p.Gamma, omega}, "chi_d");
}

// Dressed atomic response, (i omega + Gamma/2 + omega_m^2 chi_d)^-1.
inline ComplexResponse xi(double omega, const SystemParams& p) {
  const Complex denom = Complex{0.5 * p.Gamma, omega} + p.omega_m * p.omega_m * chi_d(omega, p);
  return detail::checked_inverse(denom, "xi");
}

// Generalized atomic susceptibility, the negative-mass counterpart of chi_m:
//   -omega_m xi chi_d = -omega_m / ((i omega + Gamma/2)^2 + omega_m^2)
//                     = -omega_m / (omega_m^2 - omega^2 + i omega Gamma + Gamma^2/4).
// Both atomic quadratures decay at Gamma/2, so the i omega term carries the
// full Gamma and matching chi_m requires Gamma = gamma_m.
inline ComplexResponse chi_d_gen(double omega, const SystemParams& p) {
  const double half = 0.5 * p.Gamma;
  const Complex denom{p.omega_m * p.omega_m - omega * omega + half * half, omega * p.Gamma};
  return -p.omega_m * detail::checked_inverse(denom, "chi_d_gen");
}

struct LambdaPair {
  ComplexResponse plus;   // amplified quadrature, (chi_a^-1 - 2G)^-1
  ComplexResponse minus;  // squeezed quadrature, (chi_a^-1 + 2G)^-1
};

inline LambdaPair lambda_pm(double omega, const SystemParams& p) {
  const double half = 0.5 * p.kappa;
  return {detail::checked_inverse({half - 2.0 * p.G_opa, omega}, "lambda_plus"),
          detail::checked_inverse({half + 2.0 * p.G_opa, omega}, "lambda_minus")};
}

}  // namespace cqnc
