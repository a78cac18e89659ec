#pragma once

// State-space verification engine. Builds the six-quadrature drift matrix
// directly from the linearized Langevin equations and solves for every
// transfer at a probe frequency. Nothing here is shared with the closed-form
// susceptibilities in susceptibility.hpp / spectra.hpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "cqnc/params.hpp"

namespace cqnc::oracle {

inline constexpr int state_dim = 6;
inline constexpr int noise_dim = 5;

// State order.
enum State : int { X = 0, P = 1, xa = 2, pa = 3, xd = 4, pd = 5 };
// Noise input order.
enum Input : int { F_th = 0, xa_in = 1, pa_in = 2, xd_in = 3, pd_in = 4 };

enum class ModelMode { general, resonant };

inline const char* to_string(ModelMode m) { return m == ModelMode::general ? "general" : "resonant"; }

using Complex = std::complex<double>;
using Drift = Eigen::Matrix<double, state_dim, state_dim>;
using NoiseInput = Eigen::Matrix<double, state_dim, noise_dim>;
using StateVector = Eigen::Matrix<double, state_dim, 1>;

// p_out = state_row . state + feedthrough . inputs
struct Readout {
  Eigen::Matrix<double, 1, state_dim> state_row;
  Eigen::Matrix<double, 1, noise_dim> feedthrough;
};

struct StabilityReport {
  std::array<double, state_dim> eigen_real_parts{};  // descending
  bool stable = false;
  double margin = 0.0;  // smallest |Re lambda|
};

struct StateSpaceModel {
  Drift drift;
  NoiseInput noise_input;
  StateVector signal_input;  // F_ext, same shape as the F_th column
  std::array<double, noise_dim> input_weights{};
  Readout readout;
  double omega_m = 0.0;  // for the thermal weight kB T/(hbar omega_m)
  ModelMode mode = ModelMode::resonant;
  bool stable = false;
};

namespace detail {

// Real parts within this distance of zero are treated as marginal (not stable).
inline double marginal_tolerance(const Drift& a) {
  return 1e-12 * std::max(a.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
}

}  // namespace detail

inline StabilityReport stability(const Drift& drift) {
  Eigen::EigenSolver<Drift> solver(drift, /*computeEigenvectors=*/false);
  StabilityReport report;
  const auto& values = solver.eigenvalues();
  for (int i = 0; i < state_dim; ++i) report.eigen_real_parts[i] = values[i].real();
  std::sort(report.eigen_real_parts.begin(), report.eigen_real_parts.end(), std::greater<>());
  report.margin = std::abs(report.eigen_real_parts.front());
  for (double re : report.eigen_real_parts) report.margin = std::min(report.margin, std::abs(re));
  report.stable = report.eigen_real_parts.front() < -detail::marginal_tolerance(drift);
  return report;
}

inline StabilityReport stability(const StateSpaceModel& m) { return stability(m.drift); }

inline StateSpaceModel build_statespace(const SystemParams& p, ModelMode mode = ModelMode::resonant) {
  validate(p);
  StateSpaceModel m;
  m.mode = mode;
  m.omega_m = p.omega_m;
  Drift& a = m.drift;
  a.setZero();

  const double half_kappa = 0.5 * p.kappa;
  const double half_gamma = 0.5 * p.Gamma;

  a(X, P) = p.omega_m;
  a(P, X) = -p.omega_m;
  a(P, P) = -p.gamma_m;
  a(xd, xd) = -half_gamma;
  a(xd, pd) = -p.omega_m;
  a(pa, xd) = -p.g_prime;
  a(pd, xa) = -p.g_prime;
  a(pd, xd) = p.omega_m;
  a(pd, pd) = -half_gamma;

  if (mode == ModelMode::resonant) {
    a(P, xa) = -p.g;
    a(xa, xa) = -half_kappa + 2.0 * p.G_opa;
    a(pa, X) = -p.g;
    a(pa, pa) = -half_kappa - 2.0 * p.G_opa;
  } else {
    const double c_plus = half_kappa + 2.0 * p.G_opa * std::cos(p.theta);
    const double c_minus = -half_kappa + 2.0 * p.G_opa * std::cos(p.theta);
    const double s_plus = p.Delta + 2.0 * p.G_opa * std::sin(p.theta);
    const double s_minus = -p.Delta + 2.0 * p.G_opa * std::sin(p.theta);
    const double g_cos = p.g * std::cos(p.phi);
    const double g_sin = p.g * std::sin(p.phi);

    a(P, xa) = -g_cos;
    a(P, pa) = g_sin;
    a(xa, X) = g_sin;
    a(xa, xa) = c_minus;
    a(xa, pa) = s_plus;
    a(pa, X) = -g_cos;
    a(pa, xa) = s_minus;
    a(pa, pa) = -c_plus;
  }

  m.noise_input.setZero();
  m.noise_input(P, F_th) = std::sqrt(2.0 * p.gamma_m);
  m.noise_input(xa, xa_in) = std::sqrt(p.kappa);
  m.noise_input(pa, pa_in) = std::sqrt(p.kappa);
  m.noise_input(xd, xd_in) = std::sqrt(p.Gamma);
  m.noise_input(pd, pd_in) = std::sqrt(p.Gamma);
  m.signal_input = m.noise_input.col(F_th);

  m.input_weights = {thermal_weight(p.temperature, p.omega_m), 0.5, 0.5, 0.5, 0.5};

  m.readout.state_row.setZero();
  m.readout.state_row(pa) = std::sqrt(p.kappa);
  m.readout.feedthrough.setZero();
  m.readout.feedthrough(pa_in) = -1.0;

  m.stable = stability(m.drift).stable;
  return m;
}

// Resolvent (i omega I - A)^-1 applied to every input column.
struct Transfer {
  Eigen::Matrix<Complex, state_dim, noise_dim> noise;
  Eigen::Matrix<Complex, state_dim, 1> signal;
  double max_residual = 0.0;  // max over columns of |(i w I - A) x - b| / |b|
};

// Working precision of the resolvent solve. Back-action cancellation makes
// the x_a^in output transfer a difference of two paths that agree to
// ~Gamma^2/omega^2, so double (or x87 extended) precision is not enough to
// resolve it at 1e-9.
using Quad = boost::multiprecision::cpp_bin_float_quad;

inline Transfer frequency_response(const StateSpaceModel& m, double omega) {
  // (i w I - A)(u + i v) = b splits into the real block system
  //   [ -A   -w I ] [u]   [b]
  //   [ w I   -A  ] [v] = [0]
  constexpr int n = 2 * state_dim;
  constexpr int cols = noise_dim + 1;
  using Block = Eigen::Matrix<Quad, n, n>;
  using Rhs = Eigen::Matrix<Quad, n, cols>;

  Block lhs = Block::Zero();
  for (int r = 0; r < state_dim; ++r) {
    for (int c = 0; c < state_dim; ++c) {
      lhs(r, c) = -Quad(m.drift(r, c));
      lhs(r + state_dim, c + state_dim) = -Quad(m.drift(r, c));
    }
    lhs(r, r + state_dim) = -Quad(omega);
    lhs(r + state_dim, r) = Quad(omega);
  }

  Rhs rhs = Rhs::Zero();
  for (int r = 0; r < state_dim; ++r) {
    for (int c = 0; c < noise_dim; ++c) rhs(r, c) = Quad(m.noise_input(r, c));
    rhs(r, noise_dim) = Quad(m.signal_input(r));
  }

  Eigen::PartialPivLU<Block> lu(lhs);
  const auto& packed = lu.matrixLU();
  for (int i = 0; i < n; ++i)
    if (packed(i, i) == 0)
      throw DomainError("frequency_response: i*omega is an eigenvalue of the drift matrix");

  const Rhs sol = lu.solve(rhs);
  const Rhs resid = rhs - lhs * sol;

  Transfer t;
  for (int c = 0; c < cols; ++c) {
    const Quad bnorm = rhs.col(c).norm();
    if (bnorm > 0) t.max_residual = std::max(t.max_residual, static_cast<double>(resid.col(c).norm() / bnorm));
  }
  auto entry = [&](int r, int c) {
    return Complex(static_cast<double>(sol(r, c)), static_cast<double>(sol(r + state_dim, c)));
  };
  for (int r = 0; r < state_dim; ++r) {
    for (int c = 0; c < noise_dim; ++c) t.noise(r, c) = entry(r, c);
    t.signal(r) = entry(r, noise_dim);
  }
  return t;
}

// Output transfers p_out / input for each noise channel and the signal.
struct OutputTransfer {
  std::array<Complex, noise_dim> noise{};
  Complex signal;
};

inline OutputTransfer output_transfer(const StateSpaceModel& m, double omega) {
  const Transfer t = frequency_response(m, omega);
  OutputTransfer out;
  for (int c = 0; c < noise_dim; ++c) {
    Complex v = m.readout.feedthrough(c);
    for (int r = 0; r < state_dim; ++r) v += m.readout.state_row(r) * t.noise(r, c);
    out.noise[c] = v;
  }
  out.signal = Complex{0.0, 0.0};
  for (int r = 0; r < state_dim; ++r) out.signal += m.readout.state_row(r) * t.signal(r);
  return out;
}

// Every noise channel's output transfer divided by the F_ext transfer.
inline std::array<Complex, noise_dim> referred_noise(const StateSpaceModel& m, double omega) {
  if (!m.stable) throw DomainError("oracle: unstable parameter set");
  const OutputTransfer out = output_transfer(m, omega);
  if (out.signal == Complex{0.0, 0.0}) throw DomainError("oracle: zero force-to-output transfer");
  std::array<Complex, noise_dim> r{};
  for (int c = 0; c < noise_dim; ++c) r[c] = out.noise[c] / out.signal;
  return r;
}

namespace detail {

inline double weighted_sum(const std::array<Complex, noise_dim>& referred,
                           const std::array<double, noise_dim>& weights) {
  double quantum = 0.0;
  for (int c = 1; c < noise_dim; ++c) quantum += weights[c] * std::norm(referred[c]);
  return weights[F_th] * std::norm(referred[F_th]) + quantum;
}

}  // namespace detail

// Added-force PSD, using the thermal weight stored at build time.
inline double added_force_psd_oracle(const StateSpaceModel& m, double omega) {
  return detail::weighted_sum(referred_noise(m, omega), m.input_weights);
}

inline double added_force_psd_oracle(const StateSpaceModel& m, double omega, double temperature,
                                     ThermalModel thermal = ThermalModel::classical) {
  auto weights = m.input_weights;
  weights[F_th] = thermal_weight(temperature, m.omega_m, thermal);
  return detail::weighted_sum(referred_noise(m, omega), weights);
}

}  // namespace cqnc::oracle
