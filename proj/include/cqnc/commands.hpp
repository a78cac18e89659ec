#pragma once

// Parameter sweeps and verification runs behind the command-line
// front end. Every routine writes to a caller-supplied stream so the same
// code produces the golden files and the CLI output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "cqnc/analysis.hpp"
#include "cqnc/config.hpp"
#include "cqnc/csv.hpp"
#include "cqnc/oracle.hpp"
#include "cqnc/spectra.hpp"

namespace cqnc {

// One resolved sweep: up to two axes, a base parameter set and the curves.
struct SweepSpec {
  AxisSpec axis1;
  std::optional<AxisSpec> axis2;
  SystemParams base;
  std::vector<double> gain_ratios;
  double temperature = 0.0;
};

// One output row. PSD cells are empty optionals when the curve is unstable
// or not applicable; they are never filled with a placeholder number.
struct SpectrumRecord {
  std::vector<double> axes;
  std::optional<double> s_sql;
  std::optional<double> s_standard;
  std::vector<std::optional<double>> s_cqnc_approx;
  std::vector<std::optional<double>> s_cqnc_exact;
  bool stable = true;
  std::string param_hash;
};

namespace detail {

struct Curve {
  double ratio = 0.0;
  bool stable = false;
  SystemParams params;
  std::optional<oracle::StateSpaceModel> model;
};

inline std::vector<Curve> make_curves(const std::vector<double>& ratios, const SystemParams& base, bool with_oracle) {
  std::vector<Curve> curves;
  for (double r : ratios) {
    Curve c;
    c.ratio = r;
    c.params = base;
    c.params.G_opa = r * base.kappa;
    auto model = oracle::build_statespace(c.params, oracle::ModelMode::general);
    c.stable = model.stable && (!base.resonant() || c.params.G_opa < 0.25 * base.kappa);
    if (with_oracle) c.model = std::move(model);
    curves.push_back(std::move(c));
  }
  return curves;
}

inline void report_rejected(std::ostream& os, const std::vector<Curve>& curves) {
  for (const auto& c : curves)
    if (!c.stable)
      os << "# diagnostic: curve G/kappa=" << csv::number(c.ratio)
         << " rejected, unstable (requires G < kappa/4); its cells are marked unstable\n";
}

inline std::string cell(const std::optional<double>& v, bool stable) {
  if (!stable) return csv::unstable_cell();
  return v ? csv::number(*v) : csv::na_cell();
}

// Fills the per-curve PSDs of one record at (omega, g).
inline void fill_curves(SpectrumRecord& rec, const std::vector<Curve>& curves, double omega, double g,
                        bool g_prime_tracks, double temperature, ThermalModel thermal, bool with_oracle) {
  for (const auto& c : curves) {
    SystemParams q = c.params;
    q.g = g;
    if (g_prime_tracks) q.g_prime = g;
    std::optional<double> approx, exact;
    if (c.stable) {
      if (q.resonant()) approx = cqnc_psd_approx(omega, q, temperature, thermal).value;
      if (with_oracle) {
        const auto m = oracle::build_statespace(q, oracle::ModelMode::general);
        exact = oracle::added_force_psd_oracle(m, omega, temperature, thermal);
      }
    } else {
      rec.stable = false;
    }
    rec.s_cqnc_approx.push_back(approx);
    if (with_oracle) rec.s_cqnc_exact.push_back(exact);
  }
}

inline std::vector<std::string> record_cells(const SpectrumRecord& rec, const std::vector<Curve>& curves,
                                             bool with_standard) {
  std::vector<std::string> cells;
  for (double a : rec.axes) cells.push_back(csv::number(a));
  if (with_standard) {
    cells.push_back(cell(rec.s_sql, true));
    cells.push_back(cell(rec.s_standard, true));
  }
  for (std::size_t i = 0; i < curves.size(); ++i) cells.push_back(cell(rec.s_cqnc_approx[i], curves[i].stable));
  for (std::size_t i = 0; i < rec.s_cqnc_exact.size(); ++i)
    cells.push_back(cell(rec.s_cqnc_exact[i], curves[i].stable));
  cells.push_back(rec.stable ? "1" : "0");
  cells.push_back(rec.param_hash);
  return cells;
}

inline void curve_columns(std::vector<std::string>& cols, const std::vector<double>& ratios, bool with_oracle) {
  for (double r : ratios) cols.push_back(csv::curve_label("S_cqnc_approx", r));
  if (with_oracle)
    for (double r : ratios) cols.push_back(csv::curve_label("S_cqnc_exact", r));
  cols.push_back("stable");
  cols.push_back("param_hash");
}

}  // namespace detail

// Noise spectra versus detection frequency at a fixed operating coupling:
// the configured g, or (g/g_SQL) * g_SQL(omega_m) when that ratio is set.
inline void cmd_spectrum(const RunConfig& cfg, std::ostream& os, bool with_oracle = false) {
  SweepSpec spec;
  spec.axis1 = cfg.spectrum_axis;
  spec.base = cfg.system;
  spec.gain_ratios = cfg.gain_ratios;
  spec.temperature = cfg.system.temperature;

  const SystemParams& p = spec.base;
  const double g_sql = g_sql_analytic(p.omega_m, p);
  const double g = cfg.g_over_gsql ? *cfg.g_over_gsql * g_sql : p.g;
  const SystemParams at_g = with_coupling(cfg, g);
  const auto curves = detail::make_curves(spec.gain_ratios, at_g, with_oracle);

  csv::write_preamble(os, "spectrum", cfg);
  os << "# sweep: omega/omega_m " << to_string(spec.axis1.scale) << " [" << csv::number(spec.axis1.min) << ", "
     << csv::number(spec.axis1.max) << "] count " << spec.axis1.count << '\n';
  os << "# operating coupling g = " << csv::number(g) << " rad/s (g_SQL(omega_m) = " << csv::number(g_sql)
     << " rad/s), power = " << csv::number(coupling_to_power(g, cfg.drive, p.kappa)) << " W\n";
  detail::report_rejected(os, curves);

  std::vector<std::string> cols{"omega_over_omega_m", "frequency_hz", "omega_rad_s", "S_sql", "S_standard"};
  detail::curve_columns(cols, spec.gain_ratios, with_oracle);
  csv::write_row(os, cols);

  const std::string hash = csv::parameter_hash(at_g);
  for (double x : spec.axis1.values()) {
    const double w = x * p.omega_m;
    SpectrumRecord rec;
    rec.axes = {x, to_hz(w), w};
    rec.param_hash = hash;
    if (p.resonant()) {
      rec.s_sql = sql_psd(w, at_g).value;
      rec.s_standard = standard_psd(w, at_g, spec.temperature, cfg.thermal).value;
    }
    detail::fill_curves(rec, curves, w, g, cfg.g_prime_tracks_g, spec.temperature, cfg.thermal, with_oracle);
    csv::write_row(os, detail::record_cells(rec, curves, true));
  }
}

// Noise spectra versus drive power at a fixed probe frequency: on resonance
// (omega = omega_m) or detuned by 4 gamma_m. The power axis is laid out in
// units of (g/g_SQL)^2 with g_SQL taken at the probe frequency.
inline void cmd_power_sweep(const RunConfig& cfg, std::ostream& os, bool on_resonance, bool with_oracle = false) {
  SweepSpec spec;
  spec.axis1 = cfg.power_axis;
  spec.base = cfg.system;
  spec.gain_ratios = cfg.gain_ratios;
  spec.temperature = cfg.system.temperature;

  const SystemParams& p = spec.base;
  const double w = on_resonance ? p.omega_m : p.omega_m + 4.0 * p.gamma_m;
  const double g_sql = g_sql_analytic(w, p);
  const double p_sql = coupling_to_power(g_sql, cfg.drive, p.kappa);
  const auto curves = detail::make_curves(spec.gain_ratios, with_coupling(cfg, g_sql), with_oracle);

  csv::write_preamble(os, on_resonance ? "power-sweep on-resonance" : "power-sweep off-resonance", cfg);
  os << "# probe omega = " << csv::number(w) << " rad/s = " << csv::number(to_hz(w)) << " Hz ("
     << (on_resonance ? "omega_m" : "omega_m + 4 gamma_m") << ")\n";
  os << "# g_SQL(probe) = " << csv::number(g_sql) << " rad/s, P_SQL = " << csv::number(p_sql) << " W\n";
  os << "# sweep: (g/g_SQL)^2 " << to_string(spec.axis1.scale) << " [" << csv::number(spec.axis1.min) << ", "
     << csv::number(spec.axis1.max) << "] count " << spec.axis1.count << "; g = power_to_coupling(P)\n";
  detail::report_rejected(os, curves);

  std::vector<std::string> cols{"g_over_gsql_sq", "power_w", "g_rad_s", "S_sql", "S_standard"};
  detail::curve_columns(cols, spec.gain_ratios, with_oracle);
  csv::write_row(os, cols);

  for (double x : spec.axis1.values()) {
    DriveParams drive = cfg.drive;
    drive.power = p_sql * x;
    const double g = power_to_coupling(drive, p.kappa);
    const SystemParams at_g = with_coupling(cfg, g);
    SpectrumRecord rec;
    rec.axes = {x, drive.power, g};
    rec.param_hash = csv::parameter_hash(at_g);
    if (p.resonant()) {
      rec.s_sql = sql_psd(w, at_g).value;
      rec.s_standard = standard_psd(w, at_g, spec.temperature, cfg.thermal).value;
    }
    detail::fill_curves(rec, curves, w, g, cfg.g_prime_tracks_g, spec.temperature, cfg.thermal, with_oracle);
    csv::write_row(os, detail::record_cells(rec, curves, true));
  }
}

// Hybrid-system PSD over (g/g_SQL)^2 x omega/omega_m, g_SQL at omega_m.
inline void cmd_map2d(const RunConfig& cfg, std::ostream& os, bool with_oracle = false) {
  SweepSpec spec;
  spec.axis1 = cfg.map_coupling_axis;
  spec.axis2 = cfg.map_frequency_axis;
  spec.base = cfg.system;
  spec.gain_ratios = cfg.map_gain_ratios;
  spec.temperature = cfg.system.temperature;

  const SystemParams& p = spec.base;
  const double g_sql = g_sql_analytic(p.omega_m, p);
  const auto curves = detail::make_curves(spec.gain_ratios, with_coupling(cfg, g_sql), with_oracle);

  csv::write_preamble(os, "map2d", cfg);
  os << "# g_SQL(omega_m) = " << csv::number(g_sql) << " rad/s\n";
  os << "# axis 1: (g/g_SQL)^2 " << to_string(spec.axis1.scale) << " [" << csv::number(spec.axis1.min) << ", "
     << csv::number(spec.axis1.max) << "] count " << spec.axis1.count << '\n';
  os << "# axis 2: omega/omega_m " << to_string(spec.axis2->scale) << " [" << csv::number(spec.axis2->min)
     << ", " << csv::number(spec.axis2->max) << "] count " << spec.axis2->count << '\n';
  detail::report_rejected(os, curves);

  std::vector<std::string> cols{"g_over_gsql_sq", "omega_over_omega_m"};
  detail::curve_columns(cols, spec.gain_ratios, with_oracle);
  csv::write_row(os, cols);

  const auto freqs = spec.axis2->values();
  for (double x : spec.axis1.values()) {
    const double g = g_sql * std::sqrt(x);
    const std::string hash = csv::parameter_hash(with_coupling(cfg, g));
    for (double y : freqs) {
      SpectrumRecord rec;
      rec.axes = {x, y};
      rec.param_hash = hash;
      detail::fill_curves(rec, curves, y * p.omega_m, g, cfg.g_prime_tracks_g, spec.temperature, cfg.thermal,
                          with_oracle);
      csv::write_row(os, detail::record_cells(rec, curves, false));
    }
  }
}

// ---------------------------------------------------------------------------
// Verification

// Log-uniform draw around a base parameter set. Cancellation cases pin
// G' = g and Gamma = gamma_m; free cases draw them independently.
inline SystemParams sample_stable_params(std::mt19937_64& rng, const SystemParams& base, bool cancellation) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_scale = [&](double decades) { return std::pow(10.0, decades * (2.0 * unit(rng) - 1.0)); };

  SystemParams p = base;
  p.theta = p.phi = p.Delta = 0.0;
  p.temperature = 0.0;
  p.omega_m = base.omega_m * log_scale(0.5);
  p.kappa = base.kappa * log_scale(1.0);
  do {
    p.gamma_m = base.gamma_m * log_scale(1.0);
  } while (!(p.quality_factor() > 10.0));
  p.g = std::sqrt(p.kappa * p.gamma_m) / 2.0 * log_scale(1.5);
  p.G_opa = 0.9 * 0.25 * p.kappa * unit(rng);
  if (cancellation) {
    p.Gamma = p.gamma_m;
    p.g_prime = p.g;
  } else {
    p.Gamma = p.gamma_m * log_scale(1.0);
    p.g_prime = p.g * log_scale(1.0);
  }
  return p;
}

struct VerifyTolerances {
  double coefficient = 1e-9;
  double psd = 1e-9;
  double residual = 1e-12;
};

struct VerifyReport {
  int cases = 0;
  int points = 0;
  int failures = 0;
  double max_coefficient_error = 0.0;  // max relative error over the 5 referred coefficients
  double max_psd_error = 0.0;
  double max_residual = 0.0;
  double max_mode_mismatch = 0.0;      // general vs resonant oracle, zero angles
  std::optional<CqncReport> config_cqnc;

  bool passed() const noexcept { return failures == 0; }
};

// Closed form vs oracle on one parameter set. Returns the number of failed
// frequency points.
inline int verify_case(const SystemParams& p, std::span<const double> freqs, const VerifyTolerances& tol,
                       VerifyReport& report) {
  const auto resonant = oracle::build_statespace(p, oracle::ModelMode::resonant);
  const auto general = oracle::build_statespace(p, oracle::ModelMode::general);
  int failed = 0;
  for (double w : freqs) {
    const ReferredNoise cf = referred_noise(output_coefficients(w, p));
    const auto orc = oracle::referred_noise(resonant, w);
    const Complex closed[oracle::noise_dim] = {cf.thermal, cf.xa_in, cf.pa_in, cf.xd_in, cf.pd_in};

    bool ok = true;
    for (int c = 0; c < oracle::noise_dim; ++c) {
      const double scale = std::abs(closed[c]);
      const double err = scale > 0.0 ? std::abs(orc[c] - closed[c]) / scale : std::abs(orc[c]);
      report.max_coefficient_error = std::max(report.max_coefficient_error, err);
      ok = ok && err <= tol.coefficient;
    }
    const double s_closed = added_noise_psd_exact(w, p, p.temperature).value;
    const double s_oracle = oracle::added_force_psd_oracle(resonant, w, p.temperature);
    const double psd_err = std::abs(s_oracle - s_closed) / s_closed;
    report.max_psd_error = std::max(report.max_psd_error, psd_err);
    ok = ok && psd_err <= tol.psd;

    const double resid = oracle::frequency_response(resonant, w).max_residual;
    report.max_residual = std::max(report.max_residual, resid);
    ok = ok && resid <= tol.residual;

    const double s_general = oracle::added_force_psd_oracle(general, w, p.temperature);
    const double mode_err = std::abs(s_general - s_oracle) / s_oracle;
    report.max_mode_mismatch = std::max(report.max_mode_mismatch, mode_err);
    ok = ok && mode_err == 0.0;

    ++report.points;
    if (!ok) ++failed;
  }
  ++report.cases;
  report.failures += failed;
  return failed;
}

// Runs the configured parameter set (when it is in the resonant, stable
// regime) followed by n_random sampled sets, 20 log-spaced-random
// frequencies each.
inline VerifyReport run_verify(const RunConfig& cfg, int n_random, std::uint64_t seed,
                               const VerifyTolerances& tol = {}, int freqs_per_case = 20) {
  if (n_random < 1) throw DomainError("verify: n_random must be >= 1");
  VerifyReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_freqs = [&](const SystemParams& p) {
    std::vector<double> f(static_cast<std::size_t>(freqs_per_case));
    for (auto& w : f) w = p.omega_m * std::pow(10.0, 2.0 * unit(rng) - 1.0);  // [0.1, 10] omega_m
    return f;
  };

  const SystemParams& base = cfg.system;
  if (base.g > 0.0) report.config_cqnc = cqnc_check(base, default_frequency_grid(base));
  if (base.resonant() && base.g > 0.0 && base.G_opa < 0.25 * base.kappa) {
    auto f = draw_freqs(base);
    f.push_back(base.omega_m);
    verify_case(base, f, tol, report);
  }
  for (int i = 0; i < n_random; ++i) {
    const SystemParams p = sample_stable_params(rng, base, i % 2 == 0);
    verify_case(p, draw_freqs(p), tol, report);
  }
  return report;
}

inline void print_verify(std::ostream& os, const VerifyReport& r, const VerifyTolerances& tol) {
  os << "cases: " << r.cases << '\n';
  os << "points: " << r.points << '\n';
  os << "max_coefficient_rel_error: " << csv::number(r.max_coefficient_error) << " (tol " << csv::number(tol.coefficient)
     << ")\n";
  os << "max_psd_rel_error: " << csv::number(r.max_psd_error) << " (tol " << csv::number(tol.psd) << ")\n";
  os << "max_solve_residual: " << csv::number(r.max_residual) << " (tol " << csv::number(tol.residual) << ")\n";
  os << "max_general_vs_resonant: " << csv::number(r.max_mode_mismatch) << " (tol 0)\n";
  if (r.config_cqnc)
    os << "config_cqnc_ideal: " << (r.config_cqnc->ideal ? "true" : "false") << " (informational)\n";
  os << "failed_points: " << r.failures << '\n';
  os << "result: " << (r.passed() ? "PASS" : "FAIL") << '\n';
}

inline CqncReport cmd_check_cqnc(const RunConfig& cfg, std::ostream& os) {
  const auto grid = default_frequency_grid(cfg.system);
  const CqncReport r = cqnc_check(cfg.system, grid);
  os << "coupling_mismatch: " << csv::number(r.coupling_mismatch) << '\n';
  os << "damping_mismatch: " << csv::number(r.damping_mismatch) << '\n';
  os << "susceptibility_residual: " << csv::number(r.susceptibility_residual) << " (tol "
     << csv::number(r.residual_tolerance) << ")\n";
  os << "grid_points: " << grid.size() << '\n';
  os << "ideal: " << (r.ideal ? "true" : "false") << '\n';
  return r;
}

inline oracle::StabilityReport cmd_stability(const RunConfig& cfg, std::ostream& os) {
  const auto m = oracle::build_statespace(cfg.system, oracle::ModelMode::general);
  const auto r = oracle::stability(m);
  os << "eigen_real_parts:";
  for (double re : r.eigen_real_parts) os << ' ' << csv::number(re);
  os << '\n';
  os << "margin: " << csv::number(r.margin) << " rad/s\n";
  os << "stable: " << (r.stable ? "true" : "false") << '\n';
  return r;
}

}  // namespace cqnc
