#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "cqnc/params.hpp"
#include "cqnc/spectra.hpp"
#include "cqnc/susceptibility.hpp"

namespace cqnc {

// ---------------------------------------------------------------------------
// Frequency grids

inline std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) throw DomainError("linear_grid: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = lo + step * i;
  out.back() = hi;
  return out;
}

inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw DomainError("log_grid: bounds must be > 0");
  if (count < 1) throw DomainError("log_grid: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

// 2001 log points over [1e-2, 1e2] omega_m, plus 401 linear points within
// +-10 gamma_m of the resonance. Sorted, duplicates removed.
inline std::vector<double> default_frequency_grid(const SystemParams& p) {
  std::vector<double> grid = log_grid(1e-2 * p.omega_m, 1e2 * p.omega_m, 2001);
  const auto local = linear_grid(p.omega_m - 10.0 * p.gamma_m, p.omega_m + 10.0 * p.gamma_m, 401);
  for (double w : local)
    if (w > 0.0) grid.push_back(w);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// ---------------------------------------------------------------------------
// Cancellation diagnostics

struct CqncTolerances {
  double coupling = 1e-6;
  double damping = 1e-6;
  double residual_per_inverse_q = 3.0;  // residual tolerance is this / Q
};

struct CqncReport {
  double coupling_mismatch = 0.0;        // |g - G'| / g
  double damping_mismatch = 0.0;         // |Gamma - gamma_m| / gamma_m
  double susceptibility_residual = 0.0;  // sup |g^2 chi_m + G'^2 chi'_d| / (g^2 |chi_m|)
  double residual_tolerance = 0.0;
  bool ideal = false;
};

// Mechanical and atomic susceptibilities match when g = G' and Gamma = gamma_m.
inline CqncReport cqnc_check(const SystemParams& p, std::span<const double> grid,
                             const CqncTolerances& tol = {},
                             AtomicResponse atoms = AtomicResponse::physical) {
  validate(p);
  if (!(p.g > 0.0)) throw DomainError("cqnc_check: coupling g must be > 0");
  if (grid.empty()) throw DomainError("cqnc_check: empty frequency grid");

  CqncReport r;
  r.coupling_mismatch = std::abs(p.g - p.g_prime) / p.g;
  r.damping_mismatch = std::abs(p.Gamma - p.gamma_m) / p.gamma_m;
  for (double w : grid) {
    const double rel = std::abs(back_action_response(w, p, atoms)) / (p.g * p.g * std::abs(chi_m(w, p)));
    r.susceptibility_residual = std::max(r.susceptibility_residual, rel);
  }
  r.residual_tolerance = tol.residual_per_inverse_q / p.quality_factor();
  r.ideal = r.coupling_mismatch <= tol.coupling && r.damping_mismatch <= tol.damping &&
            r.susceptibility_residual <= r.residual_tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// Optimal coupling

// g_SQL = sqrt(kappa) / (2 sqrt|chi_m|)
inline double g_sql_analytic(double omega, const SystemParams& p) {
  validate(p);
  return std::sqrt(p.kappa) / (2.0 * std::sqrt(std::abs(chi_m(omega, p))));
}

// OPA-shifted optimum |kappa - 4G| / (2 sqrt(kappa |chi_m|))
inline double g_sq_theta0(double omega, const SystemParams& p) {
  validate(p);
  return std::abs(p.kappa - 4.0 * p.G_opa) / (2.0 * std::sqrt(p.kappa * std::abs(chi_m(omega, p))));
}

struct GoldenSectionResult {
  double x = 0.0;
  double f = 0.0;
  int iterations = 0;
};

// Minimizes a unimodal f on [lo, hi] until the bracket is narrower than tol.
template <class F>
GoldenSectionResult golden_section_minimize(F&& f, double lo, double hi, double tol, int max_iter = 500) {
  constexpr double inv_phi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  for (; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

enum class CouplingModel { standard, cqnc };

inline const char* to_string(CouplingModel m) { return m == CouplingModel::standard ? "standard" : "cqnc"; }

struct CouplingBounds {
  double g_min = 0.0;
  double g_max = 0.0;
};

struct OptimumReport {
  double g_opt = 0.0;    // rad/s
  double p_opt = 0.0;    // W
  double s_min = 0.0;    // normalized PSD at g_opt
  double omega = 0.0;    // probe frequency
  bool monotone = false; // no interior minimum; g_opt sits on a bound
};

// Minimizes the chosen PSD over g on a log scale. For the cancellation model
// G' follows g and the PSD decreases monotonically, so the optimum lands on
// the upper bound and is flagged.
inline OptimumReport optimize_coupling(double omega, const SystemParams& p, const DriveParams& drive,
                                       CouplingModel model, CouplingBounds bounds) {
  validate(p);
  if (!(bounds.g_min > 0.0) || !(bounds.g_max > bounds.g_min))
    throw DomainError("optimize_coupling: bounds must satisfy 0 < g_min < g_max");

  auto psd_at = [&](double g) {
    SystemParams q = p;
    q.g = g;
    if (model == CouplingModel::cqnc) {
      q.g_prime = g;
      return cqnc_psd_approx(omega, q, p.temperature).value;
    }
    return standard_psd(omega, q, p.temperature).value;
  };
  auto objective = [&](double log_g) { return psd_at(std::exp(log_g)); };

  const double lo = std::log(bounds.g_min), hi = std::log(bounds.g_max);
  // 1e-6 relative in g is 1e-6 absolute in log g; tighten a little further
  // since the bracket midpoint is reported.
  const auto best = golden_section_minimize(objective, lo, hi, 1e-8);

  OptimumReport r;
  r.omega = omega;
  r.g_opt = std::exp(best.x);
  r.s_min = psd_at(r.g_opt);

  const double edge = 1e-6;
  const double f_lo = psd_at(bounds.g_min), f_hi = psd_at(bounds.g_max);
  if (best.x - lo < edge || hi - best.x < edge) {
    r.monotone = true;
    r.g_opt = f_hi <= f_lo ? bounds.g_max : bounds.g_min;
    r.s_min = std::min(f_lo, f_hi);
  }
  r.p_opt = coupling_to_power(r.g_opt, drive, p.kappa);
  return r;
}

// ---------------------------------------------------------------------------
// Sub-SQL bandwidth

struct FrequencyInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_refined = false;  // false when the run starts at the grid edge
  bool hi_refined = false;
};

// Runs of the grid where the cancellation PSD (cancellation-regime approximation)
// lies below the SQL, with interior endpoints refined by bisection on the
// sign of S_cqnc - S_sql.
inline std::vector<FrequencyInterval> sub_sql_bandwidth(const SystemParams& p, double g, double gain,
                                                        std::span<const double> grid) {
  if (grid.empty()) throw DomainError("sub_sql_bandwidth: empty frequency grid");
  SystemParams q = p;
  q.g = g;
  q.g_prime = g;
  q.G_opa = gain;

  auto excess = [&](double w) { return cqnc_psd_approx(w, q, 0.0).value - sql_psd(w, q).value; };
  auto refine = [&](double below_w, double above_w) {
    // below_w: excess < 0, above_w: excess >= 0
    double a = below_w, b = above_w;
    for (int i = 0; i < 200 && std::abs(b - a) > 1e-15 * std::abs(a); ++i) {
      const double mid = 0.5 * (a + b);
      (excess(mid) < 0.0 ? a : b) = mid;
    }
    return 0.5 * (a + b);
  };

  std::vector<FrequencyInterval> out;
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = excess(grid[i]);

  std::size_t i = 0;
  while (i < grid.size()) {
    if (values[i] >= 0.0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid.size() && values[j + 1] < 0.0) ++j;
    FrequencyInterval iv;
    iv.lo = grid[i];
    iv.hi = grid[j];
    if (i > 0) {
      iv.lo = refine(grid[i], grid[i - 1]);
      iv.lo_refined = true;
    }
    if (j + 1 < grid.size()) {
      iv.hi = refine(grid[j], grid[j + 1]);
      iv.hi_refined = true;
    }
    out.push_back(iv);
    i = j + 1;
  }
  return out;
}

}  // namespace cqnc
