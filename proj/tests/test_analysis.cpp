#include <gtest/gtest.h>

#include "cqnc/analysis.hpp"
#include "support.hpp"

using namespace cqnc;
using test::rel;

TEST(Analysis, Grids) {
  const auto lin = linear_grid(0.5, 1.5, 11);
  ASSERT_EQ(lin.size(), 11u);
  EXPECT_EQ(lin.front(), 0.5);
  EXPECT_EQ(lin.back(), 1.5);
  EXPECT_NEAR(lin[5], 1.0, 1e-15);
  const auto lg = log_grid(1e-2, 1e2, 5);
  ASSERT_EQ(lg.size(), 5u);
  EXPECT_NEAR(lg[2], 1.0, 1e-15);
  EXPECT_EQ(lg.back(), 1e2);
  EXPECT_EQ(log_grid(3.0, 3.0, 1).size(), 1u);
  EXPECT_THROW(log_grid(0.0, 1.0, 3), DomainError);
  EXPECT_THROW(linear_grid(0.0, 1.0, 0), DomainError);

  const SystemParams p = test::reference();
  const auto grid = default_frequency_grid(p);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  EXPECT_EQ(std::adjacent_find(grid.begin(), grid.end()), grid.end());
  EXPECT_GE(grid.size(), 2001u + 300u);
  EXPECT_EQ(grid.front(), 1e-2 * p.omega_m);
}

TEST(Analysis, CqncCheckAtReference) {
  const SystemParams p = test::reference();
  const auto grid = default_frequency_grid(p);
  const auto r = cqnc_check(p, grid);
  EXPECT_TRUE(r.ideal);
  EXPECT_EQ(r.coupling_mismatch, 0.0);
  EXPECT_EQ(r.damping_mismatch, 0.0);
  EXPECT_LT(rel(r.residual_tolerance, 3e-4), 1e-12);
  EXPECT_LE(r.susceptibility_residual, r.residual_tolerance);
}

TEST(Analysis, CqncCheckDetectsMismatch) {
  const SystemParams base = test::reference();
  const auto grid = default_frequency_grid(base);
  SystemParams p = base;
  p.Gamma = 2.0 * p.gamma_m;
  auto r = cqnc_check(p, grid);
  EXPECT_FALSE(r.ideal);
  EXPECT_LT(rel(r.damping_mismatch, 1.0), 1e-15);
  p = base;
  p.g_prime = 0.99 * p.g;
  r = cqnc_check(p, grid);
  EXPECT_FALSE(r.ideal);
  EXPECT_LT(rel(r.coupling_mismatch, 0.01), 1e-12);
  // the surrogate cancels for any damping once the couplings agree
  p = base;
  p.Gamma = 3.0 * p.gamma_m;
  EXPECT_EQ(cqnc_check(p, grid, {}, AtomicResponse::ideal_negative_mass).susceptibility_residual, 0.0);
}

TEST(Analysis, SqlCouplingClosedForms) {
  SystemParams p = test::reference();
  EXPECT_LT(rel(g_sql_analytic(p.omega_m, p), 0.5 * std::sqrt(p.kappa * p.gamma_m)), 1e-14);
  p.G_opa = 0.1 * p.kappa;
  for (double x : {0.1, 1.0, 3.0})
    EXPECT_LT(rel(g_sq_theta0(x * p.omega_m, p) / g_sql_analytic(x * p.omega_m, p), 0.6), 1e-14);
}

TEST(Analysis, GoldenSection) {
  auto f = [](double x) { return (x - 1.234) * (x - 1.234) + 2.0; };
  const auto r = golden_section_minimize(f, -10.0, 10.0, 1e-10);
  EXPECT_NEAR(r.x, 1.234, 1e-7);  // flat minimum: sqrt(eps) in x
  EXPECT_NEAR(r.f, 2.0, 1e-15);
  EXPECT_GT(r.iterations, 10);
}

TEST(Analysis, StandardOptimumReachesSql) {
  const SystemParams p = test::reference();
  const DriveParams d = test::reference_drive();
  const CouplingBounds bounds{1.0, 1e9};
  for (int i = 0; i < 25; ++i) {
    const double w = p.omega_m * std::pow(10.0, -1.0 + 2.0 * i / 24.0);
    const auto r = optimize_coupling(w, p, d, CouplingModel::standard, bounds);
    EXPECT_FALSE(r.monotone);
    EXPECT_LT(std::abs(r.s_min * p.gamma_m * std::abs(chi_m(w, p)) - 1.0), 1e-6) << w;
    EXPECT_LT(rel(r.g_opt, g_sql_analytic(w, p)), 1e-6);
    EXPECT_LT(rel(r.p_opt, coupling_to_power(r.g_opt, d, p.kappa)), 1e-15);
  }
}

TEST(Analysis, OptimumIsStationary) {
  const SystemParams p = test::reference();
  const auto r = optimize_coupling(0.8 * p.omega_m, p, test::reference_drive(), CouplingModel::standard, {1.0, 1e9});
  for (double step : {1e-3, -1e-3}) {
    SystemParams q = p;
    q.g = r.g_opt * (1.0 + step);
    EXPECT_GE(standard_psd(0.8 * p.omega_m, q, 0.0).value, r.s_min);
  }
}

TEST(Analysis, SqueezedOptimumOfFullModel) {
  // Minimizing the first-principles PSD without atoms moves the optimum to
  // |kappa - 4G| / kappa times g_SQL for omega << kappa.
  SystemParams p = test::reference();
  p.g_prime = 0.0;
  const double w = 0.01 * p.omega_m;
  auto best_g = [&](double gain) {
    SystemParams q = p;
    q.G_opa = gain;
    auto f = [&](double log_g) {
      q.g = std::exp(log_g);
      return added_noise_psd_exact(w, q, 0.0).value;
    };
    return std::exp(golden_section_minimize(f, std::log(1.0), std::log(1e9), 1e-10).x);
  };
  EXPECT_NEAR(best_g(0.1 * p.kappa) / best_g(0.0), 0.6, 1e-4);
  EXPECT_LT(rel(best_g(0.0), g_sql_analytic(w, p)), 1e-4);
}

TEST(Analysis, CqncOptimumIsMonotone) {
  const SystemParams p = test::reference();
  const auto r = optimize_coupling(p.omega_m, p, test::reference_drive(), CouplingModel::cqnc, {1.0, 1e9});
  EXPECT_TRUE(r.monotone);
  EXPECT_EQ(r.g_opt, 1e9);
}

TEST(Analysis, TemperatureMovesOptimumValueOnly) {
  SystemParams p = test::reference();
  const auto cold = optimize_coupling(p.omega_m, p, test::reference_drive(), CouplingModel::standard, {1.0, 1e9});
  p.temperature = 1.0;
  const auto warm = optimize_coupling(p.omega_m, p, test::reference_drive(), CouplingModel::standard, {1.0, 1e9});
  EXPECT_LT(rel(warm.g_opt, cold.g_opt), 1e-5);
  EXPECT_LT(rel(warm.s_min - cold.s_min, thermal_weight(1.0, p.omega_m)), 1e-9);
}

TEST(Analysis, OptimizerRejectsBadBounds) {
  const SystemParams p = test::reference();
  EXPECT_THROW(optimize_coupling(p.omega_m, p, test::reference_drive(), CouplingModel::standard, {0.0, 1.0}),
               DomainError);
  EXPECT_THROW(optimize_coupling(p.omega_m, p, test::reference_drive(), CouplingModel::standard, {2.0, 1.0}),
               DomainError);
}

TEST(Analysis, SubSqlBandsSitOnBothSidesOfResonance) {
  const SystemParams p = test::reference();
  const double g = 10.0 * g_sql_analytic(p.omega_m, p);
  const auto grid = default_frequency_grid(p);
  const auto bands = sub_sql_bandwidth(p, g, 0.2 * p.kappa, grid);
  ASSERT_EQ(bands.size(), 2u);
  EXPECT_LT(bands[0].hi, p.omega_m);
  EXPECT_GT(bands[1].lo, p.omega_m);
  SystemParams q = p;
  q.g = q.g_prime = g;
  q.G_opa = 0.2 * p.kappa;
  EXPECT_FALSE(bands[0].lo_refined);
  ASSERT_TRUE(bands[0].hi_refined && bands[1].lo_refined);
  EXPECT_NEAR(cqnc_psd_approx(bands[0].hi, q, 0.0).value / sql_psd(bands[0].hi, q).value, 1.0, 1e-9);
  EXPECT_NEAR(cqnc_psd_approx(bands[1].lo, q, 0.0).value / sql_psd(bands[1].lo, q).value, 1.0, 1e-9);
  // more gain, more bandwidth
  const auto narrow = sub_sql_bandwidth(p, g, 0.0, grid);
  auto width = [](const std::vector<FrequencyInterval>& v) {
    double s = 0.0;
    for (const auto& b : v) s += b.hi - b.lo;
    return s;
  };
  EXPECT_GT(width(bands), width(narrow));
}
