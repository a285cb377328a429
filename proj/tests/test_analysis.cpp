#include <chrono>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "levycouple/analysis.hpp"
#include "levycouple/error.hpp"

using namespace levycouple;

namespace {

// g(x) = int_x^1 (r - x) / eta(r) dr by independent quadrature.
double quadrature_g(const SymmetricLevyMeasure& m, double x) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double r) { return (r - x) / m.eta(r); }, x, 1.0);
}

double stable_one_g(double x) { return 1.0 - x + x * std::log(x); }

}  // namespace

TEST(ConditionIntegral, StableValues) {
  for (double alpha : {0.5, 1.0, 1.5}) {
    for (double c : {1.0, 2.5}) {
      const auto v = condition_integral(SymmetricLevyMeasure::stable(alpha, c));
      ASSERT_EQ(v.status, ConditionStatus::kFinite);
      const double expected = (2.0 - alpha) / (alpha * c);
      EXPECT_NEAR(*v.value, expected, 1e-9 * expected);
      EXPECT_NEAR(v.local_exponent_at_0, 1.0 - alpha, 1e-6);
    }
  }
}

TEST(ConditionIntegral, PowerLogFiniteNearCriticalExponent) {
  for (double eps : {0.25, 0.5, 1.0}) {
    const auto v = condition_integral(SymmetricLevyMeasure::power_log(eps));
    ASSERT_EQ(v.status, ConditionStatus::kFinite) << v.diagnostics;
    EXPECT_NEAR(*v.value, 1.0 / eps, 1e-4 / eps);
  }
}

TEST(ConditionIntegral, QuadraticEtaDiverges) {
  const auto v = condition_integral(SymmetricLevyMeasure::truncated_stable(0.0, 2.0, 1.0));
  EXPECT_EQ(v.status, ConditionStatus::kDivergent);
  EXPECT_FALSE(v.value.has_value());
}

TEST(ConditionIntegral, TruncatedStableMatchesStableBelowCutoff) {
  // eta agrees with Stable(1, 3) on (0, 1], so the integral over (0, 1] does too.
  const auto v = condition_integral(SymmetricLevyMeasure::truncated_stable(1.0, 3.0, 2.0));
  ASSERT_EQ(v.status, ConditionStatus::kFinite);
  EXPECT_NEAR(*v.value, 1.0 / 3.0, 1e-9);
}

TEST(ConditionIntegral, TabulatedIsInconclusive) {
  std::vector<std::pair<double, double>> rows;
  for (double r = 1e-3; r < 1.0; r *= 2.0) rows.emplace_back(r, 1.0 / r);
  rows.emplace_back(2.0, 0.0);
  const auto v = condition_integral(SymmetricLevyMeasure::tabulated(rows, 1e-3));
  EXPECT_EQ(v.status, ConditionStatus::kInconclusive);
  EXPECT_FALSE(v.diagnostics.empty());
}

TEST(ConditionIntegral, RunsWellUnderASecond) {
  const auto start = std::chrono::steady_clock::now();
  condition_integral(SymmetricLevyMeasure::power_log(0.5));
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(s, 1.0);
}

TEST(SatoCondition, StableHoldsAtItsOwnIndexOnly) {
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  const auto at = sato_condition(m, 1.0);
  EXPECT_TRUE(at.holds);
  EXPECT_NEAR(at.liminf_estimate, 1.0, 1e-12);
  EXPECT_TRUE(sato_condition(m, 0.5).holds);  // eta / r^1.5 grows
  EXPECT_FALSE(sato_condition(m, 1.5).holds);
}

TEST(SatoCondition, PowerLogFailsForEveryIndex) {
  const auto m = SymmetricLevyMeasure::power_log(0.5);
  for (double alpha : {0.25, 0.5, 1.0, 1.5}) {
    const auto v = sato_condition(m, alpha);
    EXPECT_FALSE(v.holds) << alpha;
    EXPECT_LT(v.trend, 0.0);
  }
  EXPECT_THROW(sato_condition(m, 0.0), DomainError);
  EXPECT_THROW(sato_condition(m, 2.0), DomainError);
}

TEST(GTable, StableOneClosedForm) {
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  const GTable g = build_g(m, 2001);
  EXPECT_NEAR(g.g_at_zero(), 1.0, 1e-9);
  EXPECT_NEAR(g.g(0.0), 1.0, 1e-9);
  for (double x : {1e-12, 1e-7, 0.01, 0.5, 0.77, 1.0}) {
    EXPECT_NEAR(g.g(x), stable_one_g(x), 1e-9) << x;
    EXPECT_NEAR(g.gprime(x), std::log(x), 1e-8) << x;
  }
  EXPECT_NEAR(g.g(1e-14), 1.0, 1e-9);  // below the grid
}

TEST(GTable, StableThreeHalves) {
  const GTable g = build_g(SymmetricLevyMeasure::stable(1.5, 1.0), 1001);
  for (double x : {1e-9, 0.03, 0.4}) {
    const double expected = (1.0 - std::pow(x, 1.5)) / 3.0 - x * (1.0 - std::sqrt(x));
    EXPECT_NEAR(g.g(x), expected, 1e-8) << x;
    EXPECT_NEAR(g.gprime(x), -(1.0 - std::sqrt(x)), 1e-9) << x;  // eta = 2 sqrt(r)
  }
  EXPECT_NEAR(g.g_at_zero(), 1.0 / 3.0, 1e-9);
}

TEST(GTable, PowerLogAgainstQuadrature) {
  for (double eps : {0.5, 1.0}) {
    const auto m = SymmetricLevyMeasure::power_log(eps);
    const GTable g = build_g(m, 2001);
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double x : {1e-10, 1e-4, 0.02, 0.5}) {
      EXPECT_NEAR(g.g(x), quadrature_g(m, x), 1e-8) << eps << " " << x;
      const double ref = -ts.integrate([&](double r) { return 1.0 / m.eta(r); }, x, 1.0);
      EXPECT_NEAR(g.gprime(x), ref, 1e-7 * std::abs(ref)) << eps << " " << x;
    }
    EXPECT_NEAR(g.g_at_zero(), 1.0 / eps, 1e-4 / eps);
  }
}

TEST(GTable, MonotoneAndConvexOnGrid) {
  const GTable g = build_g(SymmetricLevyMeasure::power_log(0.5), 501);
  const auto& gv = g.g_values();
  const auto& gp = g.gprime_values();
  for (std::size_t i = 1; i < gv.size(); ++i) {
    EXPECT_LE(gv[i], gv[i - 1]);
    EXPECT_GE(gp[i], gp[i - 1]);
    EXPECT_GT(g.curvature_values()[i], 0.0);
  }
  EXPECT_EQ(gv.back(), 0.0);
  EXPECT_EQ(g.x_min(), kGTableMinX);
}

TEST(GTable, SecondDifferencesMatchInverseEta) {
  const auto m = SymmetricLevyMeasure::power_log(0.5);
  const GTable g = build_g(m, 2001);
  for (double x : {1e-6, 1e-3, 0.1, 0.5}) {
    const double h = 1e-3 * x;
    const double second = (g.g(x + h) - 2.0 * g.g(x) + g.g(x - h)) / (h * h);
    EXPECT_NEAR(second * m.eta(x), 1.0, 0.01) << x;
  }
}

TEST(GTable, RefusesDivergentMeasures) {
  EXPECT_THROW(build_g(SymmetricLevyMeasure::truncated_stable(0.0, 2.0, 1.0), 101),
               DomainError);
}

TEST(ConvexityGap, NonnegativeOnGridPairs) {
  for (const auto& m : {SymmetricLevyMeasure::stable(1.0, 1.0),
                        SymmetricLevyMeasure::power_log(0.5)}) {
    const GTable g = build_g(m, 2001);
    double worst = INFINITY;
    for (int i = 1; i <= 40; ++i) {
      for (int j = 1; j <= 40; ++j) {
        const double x = std::pow(10.0, -8.0 * (i - 1) / 39.0);
        const double y = std::pow(10.0, -8.0 * (j - 1) / 39.0);
        worst = std::min(worst, convexity_gap(g, x, y, m));
      }
    }
    EXPECT_GE(worst, -1e-9) << m.id();
  }
}

TEST(ConvexityGap, ExactValueForStableOne) {
  // g(y) - g(x) - g'(x)(y - x) - (y - x)^2 / (2x) for y < x.
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  const GTable g = build_g(m, 2001);
  const double x = 0.5, y = 0.2;
  const double expected = stable_one_g(y) - stable_one_g(x) - std::log(x) * (y - x) -
                          (y - x) * (y - x) / (2.0 * x);
  EXPECT_NEAR(convexity_gap(g, x, y, m), expected, 1e-8);
  EXPECT_THROW(convexity_gap(g, 1e-13, 0.5, m), DomainError);
  EXPECT_THROW(convexity_gap(g, 0.5, 1.5, m), DomainError);
}
