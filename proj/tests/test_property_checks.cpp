#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "irm/error.hpp"
#include "irm/property_checks.hpp"
#include "irm/risk_measures.hpp"
#include "irm/studies.hpp"

using namespace irm;

TEST(Monotonicity, PassesForMonotoneFunctionals) {
  for (const auto& rf : {RiskFunctional::expectation(), RiskFunctional::entropic(0.7), RiskFunctional::entropic(-0.4),
                         RiskFunctional::cte(0.5), RiskFunctional::value_at_risk(0.8),
                         RiskFunctional::mean_cte_blend(0.3, 0.9)}) {
    const auto r = check_monotonic(rf, 2000, 1);
    EXPECT_TRUE(r.passed) << rf.describe();
    EXPECT_EQ(r.trials_run, 2000u);
    EXPECT_FALSE(r.counterexample.has_value());
    EXPECT_EQ(r.property, "monotonicity");
  }
}

TEST(Monotonicity, VarianceFailsWithCounterexample) {
  const auto r = check_monotonic(studies::variance, "variance", 2000, 1);
  ASSERT_FALSE(r.passed);
  ASSERT_TRUE(r.counterexample.has_value());
  const auto& c = *r.counterexample;
  ASSERT_TRUE(c.y.has_value());
  // The reported pair really violates the property.
  EXPECT_LT(studies::variance(c.x), studies::variance(*c.y) - 1e-9);
  EXPECT_DOUBLE_EQ(c.lhs, studies::variance(c.x));
  EXPECT_DOUBLE_EQ(c.rhs, studies::variance(*c.y));
  EXPECT_LT(r.trials_run, r.trials);
}

TEST(Monotonicity, ReproducibleBySeed) {
  const auto a = check_monotonic(studies::variance, "variance", 500, 9);
  const auto b = check_monotonic(studies::variance, "variance", 500, 9);
  EXPECT_EQ(a.trials_run, b.trials_run);
  EXPECT_EQ(a.counterexample->lhs, b.counterexample->lhs);
}

TEST(TranslationInvariance, PassesForCoherentAndEntropic) {
  for (const auto& rf : {RiskFunctional::expectation(), RiskFunctional::entropic(0.3), RiskFunctional::cte(0.9),
                         RiskFunctional::value_at_risk(0.5)})
    EXPECT_TRUE(check_translation_invariance(rf, 2000, 2).passed) << rf.describe();
  // Var(X + b) = Var(X), so the shift is not passed through.
  EXPECT_FALSE(check_translation_invariance(studies::variance, "variance", 200, 2).passed);
}

TEST(TranslationInvariance, FailsForSecondMoment) {
  const Functional second = [](const MixedDistribution& d) { return studies::variance(d) + mean(d) * mean(d); };
  const auto r = check_translation_invariance(second, "second moment", 200, 3);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_NE(r.counterexample->parameter, 0.0);
}

TEST(PositiveHomogeneity, PassesForMeanVarCte) {
  for (const auto& rf : {RiskFunctional::expectation(), RiskFunctional::value_at_risk(0.75), RiskFunctional::cte(0.9)})
    EXPECT_TRUE(check_positive_homogeneity(rf, 2000, 4).passed) << rf.describe();
}

TEST(PositiveHomogeneity, FailsForErm) {
  const auto r = check_positive_homogeneity(RiskFunctional::entropic(0.3), 2000, 4);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_GT(r.counterexample->parameter, 0.0);

  const auto fixed = studies::erm_homogeneity_counterexample();
  EXPECT_FALSE(fixed.passed);
  ASSERT_TRUE(fixed.counterexample.has_value());
  EXPECT_DOUBLE_EQ(fixed.counterexample->parameter, 2.0);
  // ERM_1(2 d) = ln((1 + e^2) / 2) against 2 ln((1 + e) / 2).
  EXPECT_NEAR(fixed.counterexample->lhs, std::log((1.0 + std::exp(2.0)) / 2.0), 1e-12);
  EXPECT_NEAR(fixed.counterexample->rhs, 2.0 * std::log((1.0 + std::exp(1.0)) / 2.0), 1e-12);
}

TEST(Composite, MonotoneCombinationsPass) {
  EXPECT_TRUE(check_composite_monotonic({RiskFunctional::expectation(), RiskFunctional::cte(0.5)}, {0.7, 0.3}, 2000, 5)
                  .passed);
  EXPECT_TRUE(check_composite_monotonic({RiskFunctional::entropic(0.5), RiskFunctional::value_at_risk(0.9),
                                         RiskFunctional::cte(0.2)},
                                        {0.2, 0.5, 0.3}, 2000, 6)
                  .passed);
}

TEST(Composite, RejectsBadCoefficients) {
  EXPECT_THROW(check_composite_monotonic({RiskFunctional::expectation(), RiskFunctional::cte(0.5)}, {1.5, -0.5}, 10, 1),
               InputError);
  EXPECT_THROW(check_composite_monotonic({RiskFunctional::expectation()}, {0.5, 0.5}, 10, 1), InputError);
  EXPECT_THROW(check_composite_monotonic({RiskFunctional::expectation(), RiskFunctional::cte(0.5)}, {0.5, 0.6}, 10, 1),
               InputError);
}

TEST(Suite, EveryEntryAsExpected) {
  const auto suite = studies::property_suite(1000, 42);
  ASSERT_FALSE(suite.empty());
  for (const auto& e : suite) EXPECT_TRUE(e.as_expected()) << e.report.property << " " << e.report.functional;
}
