#include <gtest/gtest.h>

#include <cmath>

#include "irm/models.hpp"
#include "irm/studies.hpp"

using namespace irm;

TEST(Boundary, SpotValues) {
  EXPECT_NEAR(models::region_boundary(1.0), 0.05, 1e-12);
  EXPECT_NEAR(models::region_boundary(0.9), 1.0 - 0.0475 * (1.0 - std::pow(0.9, 20)) / 0.1, 1e-12);
  EXPECT_NEAR(models::region_boundary(0.9), 0.58275, 1e-5);
  EXPECT_NEAR(models::region_boundary(0.0), 0.9525, 1e-12);
  EXPECT_NEAR(models::discounted_days(1.0, 20), 20.0, 1e-12);
}

TEST(Payments, DefaultReport) {
  const auto r = studies::payments_report(0.95, 0.9);
  EXPECT_EQ(r.icte_a, 1000.0);
  EXPECT_NEAR(r.icte_b, 0.0475 / 0.1 * 1000.0 * (1.0 - std::pow(0.95, 20)) / 0.05, 1e-9);
  EXPECT_EQ(r.preferred, "A");
  EXPECT_TRUE(r.caption_condition);
  EXPECT_NEAR(r.deu_linear_a, 1000.0, 1e-9);
  ASSERT_EQ(r.deu.size(), 3u);
  for (const auto& row : r.deu) EXPECT_GT(row.deu_a, row.deu_b);
}

TEST(Payments, OutsideRegionPrefersB) {
  const auto r = studies::payments_report(1.0, 0.04);
  EXPECT_EQ(r.preferred, "B");
  EXPECT_FALSE(r.caption_condition);
  EXPECT_FALSE(r.condition_ii);
  EXPECT_NEAR(studies::payments_report(1.0, 0.9).deu_linear_b, 950.0, 1e-9);
}

TEST(Region, MatchesClosedFormWithinOneCell) {
  const auto g = studies::region_grid(100, 100);
  EXPECT_EQ(g.far_disagreements, 0u);
  EXPECT_EQ(g.cells.size(), 100u);
  EXPECT_EQ(g.lambda_axis.front(), 0.005);
  const auto serial = studies::region_grid(40, 30, {}, Execution::kSerial);
  const auto parallel = studies::region_grid(40, 30, {}, Execution::kOpenMp);
  EXPECT_EQ(serial.cells, parallel.cells);
}

TEST(Xy, FlipUnderErmOnly) {
  const auto r = studies::xy_report(0.001, 0.92);
  EXPECT_TRUE(r.erm_flips);
  EXPECT_FALSE(r.mean_flips);
  EXPECT_EQ(r.dp_choice, "Y");
  EXPECT_NEAR(r.dp_value, 367.048, 1e-3);
  EXPECT_GT(std::abs(r.erm_x.flat - r.erm_x.recursive), 1e-6);
  EXPECT_GT(std::abs(r.erm_y.flat - r.erm_y.recursive), 1e-6);
}

TEST(Paths, PublishedNumbersAndCurves) {
  const auto r = studies::paths_report({0.5, 0.8}, studies::default_paths_gammas());
  EXPECT_DOUBLE_EQ(r.mean_p, 14.0);
  EXPECT_DOUBLE_EQ(r.mean_q, 14.0);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_NEAR(r.rows[0].cte_p, 18.0, 1e-12);
  EXPECT_NEAR(r.rows[0].icte_p, 21.0, 1e-12);
  EXPECT_NEAR(r.rows[0].icte_q, 22.0, 1e-12);
  EXPECT_NEAR(r.rows[1].cte_p, 30.0, 1e-12);
  EXPECT_NEAR(r.rows[1].cte_q, 34.0 + 4.0 / 9.0, 1e-12);
  EXPECT_TRUE(r.ordering_holds);
  EXPECT_TRUE(r.monotone_in_gamma);
  for (const auto& pt : r.curve)
    if (pt.gamma == 0.0) {
      EXPECT_DOUBLE_EQ(pt.erm_p, 14.0);
      EXPECT_DOUBLE_EQ(pt.erm_q, 14.0);
    }
}

TEST(ErmOrderingGrid, DefaultGridHasNoViolations) {
  const auto r = studies::lemma1_report();
  EXPECT_GE(r.points.size(), 750u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_TRUE(r.affine_matches_paths);
}
