#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "irm/error.hpp"
#include "irm/models.hpp"
#include "irm/random_models.hpp"
#include "irm/risk_measures.hpp"
#include "irm/scenario_tree.hpp"
#include "support/oracles.hpp"

using namespace irm;

namespace {

// Recursion over the node list written independently of irm_evaluate. Payoff
// nodes are discretized, so only discrete trees are exact.
double tree_oracle(const ScenarioTree& tree, const std::vector<RiskFunctional>& per_stage, double lambda,
                   NodeId id = ScenarioTree::kRoot) {
  const auto& node = tree.node(id);
  const auto& rf = per_stage[static_cast<std::size_t>(node.stage)];
  if (node.payoff) return oracle::apply_functional(rf, oracle::discretize(*node.payoff, 20000));
  if (node.children.empty()) return 0.0;
  std::vector<oracle::Atom> atoms;
  for (const auto& e : node.children)
    atoms.push_back({e.probability, e.cost + lambda * tree_oracle(tree, per_stage, lambda, e.child)});
  return oracle::apply_functional(rf, atoms);
}

// All root-to-leaf (probability, discounted total) pairs.
void path_totals(const ScenarioTree& tree, double lambda, NodeId id, double p, double total, double scale,
                 std::vector<oracle::Atom>& out) {
  const auto& node = tree.node(id);
  if (node.children.empty()) {
    out.push_back({p, total});
    return;
  }
  for (const auto& e : node.children)
    path_totals(tree, lambda, e.child, p * e.probability, total + scale * e.cost, scale * lambda, out);
}

RiskFunctional random_functional(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (rng() % 5) {
    case 0: return RiskFunctional::expectation();
    case 1: return RiskFunctional::entropic(unit(rng) * 2.0 - 1.0);
    case 2: return RiskFunctional::value_at_risk(0.05 + 0.9 * unit(rng));
    case 3: return RiskFunctional::cte(0.95 * unit(rng));
    default: return RiskFunctional::mean_cte_blend(unit(rng), 0.9 * unit(rng));
  }
}

}  // namespace

TEST(IrmEvaluate, TravelTrees) {
  const auto cte5 = IrmSpec::uniform(RiskFunctional::cte(0.5), 2);
  EXPECT_NEAR(irm_evaluate(models::travel_tree_p(), cte5, 1.0).root_value, 21.0, 1e-12);
  EXPECT_NEAR(irm_evaluate(models::travel_tree_q(), cte5, 1.0).root_value, 22.0, 1e-12);
  const auto cte8 = IrmSpec::uniform(RiskFunctional::cte(0.8), 2);
  EXPECT_NEAR(irm_evaluate(models::travel_tree_p(), cte8, 1.0).root_value, 42.0, 1e-12);
  EXPECT_NEAR(irm_evaluate(models::travel_tree_q(), cte8, 1.0).root_value, 34.0, 1e-12);
  const auto e = IrmSpec::uniform(RiskFunctional::expectation(), 2);
  EXPECT_NEAR(irm_evaluate(models::travel_tree_p(), e, 1.0).root_value, 14.0, 1e-12);
}

TEST(IrmEvaluate, NodeValuesOfTravelTreeP) {
  const auto ev = irm_evaluate(models::travel_tree_p(), IrmSpec::uniform(RiskFunctional::cte(0.5), 2), 1.0);
  ASSERT_EQ(ev.node_values.size(), 3u);
  EXPECT_NEAR(ev.node_values[1], 10.0, 1e-12);
  EXPECT_NEAR(ev.node_values[2], 65.0, 1e-12);
}

TEST(IrmEvaluate, PaymentBClosedForm) {
  // The root splits into "pay every day" and "never pay", so the recursion
  // reduces to p / (1 - alpha) times the discounted stream when p < 1 - alpha.
  const models::PaymentPlan plan;
  const double p = plan.b_probability();
  for (double lambda : {0.5, 0.9, 0.95, 1.0}) {
    for (double alpha : {0.5, 0.9}) {
      const double expected = p / (1.0 - alpha) * plan.amount * models::discounted_days(lambda, plan.days);
      const auto spec = IrmSpec::uniform(RiskFunctional::cte(alpha), plan.days);
      EXPECT_NEAR(irm_evaluate(models::payment_b_tree(plan), spec, lambda).root_value, expected, 1e-9 * expected);
    }
  }
  const auto spec = IrmSpec::uniform(RiskFunctional::cte(0.9), plan.days);
  EXPECT_EQ(irm_evaluate(models::payment_a_tree(plan), spec, 0.95).root_value, 1000.0);
}

TEST(IrmEvaluate, DeterministicPathIsDiscountedSum) {
  const std::vector<double> costs{3.0, -1.0, 4.0, 1.5};
  const auto tree = ScenarioTree::path(costs);
  for (double lambda : {0.0, 0.5, 1.0}) {
    double expected = 0.0;
    for (std::size_t n = 0; n < costs.size(); ++n) expected += std::pow(lambda, static_cast<double>(n)) * costs[n];
    for (const auto& rf : {RiskFunctional::expectation(), RiskFunctional::entropic(0.7), RiskFunctional::cte(0.3),
                           RiskFunctional::value_at_risk(0.9)})
      EXPECT_NEAR(irm_evaluate(tree, IrmSpec::uniform(rf, 4), lambda).root_value, expected, 1e-12);
  }
}

TEST(IrmEvaluate, RejectsMismatchedSpecAndDiscount) {
  const auto tree = models::travel_tree_p();
  EXPECT_THROW(irm_evaluate(tree, IrmSpec::uniform(RiskFunctional::cte(0.5), 3), 1.0), InputError);
  EXPECT_THROW(irm_evaluate(tree, IrmSpec::uniform(RiskFunctional::cte(0.5), 2), 1.2), InputError);
  EXPECT_THROW(irm_evaluate(tree, IrmSpec::uniform(RiskFunctional::cte(0.5), 2), -0.1), InputError);
}

TEST(IrmEvaluateProperty, MatchesTreeOracle) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const auto tree = random_tree(rng);
    std::vector<RiskFunctional> stages;
    for (int n = 0; n < tree.horizon(); ++n) stages.push_back(random_functional(rng));
    const double lambda = unit(rng);
    const double got = irm_evaluate(tree, IrmSpec{stages}, lambda).root_value;
    EXPECT_TRUE(oracle::close(got, tree_oracle(tree, stages, lambda), 1e-9)) << "trial " << t;
  }
}

TEST(IrmEvaluate, PayoffMatchesDiscretizedOracle) {
  for (double alpha : {0.0, 0.3, 0.5, 0.8, 0.95}) {
    const std::vector<RiskFunctional> s(2, RiskFunctional::cte(alpha));
    EXPECT_NEAR(irm_evaluate(models::travel_tree_p(), IrmSpec{s}, 1.0).root_value,
                tree_oracle(models::travel_tree_p(), s, 1.0), 1e-6);
    EXPECT_NEAR(irm_evaluate(models::travel_tree_q(), IrmSpec{s}, 1.0).root_value,
                tree_oracle(models::travel_tree_q(), s, 1.0), 1e-6);
  }
}

// ---------------------------------------------------------------------------
// discounted totals

TEST(DiscountedTotal, PaymentBUndiscounted) {
  const auto total = discounted_total_distribution(models::payment_b_tree(), 1.0);
  EXPECT_NEAR(cdf(total, 0.0), 0.9525, 1e-12);
  EXPECT_NEAR(cdf(total, 19999.0), 0.9525, 1e-12);
  EXPECT_DOUBLE_EQ(essential_sup(total), 20000.0);
  EXPECT_NEAR(mean(total), 950.0, 1e-9);
}

TEST(DiscountedTotal, PathsAndDiscounting) {
  EXPECT_DOUBLE_EQ(mean(discounted_total_distribution(ScenarioTree::path({1.0, 2.0}), 0.5)), 2.0);
  EXPECT_DOUBLE_EQ(mean(discounted_total_distribution(ScenarioTree::path({1.0, 2.0}), 0.9)), 2.8);
  EXPECT_DOUBLE_EQ(mean(discounted_total_distribution(ScenarioTree::path({1.0, 2.0}), 0.0)), 1.0);
}

TEST(DiscountedTotal, KeepsPayoffSegments) {
  const auto total = discounted_total_distribution(models::travel_tree_p(), 1.0);
  EXPECT_NEAR(mean(total), 14.0, 1e-12);
  EXPECT_NEAR(cte(0.5, total), 18.0, 1e-12);
}

TEST(DiscountedTotalProperty, MatchesPathEnumeration) {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const auto tree = random_tree(rng);
    const double lambda = unit(rng);
    std::vector<oracle::Atom> atoms;
    path_totals(tree, lambda, ScenarioTree::kRoot, 1.0, 0.0, 1.0, atoms);
    const auto total = discounted_total_distribution(tree, lambda);
    const double alpha = unit(rng) * 0.99;
    EXPECT_TRUE(oracle::close(mean(total), oracle::mean(atoms), 1e-9));
    EXPECT_TRUE(oracle::close(cte(alpha, total), oracle::cte_sorted(alpha, oracle::sorted(atoms)), 1e-9));
  }
}

TEST(DiscountedTotalProperty, MergingDoesNotChangeTheLaw) {
  std::mt19937_64 rng(56);
  TotalOptions raw;
  raw.merge_atoms = false;
  for (int t = 0; t < 200; ++t) {
    const auto tree = random_tree(rng);
    const auto merged = discounted_total_distribution(tree, 1.0);
    const auto unmerged = discounted_total_distribution(tree, 1.0, raw);
    EXPECT_LE(merged.size(), unmerged.size());
    for (double alpha : {0.0, 0.25, 0.5, 0.9})
      EXPECT_TRUE(oracle::close(cte(alpha, merged), cte(alpha, unmerged), 1e-12));
    EXPECT_TRUE(oracle::close(erm(0.3, merged), erm(0.3, unmerged), 1e-12));
  }
}

TEST(DiscountedTotal, PathCapIsEnforced) {
  TotalOptions o;
  o.path_cap = 1;
  EXPECT_THROW(discounted_total_distribution(models::payment_b_tree(), 1.0, o), ResourceError);
}

TEST(Rmd, Examples) {
  EXPECT_NEAR(rmd(models::payment_b_tree(), RiskFunctional::cte(0.5), 1.0), 1900.0, 1e-9);
  EXPECT_NEAR(rmd(models::travel_tree_p(), RiskFunctional::cte(0.5), 1.0), 18.0, 1e-12);
  EXPECT_NEAR(rmd(models::travel_tree_q(), RiskFunctional::cte(0.5), 1.0), 22.0 + 4.0 / 9.0, 1e-12);
}

TEST(Eud, LinearIsMean) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto tree = random_tree(rng);
    EXPECT_TRUE(oracle::close(eud(tree, DisutilityFunction::linear(), 0.8),
                              mean(discounted_total_distribution(tree, 0.8)), 1e-12));
  }
}

// ---------------------------------------------------------------------------
// recursiveness

TEST(RecursivenessProperty, ExpectationAndErmAgreeWithFlatAtLambdaOne) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const auto tree = random_tree(rng);
    const double gamma = (t % 3 == 0) ? -1.0 : (t % 3 == 1 ? 0.5 : 1.0);
    for (const auto& rf : {RiskFunctional::expectation(), RiskFunctional::entropic(gamma)}) {
      const double nested = irm_evaluate(tree, IrmSpec::uniform(rf, tree.horizon()), 1.0).root_value;
      EXPECT_TRUE(oracle::close(nested, rmd(tree, rf, 1.0), 1e-9)) << "trial " << t << " " << rf.describe();
    }
  }
}

TEST(Recursiveness, ErmDisagreesUnderDiscounting) {
  const auto erm = RiskFunctional::entropic(0.001);
  for (const auto& tree : {models::payment_x_tree(), models::payment_y_tree()}) {
    const double nested = irm_evaluate(tree, IrmSpec::uniform(erm, tree.horizon()), 0.92).root_value;
    EXPECT_GT(std::abs(nested - rmd(tree, erm, 0.92)), 1e-6);
  }
  const auto tx = models::payment_x_tree();
  EXPECT_NEAR(rmd(tx, erm, 0.92), 373.48, 0.01);
  EXPECT_NEAR(irm_evaluate(tx, IrmSpec::uniform(erm, tx.horizon()), 0.92).root_value, 382.48, 0.01);
}

TEST(Recursiveness, CteIsNotRecursive) {
  const auto cte5 = RiskFunctional::cte(0.5);
  EXPECT_NEAR(irm_evaluate(models::travel_tree_p(), IrmSpec::uniform(cte5, 2), 1.0).root_value, 21.0, 1e-12);
  EXPECT_NEAR(rmd(models::travel_tree_p(), cte5, 1.0), 18.0, 1e-12);
}

TEST(RecursivenessProperty, ConstantCostsAreFixedPoints) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> c(-5.0, 5.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> costs(1 + rng() % 5);
    for (auto& x : costs) x = c(rng);
    const auto tree = ScenarioTree::path(costs);
    double sum = 0.0;
    for (double x : costs) sum += x;
    const auto rf = random_functional(rng);
    EXPECT_NEAR(irm_evaluate(tree, IrmSpec::uniform(rf, tree.horizon()), 1.0).root_value, sum, 1e-9);
  }
}

TEST(RecursivenessProperty, RootValueDecomposesOverFirstStage) {
  // W_0 = rho_0[C_0 + lambda W_1(child)] with the children's values taken
  // from the same evaluation.
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    const auto tree = random_tree(rng);
    const auto rf = random_functional(rng);
    const auto ev = irm_evaluate(tree, IrmSpec::uniform(rf, tree.horizon()), 0.7);
    std::vector<oracle::Atom> atoms;
    for (const auto& e : tree.node(ScenarioTree::kRoot).children)
      atoms.push_back({e.probability, e.cost + 0.7 * ev.node_values[e.child]});
    EXPECT_TRUE(oracle::close(ev.root_value, oracle::apply_functional(rf, atoms), 1e-9));
  }
}

// ---------------------------------------------------------------------------
// preference schedules

TEST(Preference, ErmFlipsBetweenDelayedPayments) {
  const std::vector<DelayedOption> xy{{models::payment_x(), models::kDelayX}, {models::payment_y(), models::kDelayY}};
  const auto s = preference_over_time(RiskFunctional::entropic(0.001), 0.92, xy);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].preferred, 1u);
  EXPECT_EQ(s[1].preferred, 0u);
  EXPECT_NEAR(s[0].values[0], 373.4838611, 1e-6);
  EXPECT_NEAR(s[0].values[1], 367.0483101, 1e-6);
  EXPECT_NEAR(s[1].values[0], 415.7352218, 1e-6);
  EXPECT_NEAR(s[1].values[1], 425.0414524, 1e-6);
  EXPECT_TRUE(preference_flips(s));

  const auto m = preference_over_time(RiskFunctional::expectation(), 0.92, xy);
  EXPECT_FALSE(preference_flips(m));
  EXPECT_NEAR(m[0].values[0], 276.0, 1e-9);
  EXPECT_NEAR(m[0].values[1], 169.28, 1e-9);
  EXPECT_NEAR(m[1].values[0], 300.0, 1e-9);
  EXPECT_NEAR(m[1].values[1], 184.0, 1e-9);
}

TEST(Preference, Errors) {
  const std::vector<DelayedOption> xy{{models::payment_x(), 1}, {models::payment_y(), 2}};
  EXPECT_THROW(preference_at(RiskFunctional::expectation(), 0.9, xy, 2), InputError);
  EXPECT_THROW(preference_at(RiskFunctional::expectation(), 0.9, {}, 0), InputError);
  EXPECT_THROW(preference_over_time(RiskFunctional::expectation(), 0.9, {{models::payment_x(), 0}}), InputError);
}

// ---------------------------------------------------------------------------
// builder

TEST(Builder, Validation) {
  {
    ScenarioTree::Builder b;
    b.add_child(ScenarioTree::kRoot, 0.5, 1.0);
    b.add_child(ScenarioTree::kRoot, 0.4, 1.0);
    EXPECT_THROW(std::move(b).build(1), InputError);
  }
  {
    ScenarioTree::Builder b;
    const auto c = b.add_child(ScenarioTree::kRoot, 0.5, 1.0);
    b.add_child(ScenarioTree::kRoot, 0.5, 1.0);
    b.add_child(c, 1.0, 2.0);
    EXPECT_THROW(std::move(b).build(2), InputError);
  }
  {
    ScenarioTree::Builder b;
    const auto c = b.add_child(ScenarioTree::kRoot, 1.0, 1.0);
    EXPECT_THROW(b.set_payoff(ScenarioTree::kRoot, MixedDistribution::point(1.0)), InputError);
    b.set_payoff(c, MixedDistribution::point(1.0));
    EXPECT_THROW(b.add_child(c, 1.0, 0.0), InputError);
    EXPECT_THROW(std::move(b).build(1), InputError);
  }
  {
    ScenarioTree::Builder b;
    EXPECT_THROW(b.add_child(7, 1.0, 0.0), InputError);
    EXPECT_THROW(std::move(b).build(0), InputError);
  }
}

TEST(Builder, PathCount) {
  EXPECT_EQ(models::payment_b_tree().path_count(), 2u);
  EXPECT_EQ(models::travel_tree_p().path_count(), 2u);
  EXPECT_EQ(ScenarioTree::path({1.0, 2.0, 3.0}).path_count(), 1u);
}
