#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "irm/error.hpp"
#include "irm/kernels.hpp"
#include "irm/models.hpp"
#include "irm/random_models.hpp"

using namespace irm;

namespace {

std::vector<double> grid(int steps) {
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) out.push_back((i + 0.5) / steps);
  return out;
}

}  // namespace

TEST(Kernels, ScorePoliciesSerialEqualsOpenMp) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto mdp = random_mdp(rng);
    std::vector<Policy> policies;
    for (int k = 0; k < 30; ++k) {
      Policy p(mdp);
      for (int n = 0; n < mdp.horizon(); ++n)
        for (std::size_t s = 0; s < mdp.state_count(n); ++s) p.set(n, s, rng() % mdp.actions().size());
      policies.push_back(p);
    }
    const auto spec = IrmSpec::uniform(RiskFunctional::cte(0.6), mdp.horizon());
    const auto a = kernels::score_policies(mdp, spec, policies, {}, Execution::kSerial);
    const auto b = kernels::score_policies(mdp, spec, policies, {}, Execution::kOpenMp);
    EXPECT_EQ(a, b);
    for (std::size_t i = 0; i < policies.size(); ++i)
      EXPECT_DOUBLE_EQ(a[i], irm_evaluate(unroll(mdp, policies[i]), spec, mdp.discount()).root_value);
  }
}

TEST(Kernels, ScorePoliciesPropagatesErrors) {
  const auto mdp = models::payments_mdp(0.9);
  std::vector<Policy> policies(8, Policy(mdp));  // every entry unset
  const auto spec = IrmSpec::uniform(RiskFunctional::cte(0.6), mdp.horizon());
  EXPECT_THROW(kernels::score_policies(mdp, spec, policies, {}, Execution::kOpenMp), InputError);
  EXPECT_THROW(kernels::score_policies(mdp, spec, policies, {}, Execution::kSerial), InputError);
}

TEST(Kernels, ArgminFirstKeepsEarliestTie) {
  const std::vector<double> s{3.0, 1.0, 2.0, 1.0};
  EXPECT_EQ(kernels::argmin_first(s), 1u);
  const std::vector<double> one{7.0};
  EXPECT_EQ(kernels::argmin_first(one), 0u);
}

TEST(Kernels, PaymentGridSerialEqualsOpenMp) {
  const auto lambdas = grid(17);
  const auto alphas = grid(13);
  const auto ta = models::payment_a_tree();
  const auto tb = models::payment_b_tree();
  const auto a = kernels::payment_grid(ta, tb, lambdas, alphas, Execution::kSerial);
  const auto b = kernels::payment_grid(ta, tb, lambdas, alphas, Execution::kOpenMp);
  ASSERT_EQ(a.size(), lambdas.size() * alphas.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].icte_a, b[i].icte_a);
    EXPECT_EQ(a[i].icte_b, b[i].icte_b);
  }
  // Row-major by lambda.
  const auto spec = IrmSpec::uniform(RiskFunctional::cte(alphas[4]), 20);
  EXPECT_DOUBLE_EQ(a[3 * alphas.size() + 4].icte_b, irm_evaluate(tb, spec, lambdas[3]).root_value);
}

TEST(Kernels, Lemma1SweepSerialEqualsOpenMpAndOrder) {
  const std::vector<double> xs{0.5, 3.0};
  const std::vector<double> as{1.0, 20.0};
  const std::vector<double> bs{0.0, 20.0};
  const std::vector<double> gs{-1.0, 0.0, 0.5};
  const auto a = kernels::lemma1_sweep(xs, as, bs, gs, Execution::kSerial);
  const auto b = kernels::lemma1_sweep(xs, as, bs, gs, Execution::kOpenMp);
  ASSERT_EQ(a.size(), 24u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].erm_x, b[i].erm_x);
    EXPECT_EQ(a[i].erm_y, b[i].erm_y);
  }
  EXPECT_EQ(a[1].gamma, 0.0);
  EXPECT_EQ(a[3].b, 20.0);
  EXPECT_EQ(a[12].x, 3.0);
  // x = 3, a = 20, b = 20, gamma = 0: both are the travel-time means.
  EXPECT_NEAR(a[12 + 6 + 3 + 1].erm_x, 14.0, 1e-12);
  EXPECT_NEAR(a[12 + 6 + 3 + 1].erm_y, 14.0, 1e-12);
}
