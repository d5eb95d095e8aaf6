#pragma once

#include <utility>
#include <vector>

#include "irm/distribution.hpp"
#include "irm/mdp.hpp"
#include "irm/scenario_tree.hpp"

// The concrete stochastic models used by the reproduction studies: the A/B
// payment plans, the X/Y delayed payments, the P/Q travel times and the
// parametric pair behind the ERM ordering result.
namespace irm::models {

// ---------------------------------------------------------------------------
// Travel times. Traffic is normal w.p. 0.9 and busy w.p. 0.1.

// P: 10 if normal, U[20, 80] if busy.
MixedDistribution travel_time_p();
// Q: U[0, 20] if normal, 50 if busy.
MixedDistribution travel_time_q();

// Traffic revealed at stage 1; the travel time is the stage-1 payoff.
ScenarioTree travel_tree_p();
ScenarioTree travel_tree_q();

// ---------------------------------------------------------------------------
// X: 1000 paid after one year w.p. 0.3.  Y: 2000 paid after two years w.p. 0.1.

MixedDistribution payment_x();
MixedDistribution payment_y();
inline constexpr int kDelayX = 1;
inline constexpr int kDelayY = 2;

// Trees in which nothing is revealed during the first year.
ScenarioTree payment_x_tree();
ScenarioTree payment_y_tree();

// Stage-0 choice between X and Y, randomness resolved on the first
// transition; horizon 3.
FiniteHorizonMdp xy_mdp(double lambda);

// ---------------------------------------------------------------------------
// A: pay `amount` on day 0.  B: pay `amount` on each of `days` days with
// probability (1 - epsilon) / days, else nothing.

struct PaymentPlan {
  int days = 20;
  double amount = 1000.0;
  double epsilon = 0.05;

  double b_probability() const { return (1.0 - epsilon) / days; }
};

ScenarioTree payment_a_tree(const PaymentPlan& plan = {});
ScenarioTree payment_b_tree(const PaymentPlan& plan = {});

// Per-day cost marginals C_0 ... C_{days-1}.
std::vector<MixedDistribution> payment_a_marginals(const PaymentPlan& plan = {});
std::vector<MixedDistribution> payment_b_marginals(const PaymentPlan& plan = {});

// Stage-0 choice between A and B (actions "A", "B"); horizon = days.
FiniteHorizonMdp payments_mdp(double lambda, const PaymentPlan& plan = {});

// sum_{n < days} lambda^n.
double discounted_days(double lambda, int days);

// Region boundary alpha*(lambda) = 1 - p_B sum_{n < days} lambda^n: all-CTE
// prefers A iff alpha > alpha*.
double region_boundary(double lambda, const PaymentPlan& plan = {});

// Same bound with the geometric sum taken over days - 1 terms and divided by
// days - 1, i.e. the formula read with N = days - 1 in place of days.
double region_boundary_shifted(double lambda, const PaymentPlan& plan = {});

// ---------------------------------------------------------------------------
// X = -1/2 w.p. p, U[0, x] otherwise;  Y = U[-1, 0] w.p. p, x/2 otherwise;
// p = x^2 / (1 + x^2). For x = 3, (20 X + 20, 20 Y + 20) = (P, Q).

std::pair<MixedDistribution, MixedDistribution> erm_ordering_pair(double x);

}  // namespace irm::models
