#include "irm/models.hpp"

#include <cmath>

#include "irm/error.hpp"

namespace irm::models {
namespace {

constexpr double kNormal = 0.9;
constexpr double kBusy = 0.1;

ScenarioTree travel_tree(MixedDistribution normal, MixedDistribution busy) {
  ScenarioTree::Builder b;
  b.set_payoff(b.add_child(ScenarioTree::kRoot, kNormal, 0.0), std::move(normal));
  b.set_payoff(b.add_child(ScenarioTree::kRoot, kBusy, 0.0), std::move(busy));
  return std::move(b).build(2);
}

// Nothing happens on the first transition; the payment is decided on the
// next one and paid `delay` periods from now.
ScenarioTree delayed_payment_tree(double amount, double probability, int delay) {
  ScenarioTree::Builder b;
  const NodeId quiet = b.add_child(ScenarioTree::kRoot, 1.0, 0.0);
  NodeId pay = b.add_child(quiet, probability, delay == 1 ? amount : 0.0);
  NodeId none = b.add_child(quiet, 1.0 - probability, 0.0);
  for (int n = 2; n < delay + 1; ++n) {
    pay = b.add_child(pay, 1.0, n == delay ? amount : 0.0);
    none = b.add_child(none, 1.0, 0.0);
  }
  return std::move(b).build(delay + 1);
}

}  // namespace

MixedDistribution travel_time_p() {
  return MixedDistribution({{kNormal, PointMass{10.0}}, {kBusy, UniformSegment{20.0, 80.0}}});
}

MixedDistribution travel_time_q() {
  return MixedDistribution({{kNormal, UniformSegment{0.0, 20.0}}, {kBusy, PointMass{50.0}}});
}

ScenarioTree travel_tree_p() {
  return travel_tree(MixedDistribution::point(10.0), MixedDistribution::uniform(20.0, 80.0));
}

ScenarioTree travel_tree_q() {
  return travel_tree(MixedDistribution::uniform(0.0, 20.0), MixedDistribution::point(50.0));
}

MixedDistribution payment_x() { return MixedDistribution({{0.3, PointMass{1000.0}}, {0.7, PointMass{0.0}}}); }

MixedDistribution payment_y() { return MixedDistribution({{0.1, PointMass{2000.0}}, {0.9, PointMass{0.0}}}); }

ScenarioTree payment_x_tree() { return delayed_payment_tree(1000.0, 0.3, kDelayX); }

ScenarioTree payment_y_tree() { return delayed_payment_tree(2000.0, 0.1, kDelayY); }

FiniteHorizonMdp xy_mdp(double lambda) {
  FiniteHorizonMdp::Builder b(3, {"X", "Y"});
  const auto start = b.add_state(0, "start");
  const auto x_pay = b.add_state(1, "x-pay");
  const auto x_none = b.add_state(1, "x-none");
  const auto y_pay = b.add_state(1, "y-pay");
  const auto y_none = b.add_state(1, "y-none");
  const auto x_done = b.add_state(2, "x-done");
  const auto y_due = b.add_state(2, "y-due");
  const auto quiet = b.add_state(2, "quiet");
  const auto end = b.add_state(3, "end");
  b.set_initial(start);
  b.set_discount(lambda);

  b.add_transition(0, start, 0, x_pay, 0.3, 0.0);
  b.add_transition(0, start, 0, x_none, 0.7, 0.0);
  b.add_transition(0, start, 1, y_pay, 0.1, 0.0);
  b.add_transition(0, start, 1, y_none, 0.9, 0.0);
  for (std::size_t a = 0; a < 2; ++a) {
    b.add_transition(1, x_pay, a, x_done, 1.0, 1000.0);
    b.add_transition(1, x_none, a, quiet, 1.0, 0.0);
    b.add_transition(1, y_pay, a, y_due, 1.0, 0.0);
    b.add_transition(1, y_none, a, quiet, 1.0, 0.0);
    b.add_transition(2, x_done, a, end, 1.0, 0.0);
    b.add_transition(2, y_due, a, end, 1.0, 2000.0);
    b.add_transition(2, quiet, a, end, 1.0, 0.0);
  }
  return std::move(b).build();
}

ScenarioTree payment_a_tree(const PaymentPlan& plan) {
  std::vector<double> costs(static_cast<std::size_t>(plan.days), 0.0);
  costs.front() = plan.amount;
  return ScenarioTree::path(costs);
}

ScenarioTree payment_b_tree(const PaymentPlan& plan) {
  const double p = plan.b_probability();
  ScenarioTree::Builder b;
  NodeId pay = b.add_child(ScenarioTree::kRoot, p, plan.amount);
  NodeId none = b.add_child(ScenarioTree::kRoot, 1.0 - p, 0.0);
  for (int n = 1; n < plan.days; ++n) {
    pay = b.add_child(pay, 1.0, plan.amount);
    none = b.add_child(none, 1.0, 0.0);
  }
  return std::move(b).build(plan.days);
}

std::vector<MixedDistribution> payment_a_marginals(const PaymentPlan& plan) {
  std::vector<MixedDistribution> out(static_cast<std::size_t>(plan.days), MixedDistribution::point(0.0));
  out.front() = MixedDistribution::point(plan.amount);
  return out;
}

std::vector<MixedDistribution> payment_b_marginals(const PaymentPlan& plan) {
  const double p = plan.b_probability();
  return std::vector<MixedDistribution>(
      static_cast<std::size_t>(plan.days),
      MixedDistribution({{p, PointMass{plan.amount}}, {1.0 - p, PointMass{0.0}}}));
}

FiniteHorizonMdp payments_mdp(double lambda, const PaymentPlan& plan) {
  const int days = plan.days;
  FiniteHorizonMdp::Builder b(days, {"A", "B"});
  const auto start = b.add_state(0, "start");
  b.set_initial(start);
  b.set_discount(lambda);
  // Stages >= 1: "paid" (A chosen), "pay" (B, payment due), "free" (B, none).
  for (int n = 1; n <= days; ++n) {
    b.add_state(n, "paid");
    b.add_state(n, "pay");
    b.add_state(n, "free");
  }
  const double p = plan.b_probability();
  b.add_transition(0, start, 0, 0, 1.0, plan.amount);
  b.add_transition(0, start, 1, 1, p, plan.amount);
  b.add_transition(0, start, 1, 2, 1.0 - p, 0.0);
  for (int n = 1; n < days; ++n) {
    for (std::size_t a = 0; a < 2; ++a) {
      b.add_transition(n, 0, a, 0, 1.0, 0.0);
      b.add_transition(n, 1, a, 1, 1.0, plan.amount);
      b.add_transition(n, 2, a, 2, 1.0, 0.0);
    }
  }
  return std::move(b).build();
}

double discounted_days(double lambda, int days) {
  double total = 0.0;
  double d = 1.0;
  for (int n = 0; n < days; ++n) {
    total += d;
    d *= lambda;
  }
  return total;
}

double region_boundary(double lambda, const PaymentPlan& plan) {
  return 1.0 - plan.b_probability() * discounted_days(lambda, plan.days);
}

double region_boundary_shifted(double lambda, const PaymentPlan& plan) {
  const int n = plan.days - 1;
  if (n < 1) throw InputError("region_boundary_shifted: need at least two days");
  return 1.0 - (1.0 - plan.epsilon) * discounted_days(lambda, n) / n;
}

std::pair<MixedDistribution, MixedDistribution> erm_ordering_pair(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InputError("erm_ordering_pair: x must be > 0");
  const double p = x * x / (1.0 + x * x);
  MixedDistribution first({{p, PointMass{-0.5}}, {1.0 - p, UniformSegment{0.0, x}}});
  MixedDistribution second({{p, UniformSegment{-1.0, 0.0}}, {1.0 - p, PointMass{x / 2.0}}});
  return {std::move(first), std::move(second)};
}

}  // namespace irm::models
