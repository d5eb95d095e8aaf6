#pragma once

#include <span>
#include <vector>

#include "irm/execution.hpp"
#include "irm/mdp.hpp"

namespace irm::kernels {

// irm_evaluate(unroll(mdp, policy_i), spec).root_value for every i.
std::vector<double> score_policies(const FiniteHorizonMdp& mdp, const IrmSpec& spec,
                                   std::span<const Policy> policies, const UnrollOptions& unroll_options,
                                   Execution execution);

// Index of the smallest score, lowest index among ties.
std::size_t argmin_first(std::span<const double> scores);

struct PaymentComparison {
  double icte_a;
  double icte_b;
};

/// Evaluates the A and B payment trees under all-CTE(alpha) at every
/// (lambda_i, alpha_j); result is row-major with lambda as the row index.
std::vector<PaymentComparison> payment_grid(const ScenarioTree& tree_a, const ScenarioTree& tree_b,
                                            std::span<const double> lambdas,
                                            std::span<const double> alphas, Execution execution);

struct Lemma1Point {
  double x;
  double a;
  double b;
  double gamma;
  double erm_x;
  double erm_y;
  double gap() const { return erm_x - erm_y; }
};

// ERM of a X + b and a Y + b over the Cartesian product of the grids,
// ordered x-major, then a, b, gamma.
std::vector<Lemma1Point> lemma1_sweep(std::span<const double> xs, std::span<const double> as,
                                      std::span<const double> bs, std::span<const double> gammas,
                                      Execution execution);

}  // namespace irm::kernels
