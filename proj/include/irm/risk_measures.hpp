#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "irm/distribution.hpp"

namespace irm {

double mean(const MixedDistribution& dist);

/// Entropic risk measure (1/gamma) ln E[exp(gamma Y)].
///
/// gamma == 0 returns the mean. Evaluation shifts every exponent by the
/// largest one before summing, so |gamma| * |support| well beyond 700 is
/// fine; a non-finite result raises std::overflow_error.
double erm(double gamma, const MixedDistribution& dist);

// min { y : Pr(Y <= y) >= alpha }, alpha in [0, 1).
double value_at_risk(double alpha, const MixedDistribution& dist);

/// Conditional tail expectation with atom-aware tail weighting:
///
///   CTE_alpha[Y] = ((1 - beta) E[Y | Y > V] + (beta - alpha) V) / (1 - alpha)
///
/// with V = value_at_risk(alpha) and beta = Pr(Y <= V). When beta == 1 the
/// first term vanishes and the result is V.
double cte(double alpha, const MixedDistribution& dist);

// E[Y ; Y > threshold], the partial expectation above a threshold.
double upper_partial_expectation(const MixedDistribution& dist, double threshold);

// ---------------------------------------------------------------------------
// Risk functionals

struct Expectation {};
struct EntropicRisk {
  double gamma;
};
struct ValueAtRisk {
  double alpha;
};
struct ConditionalTailExpectation {
  double alpha;
};
struct CompositeTerm;
// Nonnegative affine combination sum_j c_j rho_j with sum_j c_j = 1.
struct Composite {
  std::vector<CompositeTerm> terms;
};

class RiskFunctional {
 public:
  using Kind = std::variant<Expectation, EntropicRisk, ValueAtRisk,
                            ConditionalTailExpectation, Composite>;

  static RiskFunctional expectation();
  static RiskFunctional entropic(double gamma);
  static RiskFunctional value_at_risk(double alpha);
  static RiskFunctional cte(double alpha);
  static RiskFunctional composite(std::vector<CompositeTerm> terms);
  // (1 - beta) E + beta CTE_alpha.
  static RiskFunctional mean_cte_blend(double beta, double alpha);

  const Kind& kind() const { return kind_; }

  bool translation_invariant() const;
  bool positive_homogeneous() const;
  // True if any (nested) term is an ERM with gamma != 0.
  bool involves_entropic() const;

  std::string describe() const;

 private:
  explicit RiskFunctional(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

struct CompositeTerm {
  double coefficient;
  RiskFunctional functional;
};

double evaluate(const RiskFunctional& rf, const MixedDistribution& dist);

/// Evaluates rf on a finite discrete law without building a
/// MixedDistribution. `atoms` is used as scratch and is reordered.
///
/// Weights must already form a probability vector (not rechecked here).
double evaluate_discrete(const RiskFunctional& rf, std::span<WeightedValue> atoms);

// ---------------------------------------------------------------------------
// Disutility functions

// exp(gamma c) - 1, gamma > 0.
struct ExponentialDisutility {
  double gamma;
};
struct LinearDisutility {};
// sign(c) |c|^k, k >= 1.
struct PowerDisutility {
  double k;
};
// Linear interpolation between knots, linear extrapolation past the ends.
struct PiecewiseLinearDisutility {
  std::vector<std::pair<double, double>> knots;
};

class DisutilityFunction {
 public:
  using Kind = std::variant<ExponentialDisutility, LinearDisutility, PowerDisutility,
                            PiecewiseLinearDisutility>;

  static DisutilityFunction exponential(double gamma);
  static DisutilityFunction linear();
  static DisutilityFunction power(double k);
  // Knots must be strictly increasing in both coordinates and pass through
  // the origin.
  static DisutilityFunction piecewise_linear(std::vector<std::pair<double, double>> knots);

  double operator()(double cost) const;
  // E[u(Y)], closed form for every kind.
  double expected(const MixedDistribution& dist) const;

  const Kind& kind() const { return kind_; }

 private:
  explicit DisutilityFunction(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

// sum_n lambda^n E[u(C_n)].
double deu(const DisutilityFunction& u, double lambda,
           std::span<const MixedDistribution> marginals);

}  // namespace irm
