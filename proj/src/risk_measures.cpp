#include "irm/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "irm/detail/overloaded.hpp"
#include "irm/error.hpp"

namespace irm {
namespace {

using detail::Overloaded;

// Below this |gamma| * range the centered expm1/log1p form is used for ERM;
// above it the max-shifted form.
constexpr double kCenteredErmLimit = 1.0;

void require_alpha(double alpha, const char* who) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << who << ": alpha must lie in [0, 1), got " << alpha;
    throw InputError(msg.str());
  }
}

double component_mean(const Outcome& o) {
  return std::visit(Overloaded{[](const PointMass& p) { return p.value; },
                               [](const UniformSegment& s) { return 0.5 * (s.lo + s.hi); }},
                    o);
}

// (e^b - e^a) / ((b - a) e^{max(a, b)}), without cancellation.
double scaled_segment_mgf(double a, double b) {
  const double d = std::abs(b - a);
  if (d == 0.0) return 1.0;
  return -std::expm1(-d) / d;
}

// sinh(h)/h - 1 for |h| <= 1/2 by its Taylor series (terms fall below 1e-17
// by the eighth).
double sinhc_minus_one(double h) {
  const double h2 = h * h;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 8; ++k) {
    term *= h2 / ((2.0 * k) * (2.0 * k + 1.0));
    sum += term;
  }
  return sum;
}

// E[e^X] - 1 for X uniform between a and b.
//
// Narrow segments use e^m sinh(h)/h - 1 = expm1(m) (1 + s) + s with midpoint
// m, half-width h and s = sinh(h)/h - 1, which has no cancellation. Wide ones
// use (g(b) - g(a))/(b - a) with g(x) = expm1(x) - x.
double segment_mgf_minus_one(double a, double b) {
  const double d = b - a;
  if (d == 0.0) return std::expm1(a);
  const double h = 0.5 * d;
  if (std::abs(h) <= 0.5) {
    const double s = sinhc_minus_one(h);
    return std::expm1(0.5 * (a + b)) * (1.0 + s) + s;
  }
  const double g_b = std::expm1(b) - b;
  const double g_a = std::expm1(a) - a;
  return (g_b - g_a) / d;
}

struct Breakpoints {
  std::vector<double> xs;
};

Breakpoints breakpoints(const MixedDistribution& dist) {
  Breakpoints bp;
  for (const auto& c : dist.components()) {
    if (c.weight <= 0.0) continue;
    std::visit(Overloaded{[&](const PointMass& p) { bp.xs.push_back(p.value); },
                          [&](const UniformSegment& s) {
                            bp.xs.push_back(s.lo);
                            bp.xs.push_back(s.hi);
                          }},
               c.outcome);
  }
  std::sort(bp.xs.begin(), bp.xs.end());
  bp.xs.erase(std::unique(bp.xs.begin(), bp.xs.end()), bp.xs.end());
  return bp;
}

// Pr(Y < y).
double cdf_left(const MixedDistribution& dist, double y) {
  double f = 0.0;
  for (const auto& c : dist.components()) {
    f += c.weight * std::visit(Overloaded{[&](const PointMass& p) { return p.value < y ? 1.0 : 0.0; },
                                          [&](const UniformSegment& s) {
                                            return std::clamp((y - s.lo) / (s.hi - s.lo), 0.0, 1.0);
                                          }},
                               c.outcome);
  }
  return f;
}

double discrete_mean(std::span<const WeightedValue> atoms) {
  double m = 0.0;
  for (const auto& a : atoms) m += a.weight * a.value;
  return m;
}

double discrete_erm(double gamma, std::span<const WeightedValue> atoms) {
  if (gamma == 0.0) return discrete_mean(atoms);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& a : atoms) {
    if (a.weight <= 0.0) continue;
    lo = std::min(lo, a.value);
    hi = std::max(hi, a.value);
  }
  double result;
  if (std::abs(gamma) * (hi - lo) <= kCenteredErmLimit) {
    const double c = discrete_mean(atoms);
    double t = 0.0;
    for (const auto& a : atoms) t += a.weight * std::expm1(gamma * (a.value - c));
    result = c + std::log1p(t) / gamma;
  } else {
    const double z = gamma > 0.0 ? gamma * hi : gamma * lo;
    double s = 0.0;
    for (const auto& a : atoms) {
      if (a.weight > 0.0) s += a.weight * std::exp(gamma * a.value - z);
    }
    result = (z + std::log(s)) / gamma;
  }
  if (!std::isfinite(result)) throw std::overflow_error("erm: result is not finite");
  return result;
}

// Atoms must be sorted by value.
double discrete_var(double alpha, std::span<const WeightedValue> atoms) {
  double cum = 0.0;
  std::size_t i = 0;
  double last = atoms.empty() ? 0.0 : atoms.back().value;
  while (i < atoms.size()) {
    const double v = atoms[i].value;
    double group = 0.0;
    while (i < atoms.size() && atoms[i].value == v) group += atoms[i++].weight;
    if (group <= 0.0) continue;
    cum += group;
    last = v;
    if (cum >= alpha) return v;
  }
  return last;
}

// (tail + (beta - alpha) V) / (1 - alpha) rewritten as V + E[(X - V)^+] / (1 - alpha);
// the two agree exactly in real arithmetic and the second returns V itself
// when nothing lies above it.
double discrete_cte(double alpha, std::span<const WeightedValue> atoms) {
  const double v = discrete_var(alpha, atoms);
  double excess = 0.0;
  for (const auto& a : atoms)
    if (a.value > v) excess += a.weight * (a.value - v);
  return v + excess / (1.0 - alpha);
}

double evaluate_sorted(const RiskFunctional& rf, std::span<WeightedValue> atoms) {
  return std::visit(
      Overloaded{[&](const Expectation&) { return discrete_mean(atoms); },
                 [&](const EntropicRisk& e) { return discrete_erm(e.gamma, atoms); },
                 [&](const ValueAtRisk& v) { return discrete_var(v.alpha, atoms); },
                 [&](const ConditionalTailExpectation& c) { return discrete_cte(c.alpha, atoms); },
                 [&](const Composite& comp) {
                   double total = 0.0;
                   for (const auto& t : comp.terms)
                     total += t.coefficient * evaluate_sorted(t.functional, atoms);
                   return total;
                 }},
      rf.kind());
}

}  // namespace

double mean(const MixedDistribution& dist) {
  double m = 0.0;
  for (const auto& c : dist.components()) m += c.weight * component_mean(c.outcome);
  return m;
}

double erm(double gamma, const MixedDistribution& dist) {
  if (gamma == 0.0) return mean(dist);
  const double lo = essential_inf(dist);
  const double hi = essential_sup(dist);
  double result;
  if (std::abs(gamma) * (hi - lo) <= kCenteredErmLimit) {
    const double c = mean(dist);
    double t = 0.0;
    for (const auto& comp : dist.components()) {
      t += comp.weight *
           std::visit(Overloaded{[&](const PointMass& p) { return std::expm1(gamma * (p.value - c)); },
                                 [&](const UniformSegment& s) {
                                   return segment_mgf_minus_one(gamma * (s.lo - c), gamma * (s.hi - c));
                                 }},
                      comp.outcome);
    }
    result = c + std::log1p(t) / gamma;
  } else {
    const double z = gamma > 0.0 ? gamma * hi : gamma * lo;
    double s = 0.0;
    for (const auto& comp : dist.components()) {
      if (comp.weight <= 0.0) continue;
      s += comp.weight *
           std::visit(Overloaded{[&](const PointMass& p) { return std::exp(gamma * p.value - z); },
                                 [&](const UniformSegment& seg) {
                                   const double a = gamma * seg.lo;
                                   const double b = gamma * seg.hi;
                                   return std::exp(std::max(a, b) - z) * scaled_segment_mgf(a, b);
                                 }},
                      comp.outcome);
    }
    result = (z + std::log(s)) / gamma;
  }
  if (!std::isfinite(result)) {
    std::ostringstream msg;
    msg << "erm: non-finite result for gamma = " << gamma << " on support [" << lo << ", " << hi << "]";
    throw std::overflow_error(msg.str());
  }
  return result;
}

double value_at_risk(double alpha, const MixedDistribution& dist) {
  require_alpha(alpha, "value_at_risk");
  const auto bp = breakpoints(dist);
  const auto& xs = bp.xs;
  // First breakpoint with F(x) >= alpha.
  std::size_t lo = 0;
  std::size_t hi = xs.size() - 1;
  if (cdf(dist, xs[hi]) < alpha) return xs[hi];
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (cdf(dist, xs[mid]) >= alpha)
      hi = mid;
    else
      lo = mid + 1;
  }
  if (lo == 0) return xs[0];
  // F is linear on [x_{k-1}, x_k); the crossing may lie strictly inside.
  const double left = cdf_left(dist, xs[lo]);
  if (left >= alpha) {
    const double f0 = cdf(dist, xs[lo - 1]);
    const double frac = (alpha - f0) / (left - f0);
    return xs[lo - 1] + frac * (xs[lo] - xs[lo - 1]);
  }
  return xs[lo];
}

double upper_partial_expectation(const MixedDistribution& dist, double threshold) {
  double tail = 0.0;
  for (const auto& c : dist.components()) {
    tail += c.weight * std::visit(Overloaded{[&](const PointMass& p) {
                                               return p.value > threshold ? p.value : 0.0;
                                             },
                                             [&](const UniformSegment& s) {
                                               if (s.hi <= threshold) return 0.0;
                                               const double l = std::max(s.lo, threshold);
                                               return (s.hi - l) / (s.hi - s.lo) * 0.5 * (s.hi + l);
                                             }},
                                  c.outcome);
  }
  return tail;
}

double cte(double alpha, const MixedDistribution& dist) {
  require_alpha(alpha, "cte");
  const double v = value_at_risk(alpha, dist);
  double excess = 0.0;
  for (const auto& c : dist.components()) {
    excess += c.weight * std::visit(detail::Overloaded{
                                        [&](const PointMass& p) { return std::max(p.value - v, 0.0); },
                                        [&](const UniformSegment& s) {
                                          if (s.hi <= v) return 0.0;
                                          const double l = std::max(s.lo, v);
                                          return (s.hi - l) / (s.hi - s.lo) * (0.5 * (s.hi + l) - v);
                                        }},
                                    c.outcome);
  }
  return v + excess / (1.0 - alpha);
}

// ---------------------------------------------------------------------------

RiskFunctional RiskFunctional::expectation() { return RiskFunctional(Expectation{}); }

RiskFunctional RiskFunctional::entropic(double gamma) {
  if (!std::isfinite(gamma)) throw InputError("erm: gamma must be finite");
  return RiskFunctional(EntropicRisk{gamma});
}

RiskFunctional RiskFunctional::value_at_risk(double alpha) {
  require_alpha(alpha, "var");
  return RiskFunctional(ValueAtRisk{alpha});
}

RiskFunctional RiskFunctional::cte(double alpha) {
  require_alpha(alpha, "cte");
  return RiskFunctional(ConditionalTailExpectation{alpha});
}

RiskFunctional RiskFunctional::composite(std::vector<CompositeTerm> terms) {
  if (terms.empty()) throw InputError("composite: no terms");
  double total = 0.0;
  for (const auto& t : terms) {
    if (!std::isfinite(t.coefficient) || t.coefficient < 0.0) {
      std::ostringstream msg;
      msg << "composite: coefficient " << t.coefficient << " must be finite and >= 0";
      throw InputError(msg.str());
    }
    total += t.coefficient;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "composite: coefficients sum to " << total << ", expected 1";
    throw InputError(msg.str());
  }
  return RiskFunctional(Composite{std::move(terms)});
}

RiskFunctional RiskFunctional::mean_cte_blend(double beta, double alpha) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InputError("mean_cte_blend: beta must lie in [0, 1]");
  return composite({{1.0 - beta, expectation()}, {beta, cte(alpha)}});
}

bool RiskFunctional::translation_invariant() const {
  // All supported kinds are translation invariant.
  return true;
}

bool RiskFunctional::positive_homogeneous() const { return !involves_entropic(); }

bool RiskFunctional::involves_entropic() const {
  return std::visit(Overloaded{[](const EntropicRisk& e) { return e.gamma != 0.0; },
                               [](const Composite& c) {
                                 return std::any_of(c.terms.begin(), c.terms.end(), [](const auto& t) {
                                   return t.coefficient > 0.0 && t.functional.involves_entropic();
                                 });
                               },
                               [](const auto&) { return false; }},
                    kind_);
}

std::string RiskFunctional::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{[&](const Expectation&) { out << "mean"; },
                        [&](const EntropicRisk& e) { out << "erm(" << e.gamma << ")"; },
                        [&](const ValueAtRisk& v) { out << "var(" << v.alpha << ")"; },
                        [&](const ConditionalTailExpectation& c) { out << "cte(" << c.alpha << ")"; },
                        [&](const Composite& c) {
                          out << "composite[";
                          for (std::size_t i = 0; i < c.terms.size(); ++i) {
                            if (i) out << " + ";
                            out << c.terms[i].coefficient << "*" << c.terms[i].functional.describe();
                          }
                          out << "]";
                        }},
             kind_);
  return out.str();
}

double evaluate(const RiskFunctional& rf, const MixedDistribution& dist) {
  return std::visit(
      Overloaded{[&](const Expectation&) { return mean(dist); },
                 [&](const EntropicRisk& e) { return erm(e.gamma, dist); },
                 [&](const ValueAtRisk& v) { return value_at_risk(v.alpha, dist); },
                 [&](const ConditionalTailExpectation& c) { return cte(c.alpha, dist); },
                 [&](const Composite& comp) {
                   double total = 0.0;
                   for (const auto& t : comp.terms) total += t.coefficient * evaluate(t.functional, dist);
                   return total;
                 }},
      rf.kind());
}

double evaluate_discrete(const RiskFunctional& rf, std::span<WeightedValue> atoms) {
  if (atoms.empty()) throw InputError("evaluate_discrete: no atoms");
  std::sort(atoms.begin(), atoms.end(),
            [](const WeightedValue& a, const WeightedValue& b) { return a.value < b.value; });
  return evaluate_sorted(rf, atoms);
}

// ---------------------------------------------------------------------------

DisutilityFunction DisutilityFunction::exponential(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw InputError("exponential disutility: gamma must be > 0");
  return DisutilityFunction(ExponentialDisutility{gamma});
}

DisutilityFunction DisutilityFunction::linear() { return DisutilityFunction(LinearDisutility{}); }

DisutilityFunction DisutilityFunction::power(double k) {
  if (!(k >= 1.0) || !std::isfinite(k)) throw InputError("power disutility: k must be >= 1");
  return DisutilityFunction(PowerDisutility{k});
}

DisutilityFunction DisutilityFunction::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw InputError("piecewise-linear disutility: need at least two knots");
  double scale = 1.0;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second))
      throw InputError("piecewise-linear disutility: knots must be finite");
    scale = std::max(scale, std::abs(knots[i].second));
    if (i > 0 && !(knots[i].first > knots[i - 1].first && knots[i].second > knots[i - 1].second))
      throw InputError("piecewise-linear disutility: knots must be strictly increasing in cost and value");
  }
  DisutilityFunction u(PiecewiseLinearDisutility{std::move(knots)});
  if (std::abs(u(0.0)) > kProbabilityTolerance * scale)
    throw InputError("piecewise-linear disutility: u(0) must be 0");
  return u;
}

namespace {

double interpolate(const std::vector<std::pair<double, double>>& knots, double c) {
  // Index of the segment used: clamp to the first/last piece for extrapolation.
  auto it = std::upper_bound(knots.begin(), knots.end(), c,
                             [](double x, const auto& k) { return x < k.first; });
  std::size_t j = static_cast<std::size_t>(it - knots.begin());
  j = std::clamp<std::size_t>(j, 1, knots.size() - 1);
  const auto& [x0, y0] = knots[j - 1];
  const auto& [x1, y1] = knots[j];
  return y0 + (y1 - y0) * (c - x0) / (x1 - x0);
}

// Average of the piecewise-linear function over [lo, hi], exact.
double piecewise_average(const std::vector<std::pair<double, double>>& knots, double lo, double hi) {
  std::vector<double> cuts{lo};
  for (const auto& k : knots)
    if (k.first > lo && k.first < hi) cuts.push_back(k.first);
  cuts.push_back(hi);
  double integral = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i)
    integral += 0.5 * (interpolate(knots, cuts[i - 1]) + interpolate(knots, cuts[i])) * (cuts[i] - cuts[i - 1]);
  return integral / (hi - lo);
}

double signed_power(double c, double k) { return std::copysign(std::pow(std::abs(c), k), c); }

}  // namespace

double DisutilityFunction::operator()(double cost) const {
  return std::visit(Overloaded{[&](const ExponentialDisutility& e) { return std::expm1(e.gamma * cost); },
                               [&](const LinearDisutility&) { return cost; },
                               [&](const PowerDisutility& p) { return signed_power(cost, p.k); },
                               [&](const PiecewiseLinearDisutility& pl) { return interpolate(pl.knots, cost); }},
                    kind_);
}

double DisutilityFunction::expected(const MixedDistribution& dist) const {
  double total = 0.0;
  for (const auto& c : dist.components()) {
    if (c.weight <= 0.0) continue;
    const double value = std::visit(
        Overloaded{[&](const PointMass& p) { return (*this)(p.value); },
                   [&](const UniformSegment& s) {
                     return std::visit(
                         Overloaded{[&](const ExponentialDisutility& e) {
                                      return segment_mgf_minus_one(e.gamma * s.lo, e.gamma * s.hi);
                                    },
                                    [&](const LinearDisutility&) { return 0.5 * (s.lo + s.hi); },
                                    [&](const PowerDisutility& p) {
                                      // d/dc |c|^{k+1}/(k+1) = sign(c)|c|^k
                                      const auto antiderivative = [&](double x) {
                                        return std::pow(std::abs(x), p.k + 1.0) / (p.k + 1.0);
                                      };
                                      return (antiderivative(s.hi) - antiderivative(s.lo)) / (s.hi - s.lo);
                                    },
                                    [&](const PiecewiseLinearDisutility& pl) {
                                      return piecewise_average(pl.knots, s.lo, s.hi);
                                    }},
                         kind_);
                   }},
        c.outcome);
    total += c.weight * value;
  }
  if (!std::isfinite(total)) throw std::overflow_error("expected disutility is not finite");
  return total;
}

double deu(const DisutilityFunction& u, double lambda, std::span<const MixedDistribution> marginals) {
  if (marginals.empty()) throw InputError("deu: no marginals");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("deu: lambda must lie in [0, 1]");
  double total = 0.0;
  double discount = 1.0;
  for (const auto& m : marginals) {
    total += discount * u.expected(m);
    discount *= lambda;
  }
  return total;
}

}  // namespace irm
