#include "irm/studies.hpp"

#include <algorithm>
#include <cmath>

#include "irm/detail/overloaded.hpp"
#include "irm/error.hpp"
#include "irm/mdp.hpp"
#include "irm/risk_measures.hpp"

namespace irm::studies {
namespace {

constexpr double kOrderingTolerance = 1e-9;

void require_unit(double x, const char* what, bool closed_right) {
  if (!(x >= 0.0) || (closed_right ? x > 1.0 : x >= 1.0))
    throw InputError(std::string(what) + (closed_right ? " must lie in [0, 1]" : " must lie in [0, 1)"));
}

std::vector<double> cell_centres(int steps) {
  std::vector<double> axis(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) axis[static_cast<std::size_t>(i)] = (i + 0.5) / steps;
  return axis;
}

bool same_components(const MixedDistribution& a, const MixedDistribution& b) {
  if (a.size() != b.size()) return false;
  const auto near = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& ca = a.components()[i];
    const auto& cb = b.components()[i];
    if (!near(ca.weight, cb.weight) || ca.outcome.index() != cb.outcome.index()) return false;
    const bool equal = std::visit(
        detail::Overloaded{
            [&](const PointMass& p) { return near(p.value, std::get<PointMass>(cb.outcome).value); },
            [&](const UniformSegment& u) {
              const auto& v = std::get<UniformSegment>(cb.outcome);
              return near(u.lo, v.lo) && near(u.hi, v.hi);
            },
        },
        ca.outcome);
    if (!equal) return false;
  }
  return true;
}

}  // namespace

PaymentsReport payments_report(double lambda, double alpha, const models::PaymentPlan& plan,
                               const std::vector<double>& gammas) {
  require_unit(lambda, "lambda", true);
  require_unit(alpha, "alpha", false);
  const auto tree_a = models::payment_a_tree(plan);
  const auto tree_b = models::payment_b_tree(plan);
  const auto spec = IrmSpec::uniform(RiskFunctional::cte(alpha), plan.days);

  PaymentsReport r{};
  r.lambda = lambda;
  r.alpha = alpha;
  r.plan = plan;
  r.icte_a = irm_evaluate(tree_a, spec, lambda).root_value;
  r.icte_b = irm_evaluate(tree_b, spec, lambda).root_value;
  r.preferred = r.icte_a < r.icte_b ? "A" : (r.icte_b < r.icte_a ? "B" : "tie");
  r.boundary = models::region_boundary(lambda, plan);
  r.boundary_printed = models::region_boundary_shifted(lambda, plan);
  r.condition_i = lambda < 1.0 && alpha > r.boundary_printed;
  r.condition_ii = lambda == 1.0 && alpha > plan.epsilon;
  r.caption_condition = alpha > r.boundary;

  const auto a = models::payment_a_marginals(plan);
  const auto b = models::payment_b_marginals(plan);
  for (double g : gammas) {
    const auto u = DisutilityFunction::exponential(g);
    r.deu.push_back({g, deu(u, lambda, a), deu(u, lambda, b)});
  }
  r.deu_linear_a = deu(DisutilityFunction::linear(), lambda, a);
  r.deu_linear_b = deu(DisutilityFunction::linear(), lambda, b);
  return r;
}

RegionGrid region_grid(int lambda_steps, int alpha_steps, const models::PaymentPlan& plan,
                       Execution execution) {
  if (lambda_steps < 2 || alpha_steps < 2) throw InputError("region_grid: steps must be >= 2");
  RegionGrid g;
  g.lambda_axis = cell_centres(lambda_steps);
  g.alpha_axis = cell_centres(alpha_steps);
  const auto values = kernels::payment_grid(models::payment_a_tree(plan), models::payment_b_tree(plan),
                                            g.lambda_axis, g.alpha_axis, execution);
  const std::size_t rows = g.lambda_axis.size();
  const std::size_t cols = g.alpha_axis.size();
  g.cells.assign(rows, std::vector<bool>(cols));
  g.closed_form.assign(rows, std::vector<bool>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const double boundary = models::region_boundary(g.lambda_axis[i], plan);
    g.boundary.emplace_back(g.lambda_axis[i], boundary);
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& v = values[i * cols + j];
      g.cells[i][j] = v.icte_a < v.icte_b;
      g.closed_form[i][j] = g.alpha_axis[j] > boundary;
    }
  }
  // A cell is "near" the boundary when the closed form changes within one
  // step in either direction.
  const auto near_boundary = [&](std::size_t i, std::size_t j) {
    for (std::size_t di = (i > 0 ? i - 1 : i); di <= std::min(i + 1, rows - 1); ++di)
      for (std::size_t dj = (j > 0 ? j - 1 : j); dj <= std::min(j + 1, cols - 1); ++dj)
        if (g.closed_form[di][dj] != g.closed_form[i][j]) return true;
    return false;
  };
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (g.cells[i][j] == g.closed_form[i][j]) continue;
      ++g.disagreements;
      if (!near_boundary(i, j)) ++g.far_disagreements;
    }
  }
  return g;
}

XyReport xy_report(double gamma, double lambda) {
  require_unit(lambda, "lambda", true);
  const std::vector<DelayedOption> options{{models::payment_x(), models::kDelayX},
                                           {models::payment_y(), models::kDelayY}};
  XyReport r{};
  r.gamma = gamma;
  r.lambda = lambda;
  const auto erm_rf = RiskFunctional::entropic(gamma);
  r.erm_schedule = preference_over_time(erm_rf, lambda, options);
  r.erm_flips = preference_flips(r.erm_schedule);
  r.mean_schedule = preference_over_time(RiskFunctional::expectation(), lambda, options);
  r.mean_flips = preference_flips(r.mean_schedule);

  const auto x_tree = models::payment_x_tree();
  const auto y_tree = models::payment_y_tree();
  r.erm_x = {rmd(x_tree, erm_rf, lambda),
             irm_evaluate(x_tree, IrmSpec::uniform(erm_rf, x_tree.horizon()), lambda).root_value};
  r.erm_y = {rmd(y_tree, erm_rf, lambda),
             irm_evaluate(y_tree, IrmSpec::uniform(erm_rf, y_tree.horizon()), lambda).root_value};

  const auto mdp = models::xy_mdp(lambda);
  const auto solution = solve_dp(mdp, IrmSpec::uniform(erm_rf, mdp.horizon()));
  r.dp_choice = mdp.actions()[solution.policy.at(0, mdp.initial()).value()];
  r.dp_value = solution.values.at(0, mdp.initial());
  return r;
}

std::vector<double> default_paths_gammas() {
  std::vector<double> g;
  for (int i = -20; i <= 20; ++i) g.push_back(i * 0.05);
  return g;
}

PathsReport paths_report(const std::vector<double>& alphas, const std::vector<double>& gammas) {
  if (alphas.empty() || gammas.empty()) throw InputError("paths_report: grids must be nonempty");
  const auto p = models::travel_time_p();
  const auto q = models::travel_time_q();
  const auto tp = models::travel_tree_p();
  const auto tq = models::travel_tree_q();
  PathsReport r{};
  r.mean_p = mean(p);
  r.mean_q = mean(q);
  for (double a : alphas) {
    require_unit(a, "alpha", false);
    const auto spec = IrmSpec::uniform(RiskFunctional::cte(a), tp.horizon());
    r.rows.push_back({a, cte(a, p), cte(a, q), irm_evaluate(tp, spec, 1.0).root_value,
                      irm_evaluate(tq, spec, 1.0).root_value});
  }
  auto sorted = gammas;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  r.ordering_holds = true;
  r.monotone_in_gamma = true;
  for (double g : sorted) {
    const ErmCurvePoint point{g, erm(g, p), erm(g, q)};
    if (point.erm_p < point.erm_q - kOrderingTolerance) r.ordering_holds = false;
    if (!r.curve.empty()) {
      const auto& prev = r.curve.back();
      if (point.erm_p < prev.erm_p - kOrderingTolerance || point.erm_q < prev.erm_q - kOrderingTolerance)
        r.monotone_in_gamma = false;
    }
    r.curve.push_back(point);
  }
  return r;
}

Lemma1Report lemma1_report(const Lemma1Grid& grid, Execution execution) {
  for (double a : grid.as)
    if (!(a > 0.0)) throw InputError("lemma1: every a must be > 0");
  Lemma1Report r;
  r.points = kernels::lemma1_sweep(grid.xs, grid.as, grid.bs, grid.gammas, execution);
  for (const auto& pt : r.points) {
    const double excess = pt.erm_y - pt.erm_x;
    if (excess > kOrderingTolerance) ++r.violations;
    r.max_violation = std::max(r.max_violation, excess);
  }
  const auto [x, y] = models::erm_ordering_pair(3.0);
  r.affine_matches_paths = same_components(affine_transform(x, 20.0, 20.0), models::travel_time_p()) &&
                           same_components(affine_transform(y, 20.0, 20.0), models::travel_time_q());
  return r;
}

double variance(const MixedDistribution& dist) {
  const double m = mean(dist);
  double second = 0.0;
  for (const auto& c : dist.components()) {
    second += c.weight * std::visit(detail::Overloaded{
                                        [&](const PointMass& p) { return (p.value - m) * (p.value - m); },
                                        [&](const UniformSegment& u) {
                                          const double lo = u.lo - m;
                                          const double hi = u.hi - m;
                                          return (lo * lo + lo * hi + hi * hi) / 3.0;
                                        },
                                    },
                                    c.outcome);
  }
  return second;
}

PropertyReport erm_homogeneity_counterexample() {
  const auto d = MixedDistribution::discrete(std::vector<WeightedValue>{{0.5, 0.0}, {0.5, 1.0}});
  const double a = 2.0;
  const double lhs = erm(1.0, affine_transform(d, a, 0.0));
  const double rhs = a * erm(1.0, d);
  PropertyReport r{"positive homogeneity", "erm(1)", true, 1, 1, std::nullopt};
  if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs))) {
    r.passed = false;
    r.trials_run = 0;
    r.counterexample = Counterexample{d, std::nullopt, a, lhs, rhs};
  }
  return r;
}

std::vector<SuiteEntry> property_suite(std::size_t trials, std::uint64_t seed) {
  const auto mean_rf = RiskFunctional::expectation();
  const auto erm_rf = RiskFunctional::entropic(0.7);
  const auto erm_ti = RiskFunctional::entropic(0.3);
  const auto cte_rf = RiskFunctional::cte(0.5);
  const auto cte_hi = RiskFunctional::cte(0.9);
  const auto var_rf = RiskFunctional::value_at_risk(0.75);
  const auto blend = RiskFunctional::mean_cte_blend(0.3, 0.5);

  std::vector<SuiteEntry> out;
  out.push_back({check_monotonic(mean_rf, trials, seed), true});
  out.push_back({check_monotonic(erm_rf, trials, seed + 1), true});
  out.push_back({check_monotonic(cte_rf, trials, seed + 2), true});
  out.push_back({check_monotonic(blend, trials, seed + 3), true});
  out.push_back({check_monotonic(Functional(variance), "variance", trials, seed + 4), false});

  out.push_back({check_translation_invariance(mean_rf, trials, seed + 5), true});
  out.push_back({check_translation_invariance(erm_ti, trials, seed + 6), true});
  out.push_back({check_translation_invariance(cte_hi, trials, seed + 7), true});

  out.push_back({check_positive_homogeneity(mean_rf, trials, seed + 8), true});
  out.push_back({check_positive_homogeneity(var_rf, trials, seed + 9), true});
  out.push_back({check_positive_homogeneity(cte_hi, trials, seed + 10), true});
  out.push_back({check_positive_homogeneity(erm_ti, trials, seed + 11), false});
  out.push_back({erm_homogeneity_counterexample(), false});

  out.push_back({check_composite_monotonic({mean_rf, cte_rf}, {0.7, 0.3}, trials, seed + 12), true});
  return out;
}

}  // namespace irm::studies
