// irm: reproduction harness and file-based front end for the library.
//
// Exit codes: 0 success, 1 a checked property or assertion failed, 2 bad input.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irm/error.hpp"
#include "irm/json_io.hpp"
#include "irm/mdp.hpp"
#include "irm/models.hpp"
#include "irm/risk_measures.hpp"
#include "irm/studies.hpp"

namespace {

using irm::io::Json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

struct Globals {
  double lambda = 1.0;
  double alpha = 0.9;
  double gamma = 0.001;
  std::uint64_t seed = 1;
  std::string format;
  std::string out;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;

  double lambda_or(double fallback) const { return lambda_opt->count() ? lambda : fallback; }
  double alpha_or(double fallback) const { return alpha_opt->count() ? alpha : fallback; }
  double gamma_or(double fallback) const { return gamma_opt->count() ? gamma : fallback; }
  std::string format_or(const std::string& fallback) const { return format.empty() ? fallback : format; }
};

struct FunctionalFlags {
  bool mean = false;
  double erm = 0.0;
  double var = 0.0;
  double cte = 0.0;
  double mix = 0.0;
  std::string rf_file;
  CLI::Option* erm_opt = nullptr;
  CLI::Option* var_opt = nullptr;
  CLI::Option* cte_opt = nullptr;
  CLI::Option* mix_opt = nullptr;
  CLI::Option* rf_opt = nullptr;

  void attach(CLI::App& cmd) {
    cmd.add_flag("--mean", mean, "expectation");
    erm_opt = cmd.add_option("--erm", erm, "entropic risk measure with parameter gamma");
    var_opt = cmd.add_option("--var", var, "value at risk at level alpha");
    cte_opt = cmd.add_option("--cte", cte, "conditional tail expectation at level alpha");
    mix_opt = cmd.add_option("--mix", mix, "(1 - b) E + b CTE, combined with --cte")->needs(cte_opt);
    rf_opt = cmd.add_option("--rf", rf_file, "risk functional JSON file");
  }

  irm::RiskFunctional build() const {
    const int chosen = static_cast<int>(mean) + static_cast<int>(erm_opt->count() > 0) +
                       static_cast<int>(var_opt->count() > 0) + static_cast<int>(cte_opt->count() > 0) +
                       static_cast<int>(rf_opt->count() > 0);
    if (chosen != 1) throw irm::InputError("choose exactly one of --mean, --erm, --var, --cte, --rf");
    if (mean) return irm::RiskFunctional::expectation();
    if (erm_opt->count()) return irm::RiskFunctional::entropic(erm);
    if (var_opt->count()) return irm::RiskFunctional::value_at_risk(var);
    if (rf_opt->count()) return irm::io::functional_from_json(irm::io::load_file(rf_file));
    if (mix_opt->count()) return irm::RiskFunctional::mean_cte_blend(mix, cte);
    return irm::RiskFunctional::cte(cte);
  }
};

std::string fmt(double x, int precision = 10) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void emit(const Globals& g, const std::string& body) {
  if (g.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw irm::InputError(g.out + ": cannot open for writing");
  file << body;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  throw irm::InputError("unsupported --format " + format + " for this command");
}

std::string erm_caveat(const irm::RiskFunctional& rf, double lambda) {
  if (lambda < 1.0 && rf.involves_entropic())
    return "the entropic risk measure is not positive homogeneous; with lambda < 1 the recursion yields "
           "the recursively optimal value, which need not minimize ERM of the discounted total";
  return {};
}

// ---------------------------------------------------------------------------

struct PaymentsArgs {
  double epsilon = 0.05;
  int days = 20;
  double amount = 1000.0;
  irm::models::PaymentPlan plan() const { return {days, amount, epsilon}; }
};

int cmd_payments(const Globals& g, const PaymentsArgs& args) {
  const auto r = irm::studies::payments_report(g.lambda_or(0.95), g.alpha_or(0.9), args.plan());
  const std::string format = g.format_or("text");
  require_format(format, {"text", "json", "csv"});
  std::ostringstream out;
  if (format == "json") {
    Json deu = Json::array();
    for (const auto& row : r.deu) deu.push_back({{"gamma", row.gamma}, {"deu_a", row.deu_a}, {"deu_b", row.deu_b}});
    Json j = {{"lambda", r.lambda},
              {"alpha", r.alpha},
              {"days", r.plan.days},
              {"amount", r.plan.amount},
              {"epsilon", r.plan.epsilon},
              {"p_b", r.plan.b_probability()},
              {"icte_a", r.icte_a},
              {"icte_b", r.icte_b},
              {"preferred", r.preferred},
              {"boundary", r.boundary},
              {"boundary_printed", r.boundary_printed},
              {"alpha_above_boundary", r.caption_condition},
              {"condition_discounted", r.condition_i},
              {"condition_undiscounted", r.condition_ii},
              {"deu_exponential", std::move(deu)},
              {"deu_linear", {{"a", r.deu_linear_a}, {"b", r.deu_linear_b}}}};
    out << j.dump(2) << "\n";
  } else if (format == "csv") {
    out << "measure,parameter,a,b\n";
    out << "icte," << fmt(r.alpha, 17) << "," << fmt(r.icte_a, 17) << "," << fmt(r.icte_b, 17) << "\n";
    for (const auto& row : r.deu)
      out << "deu_exp," << fmt(row.gamma, 17) << "," << fmt(row.deu_a, 17) << "," << fmt(row.deu_b, 17) << "\n";
    out << "deu_linear,," << fmt(r.deu_linear_a, 17) << "," << fmt(r.deu_linear_b, 17) << "\n";
  } else {
    out << "payments: lambda=" << fmt(r.lambda) << " alpha=" << fmt(r.alpha) << " days=" << r.plan.days
        << " amount=" << fmt(r.plan.amount) << " epsilon=" << fmt(r.plan.epsilon)
        << " p_B=" << fmt(r.plan.b_probability()) << "\n";
    out << "  ICTE_0(A) = " << fmt(r.icte_a) << "\n";
    out << "  ICTE_0(B) = " << fmt(r.icte_b) << "\n";
    out << "  iterated CTE prefers: " << r.preferred << "\n";
    out << "  boundary 1 - p_B sum_{n<" << r.plan.days << "} lambda^n = " << fmt(r.boundary)
        << "  (alpha above: " << yes_no(r.caption_condition) << ")\n";
    out << "  boundary with " << r.plan.days - 1 << " terms over " << r.plan.days - 1 << " = "
        << fmt(r.boundary_printed) << "  (alpha above with lambda < 1: " << yes_no(r.condition_i) << ")\n";
    out << "  the two closed-form boundaries differ by one term; the preference above is computed by recursion\n";
    out << "  undiscounted condition (lambda = 1, alpha > epsilon): " << yes_no(r.condition_ii) << "\n";
    out << "  discounted expected utility, u(c) = exp(gamma c) - 1:\n";
    for (const auto& row : r.deu)
      out << "    gamma=" << fmt(row.gamma) << "  DEU(A)=" << fmt(row.deu_a) << "  DEU(B)=" << fmt(row.deu_b)
          << "  prefers " << (row.deu_a < row.deu_b ? "A" : (row.deu_b < row.deu_a ? "B" : "tie")) << "\n";
    out << "    linear u: DEU(A)=" << fmt(r.deu_linear_a) << "  DEU(B)=" << fmt(r.deu_linear_b) << "\n";
  }
  emit(g, out.str());
  return kOk;
}

struct Fig1Args {
  int lambda_steps = 100;
  int alpha_steps = 100;
  double epsilon = 0.05;
};

int cmd_fig1(const Globals& g, const Fig1Args& args) {
  irm::models::PaymentPlan plan;
  plan.epsilon = args.epsilon;
  const auto grid = irm::studies::region_grid(args.lambda_steps, args.alpha_steps, plan);
  const std::string format = g.format_or("csv");
  require_format(format, {"csv", "json"});
  std::ostringstream out;
  if (format == "csv") {
    out << "lambda,alpha,holds,boundary\n";
    for (std::size_t i = 0; i < grid.lambda_axis.size(); ++i)
      for (std::size_t j = 0; j < grid.alpha_axis.size(); ++j)
        out << fmt(grid.lambda_axis[i], 17) << "," << fmt(grid.alpha_axis[j], 17) << ","
            << (grid.cells[i][j] ? 1 : 0) << "," << fmt(grid.boundary[i].second, 17) << "\n";
  } else {
    Json cells = Json::array();
    for (const auto& row : grid.cells) cells.push_back(row);
    Json boundary = Json::array();
    for (const auto& [l, a] : grid.boundary) boundary.push_back({l, a});
    out << Json{{"lambda_axis", grid.lambda_axis},
                {"alpha_axis", grid.alpha_axis},
                {"cells", std::move(cells)},
                {"boundary", std::move(boundary)},
                {"disagreements", grid.disagreements},
                {"far_disagreements", grid.far_disagreements}}
               .dump(2)
        << "\n";
  }
  emit(g, out.str());
  // Keep stdout clean for the CSV when it is the payload.
  std::ostream& log = g.out.empty() ? std::cerr : std::cout;
  log << "fig1: " << grid.lambda_axis.size() << "x" << grid.alpha_axis.size() << " cells, "
      << grid.disagreements << " disagree with the closed form, " << grid.far_disagreements
      << " farther than one cell from the boundary\n";
  return grid.far_disagreements == 0 ? kOk : kCheckFailed;
}

void print_schedule(std::ostream& out, const std::string& label, const std::vector<irm::PreferenceAt>& s,
                    bool flips) {
  out << "  " << label << ":\n";
  for (const auto& p : s)
    out << "    t=" << p.time << "  X=" << fmt(p.values[0]) << "  Y=" << fmt(p.values[1]) << "  prefers "
        << (p.preferred == 0 ? "X" : "Y") << "\n";
  out << "    preference flips: " << yes_no(flips) << "\n";
}

Json schedule_json(const std::vector<irm::PreferenceAt>& s, bool flips) {
  Json rows = Json::array();
  for (const auto& p : s)
    rows.push_back({{"t", p.time}, {"x", p.values[0]}, {"y", p.values[1]}, {"preferred", p.preferred == 0 ? "X" : "Y"}});
  return {{"schedule", std::move(rows)}, {"flips", flips}};
}

int cmd_xy(const Globals& g) {
  const auto r = irm::studies::xy_report(g.gamma_or(0.001), g.lambda_or(0.92));
  const std::string format = g.format_or("text");
  require_format(format, {"text", "json"});
  std::ostringstream out;
  if (format == "json") {
    out << Json{{"gamma", r.gamma},
                {"lambda", r.lambda},
                {"erm", schedule_json(r.erm_schedule, r.erm_flips)},
                {"mean", schedule_json(r.mean_schedule, r.mean_flips)},
                {"trees",
                 {{"x", {{"flat", r.erm_x.flat}, {"recursive", r.erm_x.recursive}}},
                  {"y", {{"flat", r.erm_y.flat}, {"recursive", r.erm_y.recursive}}}}},
                {"dp", {{"choice", r.dp_choice}, {"value", r.dp_value}}}}
               .dump(2)
        << "\n";
  } else {
    out << "xy: gamma=" << fmt(r.gamma) << " lambda=" << fmt(r.lambda) << "\n";
    print_schedule(out, "ERM(gamma) of the discounted payment", r.erm_schedule, r.erm_flips);
    print_schedule(out, "expectation of the discounted payment", r.mean_schedule, r.mean_flips);
    out << "  ERM on the delayed trees, flat vs recursive:\n";
    out << "    X: " << fmt(r.erm_x.flat) << " vs " << fmt(r.erm_x.recursive) << "\n";
    out << "    Y: " << fmt(r.erm_y.flat) << " vs " << fmt(r.erm_y.recursive) << "\n";
    out << "  dynamic program over {X, Y}: chooses " << r.dp_choice << " with value " << fmt(r.dp_value) << "\n";
    const auto caveat = erm_caveat(irm::RiskFunctional::entropic(r.gamma), r.lambda);
    if (!caveat.empty()) out << "  note: " << caveat << "\n";
  }
  emit(g, out.str());
  return kOk;
}

struct PathsArgs {
  std::vector<double> alphas{0.5, 0.8};
  std::vector<double> gammas = irm::studies::default_paths_gammas();
};

int cmd_paths(const Globals& g, const PathsArgs& args) {
  const auto r = irm::studies::paths_report(args.alphas, args.gammas);
  const std::string format = g.format_or("text");
  require_format(format, {"text", "csv", "json"});
  std::ostringstream out;
  if (format == "csv") {
    out << "gamma,erm_p,erm_q\n";
    for (const auto& c : r.curve) out << fmt(c.gamma, 17) << "," << fmt(c.erm_p, 17) << "," << fmt(c.erm_q, 17) << "\n";
  } else if (format == "json") {
    Json rows = Json::array();
    for (const auto& row : r.rows)
      rows.push_back({{"alpha", row.alpha},
                      {"cte_p", row.cte_p},
                      {"cte_q", row.cte_q},
                      {"icte_p", row.icte_p},
                      {"icte_q", row.icte_q}});
    Json curve = Json::array();
    for (const auto& c : r.curve) curve.push_back({{"gamma", c.gamma}, {"erm_p", c.erm_p}, {"erm_q", c.erm_q}});
    out << Json{{"mean_p", r.mean_p},
                {"mean_q", r.mean_q},
                {"rows", std::move(rows)},
                {"curve", std::move(curve)},
                {"ordering_holds", r.ordering_holds},
                {"monotone_in_gamma", r.monotone_in_gamma}}
               .dump(2)
        << "\n";
  } else {
    out << "paths: E[T_P]=" << fmt(r.mean_p) << "  E[T_Q]=" << fmt(r.mean_q) << "\n";
    for (const auto& row : r.rows)
      out << "  alpha=" << fmt(row.alpha) << "  CTE(T_P)=" << fmt(row.cte_p) << "  CTE(T_Q)=" << fmt(row.cte_q)
          << "  ICTE(T_P)=" << fmt(row.icte_p) << "  ICTE(T_Q)=" << fmt(row.icte_q) << "\n";
    out << "  ERM curve over " << r.curve.size() << " gammas: ERM(T_P) >= ERM(T_Q) everywhere: "
        << yes_no(r.ordering_holds) << ", nondecreasing in gamma: " << yes_no(r.monotone_in_gamma) << "\n";
  }
  emit(g, out.str());
  return r.ordering_holds && r.monotone_in_gamma ? kOk : kCheckFailed;
}

int cmd_lemma1(const Globals& g, const irm::studies::Lemma1Grid& grid) {
  const auto r = irm::studies::lemma1_report(grid);
  const std::string format = g.format_or("text");
  require_format(format, {"text", "csv", "json"});
  std::ostringstream out;
  if (format == "csv") {
    out << "x,a,b,gamma,erm_x,erm_y,gap\n";
    for (const auto& p : r.points)
      out << fmt(p.x, 17) << "," << fmt(p.a, 17) << "," << fmt(p.b, 17) << "," << fmt(p.gamma, 17) << ","
          << fmt(p.erm_x, 17) << "," << fmt(p.erm_y, 17) << "," << fmt(p.gap(), 17) << "\n";
  } else if (format == "json") {
    out << Json{{"points", r.points.size()},
                {"violations", r.violations},
                {"max_violation", r.max_violation},
                {"affine_matches_paths", r.affine_matches_paths}}
               .dump(2)
        << "\n";
  } else {
    out << "lemma1: " << r.points.size() << " grid points, " << r.violations
        << " violations beyond 1e-9, max(ERM(aY+b) - ERM(aX+b), 0) = " << fmt(r.max_violation) << "\n";
    out << "  x=3, a=20, b=20 maps (X, Y) onto (T_P, T_Q): " << yes_no(r.affine_matches_paths) << "\n";
  }
  emit(g, out.str());
  return r.violations == 0 && r.affine_matches_paths ? kOk : kCheckFailed;
}

int cmd_solve(const Globals& g, const std::string& file, const FunctionalFlags& flags) {
  auto mdp = irm::io::mdp_from_json(irm::io::load_file(file));
  if (g.lambda_opt->count()) mdp = mdp.with_discount(g.lambda);
  const auto rf = flags.build();
  const auto solution = irm::solve_dp(mdp, irm::IrmSpec::uniform(rf, mdp.horizon()));
  const std::string format = g.format_or("json");
  require_format(format, {"json", "csv", "text"});
  const auto caveat = erm_caveat(rf, mdp.discount());
  std::ostringstream out;
  if (format == "json") {
    Json j = {{"functional", rf.describe()}, {"lambda", mdp.discount()}};
    const Json body = irm::io::to_json(mdp, solution);
    for (const auto& [k, v] : body.items()) j[k] = v;
    if (!caveat.empty()) j["caveat"] = caveat;
    out << j.dump(2) << "\n";
  } else if (format == "csv") {
    out << "n,s,a,value\n";
    for (int n = 0; n < mdp.horizon(); ++n)
      for (std::size_t s = 0; s < mdp.state_count(n); ++s)
        out << n << "," << mdp.states(n)[s] << "," << mdp.actions()[solution.policy.at(n, s).value()] << ","
            << fmt(solution.values.at(n, s), 17) << "\n";
  } else {
    out << mdp.actions()[solution.policy.at(0, mdp.initial()).value()] << " "
        << fmt(solution.values.at(0, mdp.initial())) << "\n";
  }
  if (!caveat.empty() && format != "json") std::cerr << "note: " << caveat << "\n";
  emit(g, out.str());
  return kOk;
}

int cmd_eval(const Globals& g, const std::string& file, const FunctionalFlags& flags) {
  const auto j = irm::io::load_file(file);
  const auto rf = flags.build();
  const std::string format = g.format_or("json");
  require_format(format, {"json", "text"});
  Json result = {{"functional", rf.describe()}};
  if (j.is_object() && j.contains("root")) {
    const auto tree = irm::io::tree_from_json(j);
    const double lambda = g.lambda_or(1.0);
    const auto spec = irm::IrmSpec::uniform(rf, tree.horizon());
    result["lambda"] = lambda;
    result["value"] = irm::irm_evaluate(tree, spec, lambda).root_value;
    result["flat_value"] = irm::rmd(tree, rf, lambda);
    const auto caveat = erm_caveat(rf, lambda);
    if (!caveat.empty()) result["caveat"] = caveat;
  } else {
    result["value"] = irm::evaluate(rf, irm::io::distribution_from_json(j));
  }
  std::ostringstream out;
  if (format == "json")
    out << result.dump(2) << "\n";
  else
    out << fmt(result["value"].get<double>(), 17) << "\n";
  emit(g, out.str());
  return kOk;
}

int cmd_check(const Globals& g, std::size_t trials) {
  const auto suite = irm::studies::property_suite(trials, g.seed);
  const std::string format = g.format_or("text");
  require_format(format, {"text", "json"});
  bool all = true;
  std::ostringstream out;
  Json reports = Json::array();
  for (const auto& e : suite) {
    all = all && e.as_expected();
    if (format == "json") {
      Json r = irm::io::to_json(e.report);
      r["expected"] = e.expected_pass ? "pass" : "fail";
      reports.push_back(std::move(r));
    } else {
      out << (e.as_expected() ? "[ok]   " : "[BAD]  ") << e.report.property << " / " << e.report.functional
          << ": " << (e.report.passed ? "pass" : "fail") << " (expected "
          << (e.expected_pass ? "pass" : "fail") << ", " << e.report.trials_run << "/" << e.report.trials
          << " trials)";
      if (e.report.counterexample)
        out << "  lhs=" << fmt(e.report.counterexample->lhs) << " rhs=" << fmt(e.report.counterexample->rhs);
      out << "\n";
    }
  }
  if (format == "json") out << Json{{"seed", g.seed}, {"trials", trials}, {"reports", reports}}.dump(2) << "\n";
  emit(g, out.str());
  return all ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated risk measures: reproduction studies and file-based evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  g.lambda_opt = app.add_option("--lambda", g.lambda, "discount factor in [0, 1]");
  g.alpha_opt = app.add_option("--alpha", g.alpha, "CTE level in [0, 1)");
  g.gamma_opt = app.add_option("--gamma", g.gamma, "ERM parameter");
  app.add_option("--seed", g.seed, "RNG seed for randomized checks");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", g.out, "write output to FILE");

  PaymentsArgs payments_args;
  auto* payments = app.add_subcommand("payments", "compare the A and B payment plans");
  payments->add_option("--epsilon", payments_args.epsilon, "B pays with total probability 1 - epsilon");
  payments->add_option("--days", payments_args.days);
  payments->add_option("--amount", payments_args.amount);

  Fig1Args fig1_args;
  auto* fig1 = app.add_subcommand("fig1", "(lambda, alpha) region where iterated CTE prefers A");
  fig1->add_option("--lambda-steps", fig1_args.lambda_steps)->check(CLI::Range(2, 100000));
  fig1->add_option("--alpha-steps", fig1_args.alpha_steps)->check(CLI::Range(2, 100000));
  fig1->add_option("--epsilon", fig1_args.epsilon);

  auto* xy = app.add_subcommand("xy", "preference between delayed payments X and Y over time");

  PathsArgs paths_args;
  auto* paths = app.add_subcommand("paths", "travel times T_P and T_Q: CTE, ICTE and ERM curves");
  paths->add_option("--alphas", paths_args.alphas)->delimiter(',');
  paths->add_option("--gammas", paths_args.gammas)->delimiter(',');

  irm::studies::Lemma1Grid lemma_grid;
  auto* lemma1 = app.add_subcommand("lemma1", "ERM ordering of aX + b and aY + b over a grid");
  lemma1->add_option("--x", lemma_grid.xs)->delimiter(',');
  lemma1->add_option("--a", lemma_grid.as)->delimiter(',');
  lemma1->add_option("--b", lemma_grid.bs)->delimiter(',');
  lemma1->add_option("--gammas", lemma_grid.gammas)->delimiter(',');

  std::string mdp_file;
  FunctionalFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "solve an MDP file by backward induction");
  solve->add_option("file", mdp_file, "MDP JSON")->required();
  solve_flags.attach(*solve);

  std::string eval_file;
  FunctionalFlags eval_flags;
  auto* eval = app.add_subcommand("eval", "evaluate a distribution or scenario tree file");
  eval->add_option("file", eval_file, "distribution or tree JSON")->required();
  eval_flags.attach(*eval);

  std::size_t trials = 10000;
  auto* check = app.add_subcommand("check", "randomized property suites");
  check->add_option("--trials", trials)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*payments) return cmd_payments(g, payments_args);
    if (*fig1) return cmd_fig1(g, fig1_args);
    if (*xy) return cmd_xy(g);
    if (*paths) return cmd_paths(g, paths_args);
    if (*lemma1) return cmd_lemma1(g, lemma_grid);
    if (*solve) return cmd_solve(g, mdp_file, solve_flags);
    if (*eval) return cmd_eval(g, eval_file, eval_flags);
    if (*check) return cmd_check(g, trials);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
