#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irm/execution.hpp"
#include "irm/kernels.hpp"
#include "irm/models.hpp"
#include "irm/property_checks.hpp"
#include "irm/scenario_tree.hpp"

// Reproduction studies behind the `irm` subcommands. Every function is
// deterministic in its arguments; the CLI only formats the results.
namespace irm::studies {

// ---------------------------------------------------------------------------
// payments

struct DeuRow {
  double gamma;
  double deu_a;
  double deu_b;
};

struct PaymentsReport {
  double lambda;
  double alpha;
  models::PaymentPlan plan;
  double icte_a;
  double icte_b;
  // "A", "B" or "tie".
  std::string preferred;
  double boundary;          // 1 - p sum_{n < days} lambda^n
  double boundary_printed;  // same with days - 1 terms over days - 1
  bool condition_i;         // alpha > boundary_printed and lambda < 1
  bool condition_ii;        // alpha > epsilon and lambda == 1
  bool caption_condition;   // alpha > boundary
  std::vector<DeuRow> deu;  // exponential disutility
  double deu_linear_a;
  double deu_linear_b;
};

PaymentsReport payments_report(double lambda, double alpha, const models::PaymentPlan& plan = {},
                               const std::vector<double>& gammas = {1e-4, 1e-3, 1e-2});

// ---------------------------------------------------------------------------
// fig1

struct RegionGrid {
  // Cell centres (i + 1/2) / steps.
  std::vector<double> lambda_axis;
  std::vector<double> alpha_axis;
  // cells[i][j]: ICTE_0(A) < ICTE_0(B) at (lambda_i, alpha_j), by recursion.
  std::vector<std::vector<bool>> cells;
  // alpha > alpha*(lambda_i).
  std::vector<std::vector<bool>> closed_form;
  std::vector<std::pair<double, double>> boundary;
  std::size_t disagreements = 0;
  // Disagreements more than one grid step away from the boundary.
  std::size_t far_disagreements = 0;
};

RegionGrid region_grid(int lambda_steps, int alpha_steps, const models::PaymentPlan& plan = {},
                       Execution execution = Execution::kOpenMp);

// ---------------------------------------------------------------------------
// xy

struct OptionTrees {
  double flat;       // RM of the discounted total
  double recursive;  // IRM on the delayed tree
};

struct XyReport {
  double gamma;
  double lambda;
  std::vector<PreferenceAt> erm_schedule;
  bool erm_flips;
  std::vector<PreferenceAt> mean_schedule;
  bool mean_flips;
  OptionTrees erm_x;
  OptionTrees erm_y;
  // Action chosen at stage 0 by solve_dp on xy_mdp under all-ERM.
  std::string dp_choice;
  double dp_value;
};

XyReport xy_report(double gamma, double lambda);

// ---------------------------------------------------------------------------
// paths

struct PathsRow {
  double alpha;
  double cte_p;
  double cte_q;
  double icte_p;
  double icte_q;
};

struct ErmCurvePoint {
  double gamma;
  double erm_p;
  double erm_q;
};

struct PathsReport {
  double mean_p;
  double mean_q;
  std::vector<PathsRow> rows;
  std::vector<ErmCurvePoint> curve;  // sorted by gamma
  bool ordering_holds;                // erm_p >= erm_q - 1e-9 everywhere
  bool monotone_in_gamma;
};

PathsReport paths_report(const std::vector<double>& alphas, const std::vector<double>& gammas);

std::vector<double> default_paths_gammas();

// ---------------------------------------------------------------------------
// lemma1

struct Lemma1Report {
  std::vector<kernels::Lemma1Point> points;
  std::size_t violations = 0;  // erm_y - erm_x > 1e-9
  double max_violation = 0.0;  // max(0, erm_y - erm_x)
  // 20 X + 20 and 20 Y + 20 at x = 3 reproduce T_P and T_Q exactly.
  bool affine_matches_paths = false;
};

struct Lemma1Grid {
  std::vector<double> xs{0.25, 0.5, 1.0, 2.0, 3.0, 5.0};
  std::vector<double> as{0.5, 1.0, 20.0};
  std::vector<double> bs{-10.0, 0.0, 20.0};
  std::vector<double> gammas{-5.0, -2.0, -1.0, -0.5, -0.1, -0.01, -0.001, 0.0,
                             0.001, 0.01, 0.1,  0.5,  1.0,  2.0,  5.0};
};

Lemma1Report lemma1_report(const Lemma1Grid& grid = {}, Execution execution = Execution::kOpenMp);

// ---------------------------------------------------------------------------
// check

// Var(X); monotonicity fixture that is expected to fail.
double variance(const MixedDistribution& dist);

struct SuiteEntry {
  PropertyReport report;
  bool expected_pass;
  bool as_expected() const { return report.passed == expected_pass; }
};

// Monotonicity, translation invariance, positive homogeneity and composite
// suites with their expected verdicts.
std::vector<SuiteEntry> property_suite(std::size_t trials, std::uint64_t seed);

// ERM(1) of d = {0, 1} w.p. 1/2 each scaled by a = 2, against 2 ERM(1)(d).
PropertyReport erm_homogeneity_counterexample();

}  // namespace irm::studies
