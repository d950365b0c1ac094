#pragma once

#include <vector>

#include "moeflow/matrix.hpp"
#include "moeflow/problem.hpp"

namespace moeflow {

/// lambda * (1/e) * sum_j (mean_i A_ij) * (mean_i P_ij).
double aux_loss(const Matrix& affinities, const AssignmentPlan& plan, double lambda);

/// Fraction of tokens whose r-th-highest-affinity expert (ties toward lower
/// index) is missing from their assigned set, for ranks r = 1..k.
std::vector<double> drop_rate_by_rank(const RoutingProblem& problem,
                                      const AssignmentPlan& plan, int k);

struct LoadRatio {
  std::vector<double> sorted_ratios;  // colsum_j / c_j, ascending
  double mean = 0.0;
  std::vector<int> excluded_experts;  // experts with c_j == 0
};

/// Tokens served per expert divided by its capacity. Experts with zero
/// capacity are excluded from the ratios and flagged.
LoadRatio load_ratio(const AssignmentPlan& plan, const std::vector<int>& capacity);

/// Entry r-1 is the mean over tokens of the r-th largest affinity in the row.
std::vector<double> mean_affinity_by_rank(const Matrix& affinities, int k);

struct RoutingReport {
  std::vector<double> drop_rate;           // by rank, r = 1..k
  std::vector<double> mean_affinity;       // by rank
  std::vector<double> load_ratio_sorted;   // ascending
  double mean_load_ratio = 0.0;
  double total_score = 0.0;
  double aux_loss = 0.0;
};

RoutingReport make_report(const RoutingProblem& problem, const AssignmentPlan& plan,
                          int k, double lambda);

}  // namespace moeflow
