#pragma once

#include <vector>

#include "moeflow/matrix.hpp"

namespace moeflow {

/// Per-expert capacity floor(c_f * k * n / e), the classic parallel-friendly
/// default, replicated across all e experts.
std::vector<int> default_capacity(int n, int e, int k, double capacity_factor);

/// A routing instance: nonnegative token-expert affinities A (n x e), the
/// number of experts each token wants (demand k), and how many tokens each
/// expert may serve (capacity c).
struct RoutingProblem {
  Matrix affinities;          // n x e, entries >= 0
  std::vector<int> demand;    // n entries, 0 <= k_i <= e
  std::vector<int> capacity;  // e entries, c_j >= 0
  double capacity_factor = 1.0;

  int num_tokens() const { return affinities.rows; }
  int num_experts() const { return affinities.cols; }

  /// Validates shapes and demand bounds; throws ShapeMismatch / InvalidK.
  void validate() const;

  /// Uniform demand k per token, capacity derived via default_capacity.
  static RoutingProblem with_uniform_demand(Matrix affinities, int k,
                                            double capacity_factor = 1.0);

  /// Explicit demand and capacity vectors.
  static RoutingProblem with_capacity(Matrix affinities, std::vector<int> demand,
                                      std::vector<int> capacity);
};

}  // namespace moeflow
