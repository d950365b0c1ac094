#include "moeflow/problem.hpp"

#include <cmath>

namespace moeflow {

std::vector<int> default_capacity(int n, int e, int k, double capacity_factor) {
  const int c = static_cast<int>(std::floor(capacity_factor * static_cast<double>(k) *
                                            static_cast<double>(n) / static_cast<double>(e)));
  return std::vector<int>(static_cast<size_t>(e), c);
}

void RoutingProblem::validate() const {
  const int n = num_tokens();
  const int e = num_experts();
  if (n < 1 || e < 1)
    throw Error(ErrorCode::ShapeMismatch, "problem needs at least one token and one expert");
  if (static_cast<int>(demand.size()) != n)
    throw Error(ErrorCode::ShapeMismatch, "demand length does not match token count");
  if (static_cast<int>(capacity.size()) != e)
    throw Error(ErrorCode::ShapeMismatch, "capacity length does not match expert count");
  for (int k_i : demand)
    if (k_i < 0 || k_i > e)
      throw Error(ErrorCode::InvalidK, "demand must satisfy 0 <= k_i <= e");
  for (int c_j : capacity)
    if (c_j < 0) throw Error(ErrorCode::ShapeMismatch, "capacity must be nonnegative");
}

RoutingProblem RoutingProblem::with_uniform_demand(Matrix affinities, int k,
                                                   double capacity_factor) {
  RoutingProblem problem;
  const int n = affinities.rows;
  const int e = affinities.cols;
  problem.affinities = std::move(affinities);
  problem.demand.assign(static_cast<size_t>(n), k);
  problem.capacity = default_capacity(n, e, k, capacity_factor);
  problem.capacity_factor = capacity_factor;
  problem.validate();
  return problem;
}

RoutingProblem RoutingProblem::with_capacity(Matrix affinities, std::vector<int> demand,
                                             std::vector<int> capacity) {
  RoutingProblem problem;
  problem.affinities = std::move(affinities);
  problem.demand = std::move(demand);
  problem.capacity = std::move(capacity);
  problem.validate();
  return problem;
}

}  // namespace moeflow
