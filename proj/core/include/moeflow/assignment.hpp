#pragma once

#include <string>
#include <vector>

#include "moeflow/matrix.hpp"
#include "moeflow/problem.hpp"

namespace moeflow {

struct SinkhornOptions {
  double epsilon = 0.01;
  int max_iters = 200;
  double tol = 1e-6;
};

/// Rank-major greedy with hard capacities: all first choices are placed
/// before any second choices, tokens in index order within a rank. A slot
/// whose preferred expert is full is dropped, no fallback.
AssignmentPlan route_greedy_topk(const RoutingProblem& problem);

/// Greedy followed by a rerouting pass: every dropped slot is reassigned to
/// the highest-affinity expert that still has capacity and does not already
/// serve that token.
AssignmentPlan route_iterative(const RoutingProblem& problem);

/// Inverted routing: each expert independently picks its top-c_j tokens.
/// Column sums are exact; row sums are unconstrained (a token may get any
/// number of experts, including zero).
AssignmentPlan route_expert_choice(const RoutingProblem& problem);

/// Capacity-ignoring top-k per token. No drops, unbounded imbalance.
AssignmentPlan route_dropless(const RoutingProblem& problem);

/// Entropic optimal transport between token demand and expert capacity,
/// solved by log-domain Sinkhorn scaling on the kernel exp(A/epsilon).
/// Excess capacity (sum c > sum k) is absorbed by an internal zero-affinity
/// slack absorber so the marginals balance; the returned plan is on the
/// original n x e cells with the slack stripped. Throws InfeasibleMarginals
/// when sum c < sum k.
TransportPlan sinkhorn(const RoutingProblem& problem, const SinkhornOptions& options = {});

/// Greedy rounding of a fractional plan: cells in descending value order
/// (ties: lower token, then lower expert), accepted while the token still
/// needs experts and the expert has residual capacity.
AssignmentPlan round_transport(const TransportPlan& plan, const RoutingProblem& problem);

/// Sinkhorn on the full problem followed by round_transport.
AssignmentPlan route_sbase(const RoutingProblem& problem, const SinkhornOptions& options = {});

/// Two-stage router for uniform demand k=2: stage 1 assigns every token to
/// its argmax expert unconditionally and clamps residual capacity at zero;
/// stage 2 routes the remaining one-expert-per-token problem (argmax column
/// masked out) with Sinkhorn plus rounding. When residual capacity cannot
/// serve every token the second slots are dropped, never the first.
AssignmentPlan route_maxscore(const RoutingProblem& problem, const SinkhornOptions& options = {});

/// Exact maximizer of sum P_ij A_ij over binary plans with row sums <= k
/// and column sums <= c, via build_graph + min_cost_max_flow.
AssignmentPlan route_mcmf(const RoutingProblem& problem);

/// sum_ij P_ij * A_ij.
double score(const AssignmentPlan& plan, const Matrix& affinities);

/// Projects a plan into the feasible set: rows exceeding demand keep their
/// k_i highest-affinity assignments, then columns exceeding capacity keep
/// their c_j highest-affinity assignments (ties toward lower index). Used to
/// compare capacity-violating routers against the exact optimum.
AssignmentPlan clip_to_feasible(const AssignmentPlan& plan, const RoutingProblem& problem);

enum class RouterId {
  Greedy,
  Iterative,
  ExpertChoice,
  Dropless,
  Sbase,
  Maxscore,
  Mcmf,
};

RouterId parse_router(const std::string& name);  // throws UnknownRouter
const char* to_string(RouterId router);
const std::vector<RouterId>& all_routers();

AssignmentPlan route(RouterId router, const RoutingProblem& problem,
                     const SinkhornOptions& options = {});

}  // namespace moeflow
