#pragma once

#include <vector>

#include "moeflow/matrix.hpp"
#include "moeflow/problem.hpp"

namespace moeflow {

/// Flow network over the bipartite token-expert graph.
///
/// Node layout: source = 0, tokens 1..n, experts n+1..n+e, sink n+e+1.
/// Arcs are stored as a flat edge list where edge id^1 is the paired
/// residual arc (capacity 0, negated cost), plus per-node adjacency of
/// edge ids. Augmentation updates residual capacities in O(1).
struct FlowGraph {
  struct Edge {
    int to = 0;
    long capacity = 0;  // residual capacity
    double cost = 0.0;
  };

  int num_tokens = 0;
  int num_experts = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adjacency;

  int num_nodes() const { return num_tokens + num_experts + 2; }
  int source() const { return 0; }
  int sink() const { return num_tokens + num_experts + 1; }
  int token_node(int i) const { return 1 + i; }
  int expert_node(int j) const { return 1 + num_tokens + j; }

  /// Appends a forward arc and its zero-capacity residual twin.
  void add_arc(int from, int to, long capacity, double cost);

  /// Forward arcs only (even edge ids), in insertion order.
  int num_forward_arcs() const { return static_cast<int>(edges.size()) / 2; }
};

struct FlowResult {
  long flow_value = 0;
  double total_cost = 0.0;
  AssignmentPlan plan;
};

/// Builds the three-layer graph for a routing problem:
/// source->token_i with capacity k_i, token_i->expert_j with unit capacity
/// and cost -A_ij, expert_j->sink with capacity c_j. Zero cost on the
/// source and sink layers.
FlowGraph build_graph(const RoutingProblem& problem);

/// Successive shortest augmenting paths with an SPFA (queue-based
/// label-correcting) search that tolerates the negative residual costs.
/// Maximizes flow first, then minimizes cost among maximum flows; the unit
/// middle-layer capacities keep every augmentation integral, so the
/// extracted plan is binary. Throws NegativeCycle if the residual network
/// ever contains one (impossible for graphs from build_graph).
FlowResult min_cost_max_flow(const FlowGraph& graph);

}  // namespace moeflow
