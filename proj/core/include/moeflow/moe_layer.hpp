#pragma once

#include <vector>

#include "moeflow/assignment.hpp"
#include "moeflow/gate_ops.hpp"
#include "moeflow/matrix.hpp"
#include "moeflow/metrics.hpp"

namespace moeflow {

struct RouterWeights {
  Matrix w;  // d x e
};

/// A linear expert E(x) = W x. Linearity keeps end-to-end oracles exact.
struct ToyExpert {
  Matrix w;  // d x d
};

struct MoEConfig {
  int d = 0;
  int e = 0;
  int k = 1;
  OperatorId op = OperatorId::Softmax;
  TemperatureSchedule schedule;
  RouterId router = RouterId::Greedy;
  double capacity_factor = 1.0;
  SinkhornOptions sinkhorn;
  double aux_lambda = 1e-2;
};

struct MoEOutput {
  Matrix outputs;  // n x d
  AssignmentPlan plan;
  Matrix gates;    // n x e affinities the router consumed
  RoutingReport report;
};

/// Toy-scale MoE forward pass: gates = operator(x_i W_g), a plan from the
/// configured router, and y_i = sum_j plan_ij * gate_ij * E_j(x_i). Experts
/// not in the plan contribute nothing; fully dropped tokens map to zero.
MoEOutput moe_forward(const MoEConfig& config, const RouterWeights& weights,
                      const std::vector<ToyExpert>& experts, const Matrix& batch,
                      long step);

/// Central finite differences (step 1e-5) of the scalar loss
/// L = mean_i ||y_i||^2 with respect to every W_g entry. The discrete plan is
/// frozen at the unperturbed point, so only the differentiable gate path is
/// probed.
Matrix numeric_grad_router_weights(const MoEConfig& config, const RouterWeights& weights,
                                   const std::vector<ToyExpert>& experts,
                                   const Matrix& batch, long step);

}  // namespace moeflow
