#pragma once

#include <string>
#include <vector>

#include "moeflow/error.hpp"

namespace moeflow {

/// Raw per-token router scores (one entry per expert).
using LogitVector = std::vector<double>;
/// Nonnegative token-expert affinity coefficients produced by a gating operator.
using GateVector = std::vector<double>;

/// Temperature annealing for the soft top-k operator: linear decay from `t0`
/// at step 0 to `t_final` at step `decay_steps`, constant afterwards.
/// Immutable value; `advanced()` returns the schedule one step later.
struct TemperatureSchedule {
  double t0 = 4.0;
  double t_final = 1.0;
  long decay_steps = 0;
  long current_step = 0;

  TemperatureSchedule() = default;
  TemperatureSchedule(double t0_, double t_final_, long decay_steps_, long current_step_ = 0);

  double at(long step) const;
  double current() const { return at(current_step); }
  TemperatureSchedule advanced() const;
};

double temperature_at(const TemperatureSchedule& schedule, long step);

enum class OperatorId {
  Softmax,
  Sigmoid,
  SoftTopk,
  SoftKmax,
  IterTopk,
  GradTopk,
};

OperatorId parse_operator(const std::string& name);  // throws UnknownOperator
const char* to_string(OperatorId op);

/// Numerically stable softmax (max-subtraction). Output sums to 1.
GateVector softmax(const LogitVector& logits);

/// Elementwise logistic function.
GateVector sigmoid(const LogitVector& logits);

/// One-hot-style vector with ones at the k largest entries of `gates`.
/// Ties break toward the lower index.
GateVector arg_topk(const GateVector& gates, int k);

/// Softmax with the off-top-k entries attenuated by the temperature t:
/// output_i = softmax_i on the top-k support, t * softmax_i elsewhere.
/// t=1 recovers softmax; t=0 masks softmax to the top-k support.
GateVector soft_topk(const LogitVector& logits, int k, double t);

/// k accumulation rounds of softmax over progressively damped logits
/// g = (1 - y) * x. Output sums to k.
GateVector softkmax(const LogitVector& logits, int k);

/// k accumulation rounds of the weighted softmax g(x; w) with w = 1 - y.
/// Output sums to k.
GateVector iter_topk(const LogitVector& logits, int k);

/// Log-space top-k relaxation: repeatedly removes the already-claimed mass
/// from the partition function. Output entries lie in [0,1] and sum to k.
/// Throws NumericalDomain if an intermediate log(e^z - e^g) degenerates,
/// which happens when one logit dominates beyond ~e^27.
GateVector grad_topk(const LogitVector& logits, int k);

/// Applies the operator `op` with the given (k, t) arguments. k is ignored
/// by Softmax/Sigmoid and t by everything except SoftTopk.
GateVector apply_operator(OperatorId op, const LogitVector& logits, int k, double t);

/// Vector-Jacobian product of the forward operator at `logits` with the
/// cotangent `upstream`. For SoftTopk the top-k support is treated as
/// constant (straight-through on the mask).
LogitVector backward(OperatorId op, const LogitVector& logits, int k, double t,
                     const GateVector& upstream);

/// Indices of the k largest entries, ties toward the lower index,
/// returned in descending-value order.
std::vector<int> topk_indices(const std::vector<double>& values, int k);

}  // namespace moeflow
