#include "moeflow/gate_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace moeflow {

namespace {

constexpr double kGradTopkFloor = -1e-12;

void check_nonempty(const LogitVector& logits) {
  if (logits.empty()) throw Error(ErrorCode::EmptyInput, "operator input is empty");
}

void check_k(const LogitVector& logits, int k) {
  check_nonempty(logits);
  if (k < 1 || k > static_cast<int>(logits.size()))
    throw Error(ErrorCode::InvalidK, "k must satisfy 1 <= k <= e");
}

double log_sum_exp(const std::vector<double>& xs) {
  double m = *std::max_element(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// VJP of softmax at a point where the forward value is s:
// out_j = s_j * (u_j - <u, s>).
LogitVector softmax_vjp(const GateVector& s, const GateVector& upstream) {
  double dot = 0.0;
  for (size_t i = 0; i < s.size(); ++i) dot += upstream[i] * s[i];
  LogitVector grad(s.size());
  for (size_t i = 0; i < s.size(); ++i) grad[i] = s[i] * (upstream[i] - dot);
  return grad;
}

// Shared forward trace for softkmax: per level, the damped logits and their
// softmax.
struct SoftKmaxTrace {
  std::vector<GateVector> y;  // y[l] before level l+1, y[0] = 0
  std::vector<LogitVector> g;
  std::vector<GateVector> s;
};

SoftKmaxTrace softkmax_trace(const LogitVector& x, int k) {
  const size_t e = x.size();
  SoftKmaxTrace trace;
  GateVector y(e, 0.0);
  for (int level = 0; level < k; ++level) {
    trace.y.push_back(y);
    LogitVector g(e);
    for (size_t i = 0; i < e; ++i) g[i] = (1.0 - y[i]) * x[i];
    GateVector s = softmax(g);
    trace.g.push_back(g);
    trace.s.push_back(s);
    for (size_t i = 0; i < e; ++i) y[i] += s[i];
  }
  trace.y.push_back(y);
  return trace;
}

// Forward trace for iter_topk: weights, normalized output h, and the
// stabilized terms exp(x - m) / N needed for the weight derivative.
struct IterTopkTrace {
  std::vector<GateVector> y;
  std::vector<GateVector> w;
  std::vector<GateVector> h;
  std::vector<GateVector> ex_over_n;  // e^{x_j} / N per level
};

IterTopkTrace iter_topk_trace(const LogitVector& x, int k) {
  const size_t e = x.size();
  const double m = *std::max_element(x.begin(), x.end());
  IterTopkTrace trace;
  GateVector y(e, 0.0);
  for (int level = 0; level < k; ++level) {
    trace.y.push_back(y);
    GateVector w(e), h(e), eon(e);
    double norm = 0.0;
    for (size_t i = 0; i < e; ++i) {
      w[i] = 1.0 - y[i];
      norm += w[i] * std::exp(x[i] - m);
    }
    for (size_t i = 0; i < e; ++i) {
      eon[i] = std::exp(x[i] - m) / norm;
      h[i] = w[i] * eon[i];
    }
    trace.w.push_back(w);
    trace.h.push_back(h);
    trace.ex_over_n.push_back(eon);
    for (size_t i = 0; i < e; ++i) y[i] += h[i];
  }
  trace.y.push_back(y);
  return trace;
}

// Forward trace for grad_topk. Level l holds g^(l), z^(l) and, for l >= 1,
// the differences d_i = g_i^(l-1) - z^(l-1) feeding log1p(-exp(d)).
struct GradTopkTrace {
  std::vector<LogitVector> g;
  std::vector<double> z;
  std::vector<LogitVector> d;
};

GradTopkTrace grad_topk_trace(const LogitVector& x, int k) {
  const size_t e = x.size();
  GradTopkTrace trace;
  LogitVector g = x;
  double z = log_sum_exp(g);  // minus log 1
  trace.g.push_back(g);
  trace.z.push_back(z);
  for (int level = 2; level <= k; ++level) {
    LogitVector d(e), g_next(e);
    for (size_t i = 0; i < e; ++i) {
      d[i] = g[i] - z;
      if (d[i] > kGradTopkFloor)
        throw Error(ErrorCode::NumericalDomain,
                    "log(e^z - e^g) underflow: one logit dominates the rest");
      g_next[i] = x[i] + z + std::log1p(-std::exp(d[i]));
    }
    g = g_next;
    z = log_sum_exp(g) - std::log(static_cast<double>(level));
    trace.g.push_back(g);
    trace.z.push_back(z);
    trace.d.push_back(d);
  }
  return trace;
}

}  // namespace

TemperatureSchedule::TemperatureSchedule(double t0_, double t_final_, long decay_steps_,
                                         long current_step_)
    : t0(t0_), t_final(t_final_), decay_steps(decay_steps_), current_step(current_step_) {
  if (t0 <= 0.0 || t_final < 0.0 || t_final > t0)
    throw Error(ErrorCode::InvalidTemperature,
                "schedule requires t0 > 0 and 0 <= t_final <= t0");
  if (decay_steps < 0 || current_step < 0)
    throw Error(ErrorCode::InvalidTemperature, "schedule steps must be nonnegative");
}

double TemperatureSchedule::at(long step) const {
  if (step >= decay_steps || decay_steps == 0) return t_final;
  double frac = static_cast<double>(step) / static_cast<double>(decay_steps);
  return t0 + (t_final - t0) * frac;
}

TemperatureSchedule TemperatureSchedule::advanced() const {
  TemperatureSchedule next = *this;
  next.current_step = current_step + 1;
  return next;
}

double temperature_at(const TemperatureSchedule& schedule, long step) {
  return schedule.at(step);
}

OperatorId parse_operator(const std::string& name) {
  if (name == "softmax") return OperatorId::Softmax;
  if (name == "sigmoid") return OperatorId::Sigmoid;
  if (name == "soft_topk") return OperatorId::SoftTopk;
  if (name == "softkmax") return OperatorId::SoftKmax;
  if (name == "iter_topk") return OperatorId::IterTopk;
  if (name == "grad_topk") return OperatorId::GradTopk;
  throw Error(ErrorCode::UnknownOperator, "no operator named '" + name + "'");
}

const char* to_string(OperatorId op) {
  switch (op) {
    case OperatorId::Softmax:  return "softmax";
    case OperatorId::Sigmoid:  return "sigmoid";
    case OperatorId::SoftTopk: return "soft_topk";
    case OperatorId::SoftKmax: return "softkmax";
    case OperatorId::IterTopk: return "iter_topk";
    case OperatorId::GradTopk: return "grad_topk";
  }
  throw Error(ErrorCode::UnknownOperator, "invalid operator id");
}

std::vector<int> topk_indices(const std::vector<double>& values, int k) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  order.resize(k);
  return order;
}

GateVector softmax(const LogitVector& logits) {
  check_nonempty(logits);
  const double m = *std::max_element(logits.begin(), logits.end());
  GateVector out(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

GateVector sigmoid(const LogitVector& logits) {
  check_nonempty(logits);
  GateVector out(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-logits[i]));
  return out;
}

GateVector arg_topk(const GateVector& gates, int k) {
  check_k(gates, k);
  GateVector out(gates.size(), 0.0);
  for (int idx : topk_indices(gates, k)) out[idx] = 1.0;
  return out;
}

GateVector soft_topk(const LogitVector& logits, int k, double t) {
  check_k(logits, k);
  if (t < 0.0) throw Error(ErrorCode::InvalidTemperature, "soft_topk requires t >= 0");
  GateVector s = softmax(logits);
  GateVector out(s.size());
  for (size_t i = 0; i < s.size(); ++i) out[i] = t * s[i];
  for (int idx : topk_indices(logits, k)) out[idx] = s[idx];
  return out;
}

GateVector softkmax(const LogitVector& logits, int k) {
  check_k(logits, k);
  return softkmax_trace(logits, k).y.back();
}

GateVector iter_topk(const LogitVector& logits, int k) {
  check_k(logits, k);
  return iter_topk_trace(logits, k).y.back();
}

GateVector grad_topk(const LogitVector& logits, int k) {
  check_k(logits, k);
  GradTopkTrace trace = grad_topk_trace(logits, k);
  const LogitVector& g = trace.g.back();
  const double z = trace.z.back();
  GateVector out(logits.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::exp(g[i] - z);
  return out;
}

GateVector apply_operator(OperatorId op, const LogitVector& logits, int k, double t) {
  switch (op) {
    case OperatorId::Softmax:  return softmax(logits);
    case OperatorId::Sigmoid:  return sigmoid(logits);
    case OperatorId::SoftTopk: return soft_topk(logits, k, t);
    case OperatorId::SoftKmax: return softkmax(logits, k);
    case OperatorId::IterTopk: return iter_topk(logits, k);
    case OperatorId::GradTopk: return grad_topk(logits, k);
  }
  throw Error(ErrorCode::UnknownOperator, "invalid operator id");
}

namespace {

LogitVector softkmax_backward(const LogitVector& x, int k, const GateVector& upstream) {
  const size_t e = x.size();
  SoftKmaxTrace trace = softkmax_trace(x, k);
  LogitVector x_bar(e, 0.0);
  GateVector y_bar = upstream;
  for (int level = k - 1; level >= 0; --level) {
    // y_next = y + softmax(g), g = (1 - y) * x
    const GateVector& s = trace.s[level];
    const GateVector& y = trace.y[level];
    LogitVector g_bar = softmax_vjp(s, y_bar);
    for (size_t i = 0; i < e; ++i) {
      x_bar[i] += g_bar[i] * (1.0 - y[i]);
      y_bar[i] += -g_bar[i] * x[i];  // y_bar already carries the identity path
    }
  }
  return x_bar;
}

LogitVector iter_topk_backward(const LogitVector& x, int k, const GateVector& upstream) {
  const size_t e = x.size();
  IterTopkTrace trace = iter_topk_trace(x, k);
  LogitVector x_bar(e, 0.0);
  GateVector y_bar = upstream;
  for (int level = k - 1; level >= 0; --level) {
    const GateVector& h = trace.h[level];
    const GateVector& eon = trace.ex_over_n[level];
    // dh_i/dx_j = h_i (delta_ij - h_j); dh_i/dw_j = (delta_ij - h_i) e^{x_j}/N
    double dot_h = 0.0;
    for (size_t i = 0; i < e; ++i) dot_h += y_bar[i] * h[i];
    GateVector w_bar(e);
    for (size_t j = 0; j < e; ++j) {
      x_bar[j] += h[j] * (y_bar[j] - dot_h);
      w_bar[j] = eon[j] * (y_bar[j] - dot_h);
    }
    // w = 1 - y
    for (size_t i = 0; i < e; ++i) y_bar[i] += -w_bar[i];
  }
  return x_bar;
}

LogitVector grad_topk_backward(const LogitVector& x, int k, const GateVector& upstream) {
  const size_t e = x.size();
  GradTopkTrace trace = grad_topk_trace(x, k);
  const int levels = static_cast<int>(trace.g.size());  // == k
  const LogitVector& g_last = trace.g.back();
  const double z_last = trace.z.back();

  LogitVector x_bar(e, 0.0);
  LogitVector g_bar(e, 0.0);
  double z_bar = 0.0;
  for (size_t i = 0; i < e; ++i) {
    double y_i = std::exp(g_last[i] - z_last);
    g_bar[i] = upstream[i] * y_i;
    z_bar -= upstream[i] * y_i;
  }
  for (int level = levels - 1; level >= 1; --level) {
    // z^(l) = lse(g^(l)) - log(l+1)
    GateVector sg = softmax(trace.g[level]);
    for (size_t i = 0; i < e; ++i) g_bar[i] += z_bar * sg[i];
    z_bar = 0.0;
    // g_i^(l) = x_i + z^(l-1) + log1p(-exp(d_i)), d_i = g_i^(l-1) - z^(l-1)
    const LogitVector& d = trace.d[level - 1];
    LogitVector g_prev_bar(e, 0.0);
    for (size_t i = 0; i < e; ++i) {
      const double r = std::exp(d[i]) / (1.0 - std::exp(d[i]));
      x_bar[i] += g_bar[i];
      g_prev_bar[i] = -g_bar[i] * r;
      z_bar += g_bar[i] * (1.0 + r);
    }
    g_bar = g_prev_bar;
  }
  // level 0: g = x, z = lse(x)
  GateVector s0 = softmax(x);
  for (size_t i = 0; i < e; ++i) x_bar[i] += g_bar[i] + z_bar * s0[i];
  return x_bar;
}

}  // namespace

LogitVector backward(OperatorId op, const LogitVector& logits, int k, double t,
                     const GateVector& upstream) {
  check_nonempty(logits);
  if (upstream.size() != logits.size())
    throw Error(ErrorCode::ShapeMismatch, "upstream cotangent size mismatch");
  switch (op) {
    case OperatorId::Softmax:
      return softmax_vjp(softmax(logits), upstream);
    case OperatorId::Sigmoid: {
      GateVector s = sigmoid(logits);
      LogitVector grad(s.size());
      for (size_t i = 0; i < s.size(); ++i) grad[i] = upstream[i] * s[i] * (1.0 - s[i]);
      return grad;
    }
    case OperatorId::SoftTopk: {
      check_k(logits, k);
      if (t < 0.0) throw Error(ErrorCode::InvalidTemperature, "soft_topk requires t >= 0");
      // out = w * softmax with the mask weights w held constant, so the VJP
      // is the softmax VJP against w * upstream.
      GateVector weighted(upstream.size());
      for (size_t i = 0; i < upstream.size(); ++i) weighted[i] = t * upstream[i];
      for (int idx : topk_indices(logits, k)) weighted[idx] = upstream[idx];
      return softmax_vjp(softmax(logits), weighted);
    }
    case OperatorId::SoftKmax:
      check_k(logits, k);
      return softkmax_backward(logits, k, upstream);
    case OperatorId::IterTopk:
      check_k(logits, k);
      return iter_topk_backward(logits, k, upstream);
    case OperatorId::GradTopk:
      check_k(logits, k);
      return grad_topk_backward(logits, k, upstream);
  }
  throw Error(ErrorCode::UnknownOperator, "invalid operator id");
}

}  // namespace moeflow
