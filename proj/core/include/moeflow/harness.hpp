#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "moeflow/assignment.hpp"
#include "moeflow/gate_ops.hpp"
#include "moeflow/problem.hpp"

namespace moeflow {

/// SplitMix64: a counter-based generator with a published mixing function,
/// so seeded output is reproducible across platforms and toolchains.
/// Gaussians come from Box-Muller over two uniform draws, no caching.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next();
  double next_double();                 // uniform [0, 1)
  uint64_t next_below(uint64_t bound);  // uniform {0, .., bound-1} by modulo
  double next_gaussian(double sigma = 1.0);

 private:
  uint64_t state_;
};

enum class Distribution {
  Uniform,         // constant logits, every expert equally preferred
  GaussianLogits,  // logits i.i.d. N(0, sigma^2)
  Peaked,          // gaussian logits with alpha added to one random entry per row
};

Distribution parse_distribution(const std::string& name);  // throws BadSpec
const char* to_string(Distribution dist);

/// Deterministic synthetic routing problem description. The seed fully
/// determines the generated problem.
struct SyntheticSpec {
  int n = 16;
  int e = 4;
  int k = 2;
  double cf = 1.0;
  Distribution dist = Distribution::GaussianLogits;
  double dist_param = 1.0;  // sigma for gaussian logits, alpha for peaked
  OperatorId op = OperatorId::Softmax;
  double t = 1.0;           // SoftTopk temperature
  uint64_t seed = 0;
};

RoutingProblem generate(const SyntheticSpec& spec);

/// One router's results on one problem; mirrors one CSV line.
struct ComparisonRow {
  std::string router;
  uint64_t seed = 0;
  int n = 0;
  int e = 0;
  int k = 0;
  double cf = 1.0;
  double score = 0.0;
  double score_ratio = 1.0;  // feasibility-clipped score over the exact optimum
  std::vector<double> drop_by_rank;
  double mean_load_ratio = 0.0;
  double aux_loss = 0.0;
  long wall_us = 0;
};

struct CompareOptions {
  SinkhornOptions sinkhorn;
  double lambda = 1e-2;
  bool measure_time = true;  // when false, wall_us is written as 0 for byte-stable output
};

/// One row per requested router, plus the exact-optimum mcmf row when it was
/// not requested. Deterministic given (spec, routers).
std::vector<ComparisonRow> compare(const SyntheticSpec& spec,
                                   const std::vector<RouterId>& routers,
                                   const CompareOptions& options = {});

extern const char* const kCsvHeader;  // router,seed,n,e,k,cf,score,...

std::string to_csv_row(const ComparisonRow& row);
std::string to_csv(const std::vector<ComparisonRow>& rows);
std::string to_json(const std::vector<ComparisonRow>& rows);

enum class SweepParam { N, E, K, Cf, Alpha, T };

SweepParam parse_sweep_param(const std::string& name);  // throws BadSpec
const char* to_string(SweepParam param);

/// Runs `trials` seeded compares per value of the varied parameter (trial
/// seeds are spec.seed + trial index), in parallel across trials, merged in
/// seed order. Per-trial rows are followed by mean and std aggregate rows
/// per (value, router), named "<router>:mean" / "<router>:std".
struct SweepResult {
  std::vector<std::string> lines;  // CSV rows prefixed with param,value
  std::string csv() const;
};

SweepResult sweep(const SyntheticSpec& base, SweepParam param,
                  const std::vector<double>& values, int trials,
                  const std::vector<RouterId>& routers,
                  const CompareOptions& options = {});

/// Exhaustive-enumeration optimum of sum P_ij A_ij over binary plans with
/// row sums <= k_i and column sums <= c_j. Independent of the flow solver:
/// plain recursion over per-token expert subsets with capacity pruning.
/// Refuses instances whose subset search space exceeds `max_search_space`
/// (throws BadSpec).
double brute_force_max_score(const RoutingProblem& problem,
                             double max_search_space = 1e8);

/// Affinities i.i.d. uniform(0,1) from the seed, uniform demand k, default
/// capacity at cf = 1.0; the instance family the oracle CLI evaluates.
RoutingProblem generate_uniform_affinities(int n, int e, int k, uint64_t seed,
                                           double cf = 1.0);

/// Plain-text problem file: line 1 "n e k cf", then n rows of e affinities,
/// optionally followed by "c: v1 .. ve" to override the derived capacity.
RoutingProblem read_problem(std::istream& in);
RoutingProblem read_problem_file(const std::string& path);

/// Full evaluation of one router on an explicit problem (route subcommand).
ComparisonRow evaluate_router(const RoutingProblem& problem, RouterId router,
                              const CompareOptions& options = {});

}  // namespace moeflow
