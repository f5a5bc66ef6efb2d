#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stopstare/bounds.hpp"
#include "stopstare/graph.hpp"
#include "stopstare/pool.hpp"
#include "stopstare/rr.hpp"

namespace stopstare {

enum class Algo { SSA, DSSA };

const char* algo_name(Algo a);
Algo algo_from_name(const std::string& name);  // "ssa" | "dssa"

enum class StopReason { CapReached, ConditionsMet };

const char* stop_reason_name(StopReason r);

struct SeedResult {
  std::vector<NodeId> seeds;  // k distinct nodes
  double est_influence;       // scale * cov / |R| at stop (scale = n, or the
                              // total target weight in weighted-root runs)
  uint64_t rr_count_main;     // RR sets in the main pool / stream
  uint64_t rr_count_verify;   // RR sets consumed by the verification
                              // estimator across iterations (0 for the
                              // single-stream algorithm, which reuses its
                              // stream instead)
  uint32_t iterations;
  StopReason stop_reason;
  double wall_ms;
  uint64_t rng_seed;
};

struct EstimateOutcome {
  bool exceeded;   // cap hit before the coverage target
  double value;    // scale * Lambda_2 / T; meaningless when exceeded
  uint64_t draws;  // RR sets consumed: the stopping T, or t_max if exceeded
};

struct StopStareConfig {
  uint32_t k = 1;
  double eps = 0.1;
  double delta = 0.1;
  DiffusionModel model = DiffusionModel::IC;
  // Error-budget split for the static algorithm's stopping conditions;
  // default is the closed-form split.  The dynamic algorithm picks its own
  // split and rejects an explicit one.
  std::optional<bounds::EpsilonSplit> split;
  uint64_t seed = 1;
  int threads = 1;
  // Testing hook: force caps instead of computing them (e.g. a tiny n_max to
  // exercise the cap path).
  std::optional<bounds::Caps> caps_override;
};

// Per-iteration internals of the dynamic algorithm, for inspection.
// cov_check is always the verification-half coverage; the eps fields are 0
// when the iteration failed the coverage precondition (passed_d1 == false)
// and they were never computed.
struct DssaIterationTrace {
  uint32_t t;
  uint64_t pool_half_size;
  double eps1, eps2, eps3, eps_t;
  uint64_t cov_check;
  bool passed_d1;
  bool passed_d2;
};

// Full run output for tests and the CLI: result plus the final main pool,
// the computed caps, and (dynamic algorithm only) iteration traces.
struct RunDetail {
  SeedResult result;
  RRCollection pool;
  bounds::Caps caps;
  std::vector<DssaIterationTrace> traces;
};

// Combined error of the dynamic stopping rule:
// (e1 + e2 + e1*e2) * (1 - 1/e - eps) + (1 - 1/e) * e3, applied verbatim
// (e1 may be negative).
double epsilon_t(double eps1, double eps2, double eps3, double eps);

// Stopping-rule influence estimator: draws uniform-root RR sets until the
// number covered by S reaches Lambda_2 = 1 + (1 + eps') * Upsilon(eps',
// delta'), returning n * Lambda_2 / T where T is the stopping index; returns
// exceeded if t_max draws do not get there.  One-sided guarantee:
// Pr[value <= (1 + eps') * I(S)] >= 1 - delta'.  Draw i uses
// RngStream(seed, i).
EstimateOutcome estimate_inf(const Graph& g, DiffusionModel model,
                             std::span<const NodeId> S, double eps_prime,
                             double delta_prime, uint64_t t_max, uint64_t seed,
                             int threads = 1);

// Static stop-and-stare: exponentially growing pool with greedy max-coverage
// at each checkpoint, stopping once the solution's coverage passes Lambda_1
// and an independent estimate confirms Cov * n / |R| <= (1 + eps1) * value.
// Guarantee: Pr[I(seeds) >= (1 - 1/e - eps) * OPT_k] >= 1 - delta.
SeedResult ssa(const Graph& g, const StopStareConfig& cfg);
RunDetail ssa_run(const Graph& g, const StopStareConfig& cfg);

// Dynamic stop-and-stare: one RR-set stream split into halves; greedy on the
// first half, verification coverage on the second, with per-iteration
// eps1/eps2/eps3 derived from the data.  Same guarantee as the static
// algorithm; typically fewer samples.
SeedResult dssa(const Graph& g, const StopStareConfig& cfg);
RunDetail dssa_run(const Graph& g, const StopStareConfig& cfg);

namespace detail {

// A sampling context: which graph/model to sample, how roots are drawn, and
// the measure that replaces n in influence estimates (n for uniform roots,
// total target weight for weighted roots).
struct SampleSpace {
  const Graph* graph;
  DiffusionModel model;
  RootSampler roots;
  double scale;
};

RunDetail ssa_core(const SampleSpace& space, const StopStareConfig& cfg);
RunDetail dssa_core(const SampleSpace& space, const StopStareConfig& cfg);
EstimateOutcome estimate_inf_core(const SampleSpace& space,
                                  std::span<const NodeId> S, double eps_prime,
                                  double delta_prime, uint64_t t_max,
                                  uint64_t seed, uint64_t first_stream,
                                  int threads);

}  // namespace detail

}  // namespace stopstare
