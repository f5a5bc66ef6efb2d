#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stopstare/graph.hpp"
#include "stopstare/rng.hpp"

namespace stopstare {

struct ExactInfluenceReport {
  double influence;
  uint64_t outcomes_enumerated;  // 2^m for IC, prod(d_in + 1) for LT
  DiffusionModel model;
};

struct McEstimate {
  double mean;
  double std_error;
  uint64_t runs;
};

struct OptResult {
  std::vector<NodeId> seeds;
  double opt;
};

// One forward cascade from S to quiescence; returns the number of activated
// nodes.  IC flips one coin per edge out of an activated node toward a
// not-yet-active target; LT draws one uniform threshold per node and
// activates when accumulated in-weight from active nodes reaches it.
uint32_t simulate_once(const Graph& g, std::span<const NodeId> S,
                       DiffusionModel model, RngStream& rng);

// Mean and standard error of simulate_once over `runs` cascades, run i using
// RngStream(seed, i).  Exact integer accumulation, so the result does not
// depend on thread count.
McEstimate mc_influence(const Graph& g, std::span<const NodeId> S,
                        DiffusionModel model, uint64_t runs, uint64_t seed,
                        int threads = 1);

// Exact influence by enumerating every live-edge realization.  Guards: IC
// needs m <= 22; LT needs prod(d_in + 1) <= 2^22 (throws std::length_error).
// For LT a realization keeps at most one in-edge per node, in-edge (u,v)
// kept with probability w(u,v) — distributionally identical to the
// threshold formulation.
ExactInfluenceReport exact_influence(const Graph& g, std::span<const NodeId> S,
                                     DiffusionModel model);

// Per-node activation probabilities under the same enumeration (entry v =
// Pr[v active when seeding S]); same guards.  Sum equals exact influence;
// weighted influence for target weights w is the dot product with w.
std::vector<double> exact_activation_probabilities(const Graph& g,
                                                   std::span<const NodeId> S,
                                                   DiffusionModel model);

// Exhaustive OPT_k: maximizes exact_influence over all size-k sets, ties to
// the lexicographically smallest.  Guard: C(n,k) <= 1e5 on top of the
// exact_influence guards.
OptResult exact_opt(const Graph& g, uint32_t k, DiffusionModel model);

}  // namespace stopstare
