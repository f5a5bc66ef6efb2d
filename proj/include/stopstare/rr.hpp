#pragma once

#include <span>
#include <utility>
#include <vector>

#include "stopstare/graph.hpp"
#include "stopstare/rng.hpp"

namespace stopstare {

// One reverse-reachable sample: the nodes that reach `root` through the live
// edges of a random realization.  `nodes` is deduplicated and starts with the
// root.
struct RRSet {
  NodeId root;
  std::vector<NodeId> nodes;
};

// Draws roots either uniformly over [0, n) or proportionally to fixed
// nonnegative node weights.  A weighted sampler whose weights are all equal
// degenerates to the uniform draw path, consuming the RNG identically — so
// runs with constant weights are bit-identical to unweighted runs.
class RootSampler {
 public:
  static RootSampler uniform(uint32_t n);
  // Throws std::invalid_argument on empty/negative/NaN weights or zero total.
  static RootSampler weighted(const std::vector<double>& weights);

  NodeId draw(RngStream& rng) const;
  uint32_t n() const { return n_; }
  // n for uniform sampling, sum of weights otherwise; this is the measure
  // that replaces n when influence is estimated from weighted roots.
  double total_weight() const { return total_; }
  bool is_uniform() const { return cum_.empty(); }

 private:
  uint32_t n_ = 0;
  double total_ = 0.0;
  std::vector<double> cum_;  // empty in uniform mode
  NodeId last_positive_ = 0;
};

inline NodeId sample_root_uniform(uint32_t n, RngStream& rng) {
  return rng.next_below(n);
}

// Reusable sampler holding per-thread scratch (epoch-marked visit array), so
// repeated sampling does no per-sample allocation or clearing.
class RRSampler {
 public:
  explicit RRSampler(const Graph& g);

  // Reverse BFS; every in-edge of a visited node gets an independent coin
  // with its weight, and live edges pull their source into the set.
  RRSet sample_ic(NodeId root, RngStream& rng);

  // Reverse single-in-edge walk: at node v, one uniform draw either picks
  // in-neighbor u with probability w(u,v) or stops with 1 - sum(w).  The
  // walk also stops on revisiting a node.  Requires an LT-feasible graph
  // (checked by the caller once, not per sample).
  RRSet sample_lt(NodeId root, RngStream& rng);

  RRSet sample(DiffusionModel model, NodeId root, RngStream& rng) {
    return model == DiffusionModel::IC ? sample_ic(root, rng)
                                       : sample_lt(root, rng);
  }

  // Allocation-free variant for batch generation: samples into an internal
  // buffer reused across calls and returns a view of it (root first, same
  // draws and same node order as the RRSet-returning methods).  The view is
  // invalidated by the next sample on this sampler.
  std::span<const NodeId> sample_into(DiffusionModel model, NodeId root,
                                      RngStream& rng) {
    return model == DiffusionModel::IC ? sample_ic_(root, rng, nullptr)
                                       : sample_lt_(root, rng, nullptr);
  }

 private:
  friend struct TracedRRSet;
  std::span<const NodeId> sample_ic_(NodeId root, RngStream& rng,
                                     std::vector<std::pair<NodeId, NodeId>>* live);
  std::span<const NodeId> sample_lt_(NodeId root, RngStream& rng,
                                     std::vector<std::pair<NodeId, NodeId>>* live);

  const Graph* g_;
  std::vector<uint32_t> mark_;
  uint32_t epoch_ = 0;
  // Doubles as the BFS queue (IC) / walk path (LT) and the sampled node
  // list handed back by sample_into.
  std::vector<NodeId> queue_;
};

// One-off convenience wrappers.
RRSet sample_rr_ic(const Graph& g, NodeId root, RngStream& rng);
RRSet sample_rr_lt(const Graph& g, NodeId root, RngStream& rng);

// Instrumented variants recording the sampled live edges, so tests can check
// that every returned node actually reaches the root in the realization.
struct TracedRRSet {
  RRSet rr;
  std::vector<std::pair<NodeId, NodeId>> live_edges;

  static TracedRRSet sample_ic(const Graph& g, NodeId root, RngStream& rng);
  static TracedRRSet sample_lt(const Graph& g, NodeId root, RngStream& rng);
};

}  // namespace stopstare
