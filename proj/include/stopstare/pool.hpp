#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stopstare/graph.hpp"
#include "stopstare/rr.hpp"

namespace stopstare {

struct GreedyResult {
  std::vector<NodeId> seeds;
  uint64_t coverage;
};

// Append-only pool of RR sets in generation order, with a per-node inverted
// index.  Ranges [lo, hi) refer to RR-set ids, i.e. positions in generation
// order, which is what the single-stream algorithm slices into halves.
class RRCollection {
 public:
  explicit RRCollection(uint32_t n) : n_(n), index_(n) {}

  uint32_t n() const { return n_; }
  uint64_t size() const { return offsets_.size() - 1; }
  uint64_t total_items() const { return nodes_.size(); }

  void append(const RRSet& rr);

  std::span<const NodeId> set_nodes(uint64_t id) const {
    return {nodes_.data() + offsets_[id], offsets_[id + 1] - offsets_[id]};
  }
  const std::vector<uint32_t>& sets_containing(NodeId u) const {
    return index_.at(u);
  }

  // Number of RR sets with ids in [lo, hi) that intersect S.
  uint64_t cov(std::span<const NodeId> S) const { return cov(S, 0, size()); }
  uint64_t cov(std::span<const NodeId> S, uint64_t lo, uint64_t hi) const;

  // n * cov(S, range) / |range|; the range must be nonempty.
  double estimate_influence(std::span<const NodeId> S) const {
    return estimate_influence(S, 0, size());
  }
  double estimate_influence(std::span<const NodeId> S, uint64_t lo,
                            uint64_t hi) const;

  // Greedy max-coverage over the range: k distinct nodes picked by marginal
  // gain, ties to the smallest id, zero-gain picks padding to exactly k.
  // Guaranteed >= (1 - 1/e) of the best size-k coverage.
  GreedyResult max_coverage_greedy(uint32_t k) const {
    return max_coverage_greedy(k, 0, size());
  }
  GreedyResult max_coverage_greedy(uint32_t k, uint64_t lo, uint64_t hi) const;

  bool operator==(const RRCollection&) const = default;

 private:
  friend void append_batch(RRCollection&, const Graph&, DiffusionModel,
                           const RootSampler&, uint64_t, uint64_t, uint64_t,
                           int);
  // Bulk append of `nsets` concatenated sets (lens[i] nodes each, root
  // first).  Skips the per-node validation in append(); the batch kernel
  // only feeds it sampler output, which is in range by construction.
  void append_flat_(const NodeId* nodes, const uint32_t* lens, uint64_t nsets);

  uint32_t n_;
  std::vector<uint64_t> offsets_{0};
  std::vector<NodeId> nodes_;
  std::vector<std::vector<uint32_t>> index_;
};

// Draws `count` RR sets with roots from `roots` and appends them in sequence
// order.  RR set i (0-based within this batch) is produced entirely from
// RngStream(seed, first_stream + i), so the appended content is a pure
// function of (seed, first_stream, count) — independent of thread count.
void append_batch(RRCollection& coll, const Graph& g, DiffusionModel model,
                  const RootSampler& roots, uint64_t seed,
                  uint64_t first_stream, uint64_t count, int threads);

// Serial reference for the kernel above; bit-identical output by contract
// (the benchmark target and tests compare the two).
void append_batch_serial(RRCollection& coll, const Graph& g,
                         DiffusionModel model, const RootSampler& roots,
                         uint64_t seed, uint64_t first_stream, uint64_t count);

}  // namespace stopstare
