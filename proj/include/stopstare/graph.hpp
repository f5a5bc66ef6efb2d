#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stopstare {

using NodeId = uint32_t;

enum class DiffusionModel { IC, LT };

const char* model_name(DiffusionModel m);
DiffusionModel model_from_name(const std::string& name);  // "ic" | "lt"

struct Edge {
  NodeId from;
  NodeId to;
  double weight;
};

struct ParseError : std::runtime_error {
  ParseError(size_t line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
  size_t line;
};

struct LoadStats {
  uint64_t self_loops_dropped = 0;
  uint64_t parallel_edges_merged = 0;
};

struct LoadOptions {
  bool undirected = false;   // emit both arcs for every listed edge
  bool auto_weight = false;  // ignore listed weights, set w(u,v) = 1/d_in(v)
};

// Immutable directed graph with probability-weighted arcs, stored as CSR in
// both directions.  In-edges drive reverse-reachable sampling; out-edges
// drive forward simulation.
class Graph {
 public:
  Graph() = default;

  // Builds from an arc list.  Endpoints must be < n (throws
  // std::out_of_range), weights must lie in [0,1] (throws
  // std::domain_error).  Self-loops are dropped and parallel arcs merged
  // with w = 1 - prod(1 - w_i); counts go to *stats if given.
  static Graph from_edges(uint32_t n, std::vector<Edge> edges,
                          LoadStats* stats = nullptr);

  // Parses "n m" header then m lines "u v w" (or "u v" when
  // opts.auto_weight).  '#' comments and blank lines are skipped.  Throws
  // ParseError with a 1-based line number on malformed input.
  static Graph parse_edge_list(std::istream& in, const LoadOptions& opts = {},
                               LoadStats* stats = nullptr);

  // Compact binary snapshot; round-trips byte-exactly across platforms.
  static Graph read_binary(std::istream& in);
  void write_binary(std::ostream& out) const;

  // Copy of this graph with every weight replaced by 1/d_in(target).
  Graph with_uniform_in_weights() const;

  uint32_t n() const { return n_; }
  uint64_t m() const { return m_; }

  uint32_t in_degree(NodeId v) const {
    return (uint32_t)(in_off_[v + 1] - in_off_[v]);
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_tgt_.data() + in_off_[v], in_off_[v + 1] - in_off_[v]};
  }
  std::span<const double> in_weights(NodeId v) const {
    return {in_w_.data() + in_off_[v], in_off_[v + 1] - in_off_[v]};
  }

  uint32_t out_degree(NodeId v) const {
    return (uint32_t)(out_off_[v + 1] - out_off_[v]);
  }
  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {out_tgt_.data() + out_off_[v], out_off_[v + 1] - out_off_[v]};
  }
  std::span<const double> out_weights(NodeId v) const {
    return {out_w_.data() + out_off_[v], out_off_[v + 1] - out_off_[v]};
  }

  // Total incoming weight of v; exactly 1.0 on auto-weighted nodes with
  // in-edges.
  double in_weight_sum(NodeId v) const { return in_wsum_[v]; }

  // The linear-threshold model needs sum of incoming weights <= 1 at every
  // node (tiny float slack allowed).
  bool lt_feasible(NodeId* first_bad = nullptr) const;
  void require_lt_feasible() const;  // throws std::domain_error

  bool operator==(const Graph& other) const = default;

 private:
  uint32_t n_ = 0;
  uint64_t m_ = 0;
  std::vector<uint64_t> in_off_;
  std::vector<NodeId> in_tgt_;  // sources of in-edges
  std::vector<double> in_w_;
  std::vector<uint64_t> out_off_;
  std::vector<NodeId> out_tgt_;
  std::vector<double> out_w_;
  std::vector<double> in_wsum_;
};

}  // namespace stopstare
