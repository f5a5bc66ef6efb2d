#include "stopstare/rr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stopstare {

RootSampler RootSampler::uniform(uint32_t n) {
  if (n == 0) throw std::invalid_argument("root sampler needs n >= 1");
  RootSampler s;
  s.n_ = n;
  s.total_ = (double)n;
  return s;
}

RootSampler RootSampler::weighted(const std::vector<double>& weights) {
  if (weights.empty())
    throw std::invalid_argument("root sampler needs at least one weight");
  bool all_equal = true;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("root weights must be finite and >= 0");
    all_equal = all_equal && w == weights[0];
  }
  if (all_equal && weights[0] > 0.0) {
    // Constant weights: same distribution as uniform, and routing through
    // the uniform path keeps RNG consumption identical to an unweighted run.
    RootSampler s = uniform((uint32_t)weights.size());
    s.total_ = weights[0] * (double)weights.size();
    return s;
  }
  RootSampler s;
  s.n_ = (uint32_t)weights.size();
  s.cum_.resize(weights.size());
  double acc = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) s.last_positive_ = (NodeId)i;
    acc += weights[i];
    s.cum_[i] = acc;
  }
  s.total_ = acc;
  if (!(s.total_ > 0.0))
    throw std::invalid_argument("root weights must not be all zero");
  return s;
}

NodeId RootSampler::draw(RngStream& rng) const {
  if (cum_.empty()) return rng.next_below(n_);
  double x = rng.next_unit() * total_;
  auto it = std::upper_bound(cum_.begin(), cum_.end(), x);
  if (it == cum_.end()) return last_positive_;  // x rounded up to the total
  return (NodeId)(it - cum_.begin());
}

RRSampler::RRSampler(const Graph& g) : g_(&g), mark_(g.n(), 0) {}

namespace {

RRSet to_rr_set(std::span<const NodeId> nodes) {
  RRSet rr;
  rr.root = nodes.front();
  rr.nodes.assign(nodes.begin(), nodes.end());
  return rr;
}

}  // namespace

RRSet RRSampler::sample_ic(NodeId root, RngStream& rng) {
  return to_rr_set(sample_ic_(root, rng, nullptr));
}

RRSet RRSampler::sample_lt(NodeId root, RngStream& rng) {
  return to_rr_set(sample_lt_(root, rng, nullptr));
}

std::span<const NodeId> RRSampler::sample_ic_(
    NodeId root, RngStream& rng, std::vector<std::pair<NodeId, NodeId>>* live) {
  if (root >= g_->n()) throw std::out_of_range("root out of range");
  if (++epoch_ == 0) {  // counter wrapped; reset marks once
    std::fill(mark_.begin(), mark_.end(), 0);
    epoch_ = 1;
  }
  mark_[root] = epoch_;
  queue_.clear();
  queue_.push_back(root);
  for (size_t head = 0; head < queue_.size(); ++head) {
    NodeId v = queue_[head];
    auto srcs = g_->in_neighbors(v);
    auto ws = g_->in_weights(v);
    for (size_t i = 0; i < srcs.size(); ++i) {
      if (!rng.next_bernoulli(ws[i])) continue;
      NodeId u = srcs[i];
      if (live) live->emplace_back(u, v);
      if (mark_[u] == epoch_) continue;
      mark_[u] = epoch_;
      queue_.push_back(u);
    }
  }
  return {queue_.data(), queue_.size()};
}

std::span<const NodeId> RRSampler::sample_lt_(
    NodeId root, RngStream& rng, std::vector<std::pair<NodeId, NodeId>>* live) {
  if (root >= g_->n()) throw std::out_of_range("root out of range");
  if (++epoch_ == 0) {
    std::fill(mark_.begin(), mark_.end(), 0);
    epoch_ = 1;
  }
  mark_[root] = epoch_;
  queue_.clear();
  queue_.push_back(root);
  NodeId v = root;
  while (true) {
    double wsum = g_->in_weight_sum(v);
    double x = rng.next_unit();
    if (x >= wsum) break;  // stopped expanding; never fires when wsum == 1.0
    auto srcs = g_->in_neighbors(v);
    auto ws = g_->in_weights(v);
    NodeId u = srcs.back();  // float fallback: cum sum may round below wsum
    double acc = 0.0;
    for (size_t i = 0; i < srcs.size(); ++i) {
      acc += ws[i];
      if (x < acc) {
        u = srcs[i];
        break;
      }
    }
    if (live) live->emplace_back(u, v);
    if (mark_[u] == epoch_) break;  // closed a cycle
    mark_[u] = epoch_;
    queue_.push_back(u);
    v = u;
  }
  return {queue_.data(), queue_.size()};
}

RRSet sample_rr_ic(const Graph& g, NodeId root, RngStream& rng) {
  RRSampler s(g);
  return s.sample_ic(root, rng);
}

RRSet sample_rr_lt(const Graph& g, NodeId root, RngStream& rng) {
  RRSampler s(g);
  return s.sample_lt(root, rng);
}

TracedRRSet TracedRRSet::sample_ic(const Graph& g, NodeId root,
                                   RngStream& rng) {
  RRSampler s(g);
  TracedRRSet out;
  out.rr = to_rr_set(s.sample_ic_(root, rng, &out.live_edges));
  return out;
}

TracedRRSet TracedRRSet::sample_lt(const Graph& g, NodeId root,
                                   RngStream& rng) {
  RRSampler s(g);
  TracedRRSet out;
  out.rr = to_rr_set(s.sample_lt_(root, rng, &out.live_edges));
  return out;
}

}  // namespace stopstare
