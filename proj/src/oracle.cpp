#include "stopstare/oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stopstare {

namespace {

constexpr uint64_t kMaxOutcomes = 1ull << 22;

void check_seed_set(const Graph& g, std::span<const NodeId> S) {
  if (S.empty()) throw std::invalid_argument("seed set must be nonempty");
  for (NodeId v : S)
    if (v >= g.n()) throw std::out_of_range("seed node out of range");
}

// Forward-cascade scratch reused across runs.
struct CascadeSim {
  explicit CascadeSim(const Graph& g)
      : g(&g), active(g.n(), 0), accum(g.n(), 0.0), thresh(g.n(), 0.0),
        touched(g.n(), 0) {}

  uint32_t run(std::span<const NodeId> S, DiffusionModel model,
               RngStream& rng) {
    return model == DiffusionModel::IC ? run_ic(S, rng) : run_lt(S, rng);
  }

  uint32_t run_ic(std::span<const NodeId> S, RngStream& rng) {
    reset(S);
    for (size_t head = 0; head < queue.size(); ++head) {
      NodeId v = queue[head];
      auto tgts = g->out_neighbors(v);
      auto ws = g->out_weights(v);
      for (size_t i = 0; i < tgts.size(); ++i) {
        NodeId u = tgts[i];
        if (active[u]) continue;  // one chance per inactive neighbor
        if (rng.next_bernoulli(ws[i])) {
          active[u] = 1;
          queue.push_back(u);
        }
      }
    }
    return (uint32_t)queue.size();
  }

  uint32_t run_lt(std::span<const NodeId> S, RngStream& rng) {
    reset(S);
    // Thresholds are drawn lazily at a node's first exposure; accumulation
    // is monotone, so activating as soon as the threshold is reached gives
    // the same final set as strictly synchronous rounds.
    for (size_t head = 0; head < queue.size(); ++head) {
      NodeId v = queue[head];
      auto tgts = g->out_neighbors(v);
      auto ws = g->out_weights(v);
      for (size_t i = 0; i < tgts.size(); ++i) {
        NodeId u = tgts[i];
        if (active[u]) continue;
        if (!touched[u]) {
          touched[u] = 1;
          accum[u] = 0.0;
          thresh[u] = rng.next_unit();
        }
        accum[u] += ws[i];
        if (accum[u] >= thresh[u]) {
          active[u] = 1;
          queue.push_back(u);
        }
      }
    }
    return (uint32_t)queue.size();
  }

  void reset(std::span<const NodeId> S) {
    std::fill(active.begin(), active.end(), 0);
    std::fill(touched.begin(), touched.end(), 0);
    queue.clear();
    for (NodeId v : S) {
      if (!active[v]) {
        active[v] = 1;
        queue.push_back(v);
      }
    }
  }

  const Graph* g;
  std::vector<uint8_t> active;
  std::vector<double> accum;
  std::vector<double> thresh;
  std::vector<uint8_t> touched;
  std::vector<NodeId> queue;
};

}  // namespace

uint32_t simulate_once(const Graph& g, std::span<const NodeId> S,
                       DiffusionModel model, RngStream& rng) {
  check_seed_set(g, S);
  if (model == DiffusionModel::LT) g.require_lt_feasible();
  CascadeSim sim(g);
  return sim.run(S, model, rng);
}

McEstimate mc_influence(const Graph& g, std::span<const NodeId> S,
                        DiffusionModel model, uint64_t runs, uint64_t seed,
                        int threads) {
  check_seed_set(g, S);
  if (runs < 1) throw std::invalid_argument("mc_influence needs runs >= 1");
  if (model == DiffusionModel::LT) g.require_lt_feasible();
  if (threads < 1) threads = 1;
  uint64_t total = 0, total_sq = 0;
#pragma omp parallel num_threads(threads) reduction(+ : total, total_sq)
  {
    CascadeSim sim(g);
#pragma omp for schedule(static)
    for (int64_t i = 0; i < (int64_t)runs; ++i) {
      RngStream rng(seed, (uint64_t)i);
      uint64_t x = sim.run(S, model, rng);
      total += x;
      total_sq += x * x;
    }
  }
  McEstimate out;
  out.runs = runs;
  out.mean = (double)total / (double)runs;
  if (runs == 1) {
    out.std_error = 0.0;
  } else {
    double var = ((double)total_sq - (double)runs * out.mean * out.mean) /
                 (double)(runs - 1);
    out.std_error = std::sqrt(std::max(0.0, var) / (double)runs);
  }
  return out;
}

namespace {

// Enumeration core: calls visit(probability, live_out) for every live-edge
// realization, where live_out(v) yields the live out-edges of v.

// IC: every subset of the m edges, edge e live in outcome `mask` iff bit e.
// LT: mixed-radix counter over nodes; digit d(v) in [0, d_in(v)] selects
// which in-edge v keeps (d_in(v) = none).

struct Realization {
  // live_tgt[v] = targets of live out-edges of v for the current outcome.
  std::vector<std::vector<NodeId>> live_tgt;

  explicit Realization(uint32_t n) : live_tgt(n) {}
  void clear() {
    for (auto& l : live_tgt) l.clear();
  }
};

uint64_t ic_outcome_count(const Graph& g) {
  if (g.m() > 22)
    throw std::length_error(
        "exact IC enumeration needs m <= 22, graph has m = " +
        std::to_string(g.m()));
  return 1ull << g.m();
}

uint64_t lt_outcome_count(const Graph& g) {
  uint64_t count = 1;
  for (NodeId v = 0; v < g.n(); ++v) {
    count *= (uint64_t)g.in_degree(v) + 1;
    if (count > kMaxOutcomes)
      throw std::length_error(
          "exact LT enumeration needs prod(d_in + 1) <= 2^22");
  }
  return count;
}

template <typename Visit>
void enumerate_ic(const Graph& g, Visit&& visit) {
  uint64_t outcomes = ic_outcome_count(g);
  // Flatten edges once (arc order of the out-CSR).
  std::vector<Edge> arcs;
  arcs.reserve(g.m());
  for (NodeId u = 0; u < g.n(); ++u) {
    auto tgts = g.out_neighbors(u);
    auto ws = g.out_weights(u);
    for (size_t i = 0; i < tgts.size(); ++i)
      arcs.push_back({u, tgts[i], ws[i]});
  }
  Realization real(g.n());
  for (uint64_t mask = 0; mask < outcomes; ++mask) {
    real.clear();
    double p = 1.0;
    for (size_t e = 0; e < arcs.size(); ++e) {
      if (mask >> e & 1) {
        p *= arcs[e].weight;
        real.live_tgt[arcs[e].from].push_back(arcs[e].to);
      } else {
        p *= 1.0 - arcs[e].weight;
      }
    }
    if (p > 0.0) visit(p, real);
  }
}

template <typename Visit>
void enumerate_lt(const Graph& g, Visit&& visit) {
  g.require_lt_feasible();
  lt_outcome_count(g);
  // Nodes with in-edges, each contributing one digit.
  std::vector<NodeId> digit_node;
  for (NodeId v = 0; v < g.n(); ++v)
    if (g.in_degree(v) > 0) digit_node.push_back(v);
  std::vector<uint32_t> digit(digit_node.size(), 0);
  Realization real(g.n());
  while (true) {
    real.clear();
    double p = 1.0;
    for (size_t i = 0; i < digit_node.size(); ++i) {
      NodeId v = digit_node[i];
      auto srcs = g.in_neighbors(v);
      auto ws = g.in_weights(v);
      if (digit[i] < srcs.size()) {
        p *= ws[digit[i]];
        real.live_tgt[srcs[digit[i]]].push_back(v);
      } else {
        p *= std::max(0.0, 1.0 - g.in_weight_sum(v));
      }
    }
    if (p > 0.0) visit(p, real);
    // Advance the mixed-radix counter (digit i runs over 0..d_in inclusive).
    size_t i = 0;
    for (; i < digit.size(); ++i) {
      if (++digit[i] <= g.in_degree(digit_node[i])) break;
      digit[i] = 0;
    }
    if (i == digit.size()) break;
  }
}

uint32_t count_reachable(const Realization& real, std::span<const NodeId> S,
                         std::vector<uint8_t>& seen,
                         std::vector<NodeId>& queue) {
  std::fill(seen.begin(), seen.end(), 0);
  queue.clear();
  for (NodeId v : S) {
    if (!seen[v]) {
      seen[v] = 1;
      queue.push_back(v);
    }
  }
  for (size_t head = 0; head < queue.size(); ++head)
    for (NodeId u : real.live_tgt[queue[head]])
      if (!seen[u]) {
        seen[u] = 1;
        queue.push_back(u);
      }
  return (uint32_t)queue.size();
}

template <typename Visit>
void enumerate_model(const Graph& g, DiffusionModel model, Visit&& visit) {
  if (model == DiffusionModel::IC)
    enumerate_ic(g, visit);
  else
    enumerate_lt(g, visit);
}

}  // namespace

ExactInfluenceReport exact_influence(const Graph& g, std::span<const NodeId> S,
                                     DiffusionModel model) {
  check_seed_set(g, S);
  ExactInfluenceReport rep;
  rep.model = model;
  rep.outcomes_enumerated =
      model == DiffusionModel::IC ? ic_outcome_count(g) : lt_outcome_count(g);
  std::vector<uint8_t> seen(g.n());
  std::vector<NodeId> queue;
  double sum = 0.0, comp = 0.0;  // Kahan
  enumerate_model(g, model, [&](double p, const Realization& real) {
    double term = p * (double)count_reachable(real, S, seen, queue);
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  });
  rep.influence = sum;
  return rep;
}

std::vector<double> exact_activation_probabilities(const Graph& g,
                                                   std::span<const NodeId> S,
                                                   DiffusionModel model) {
  check_seed_set(g, S);
  if (model == DiffusionModel::IC)
    ic_outcome_count(g);
  else
    lt_outcome_count(g);
  std::vector<double> prob(g.n(), 0.0);
  std::vector<uint8_t> seen(g.n());
  std::vector<NodeId> queue;
  enumerate_model(g, model, [&](double p, const Realization& real) {
    count_reachable(real, S, seen, queue);
    for (NodeId v : queue) prob[v] += p;
  });
  return prob;
}

OptResult exact_opt(const Graph& g, uint32_t k, DiffusionModel model) {
  if (k < 1 || k > g.n()) throw std::invalid_argument("exact_opt needs 1 <= k <= n");
  // C(n,k) guard without overflow.
  double log_count = 0.0;
  for (uint32_t i = 0; i < k; ++i)
    log_count += std::log((double)(g.n() - i)) - std::log((double)(i + 1));
  if (log_count > std::log(1e5))
    throw std::length_error("exact_opt needs C(n,k) <= 1e5");
  uint64_t outcomes =
      model == DiffusionModel::IC ? ic_outcome_count(g) : lt_outcome_count(g);
  (void)outcomes;

  // One enumeration pass, evaluating every candidate set per outcome.
  std::vector<std::vector<NodeId>> candidates;
  std::vector<NodeId> pick(k);
  for (uint32_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    candidates.push_back(pick);
    // next k-combination in lexicographic order
    int i = (int)k - 1;
    while (i >= 0 && pick[i] == g.n() - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (uint32_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }

  std::vector<double> inf(candidates.size(), 0.0), comp(candidates.size(), 0.0);
  std::vector<uint8_t> seen(g.n());
  std::vector<NodeId> queue;
  enumerate_model(g, model, [&](double p, const Realization& real) {
    for (size_t c = 0; c < candidates.size(); ++c) {
      double term =
          p * (double)count_reachable(real, candidates[c], seen, queue);
      double y = term - comp[c];
      double t = inf[c] + y;
      comp[c] = (t - inf[c]) - y;
      inf[c] = t;
    }
  });

  size_t best = 0;
  for (size_t c = 1; c < candidates.size(); ++c)
    if (inf[c] > inf[best]) best = c;  // strict > keeps the lex-smallest tie
  return {candidates[best], inf[best]};
}

}  // namespace stopstare
