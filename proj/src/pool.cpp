#include "stopstare/pool.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace stopstare {

void RRCollection::append(const RRSet& rr) {
  for (NodeId u : rr.nodes)
    if (u >= n_)
      throw std::out_of_range("RR set node " + std::to_string(u) +
                              " out of range for n = " + std::to_string(n_));
  auto id = (uint32_t)size();
  for (NodeId u : rr.nodes) {
    nodes_.push_back(u);
    index_[u].push_back(id);
  }
  offsets_.push_back(nodes_.size());
}

namespace {
// Iterate ids of index entries falling in [lo, hi); entries are sorted
// because appends only ever add the current max id.
template <typename F>
void for_ids_in_range(const std::vector<uint32_t>& ids, uint64_t lo,
                      uint64_t hi, F&& f) {
  auto it = std::lower_bound(ids.begin(), ids.end(), (uint32_t)lo);
  for (; it != ids.end() && *it < hi; ++it) f(*it);
}
}  // namespace

uint64_t RRCollection::cov(std::span<const NodeId> S, uint64_t lo,
                           uint64_t hi) const {
  if (S.empty()) throw std::invalid_argument("cov: empty seed set");
  if (lo > hi || hi > size()) throw std::out_of_range("cov: bad range");
  if (lo == hi) return 0;
  std::vector<uint8_t> covered(hi - lo, 0);
  uint64_t count = 0;
  for (NodeId u : S) {
    if (u >= n_) throw std::out_of_range("cov: node id out of range");
    for_ids_in_range(index_[u], lo, hi, [&](uint32_t id) {
      count += !covered[id - lo];
      covered[id - lo] = 1;
    });
  }
  return count;
}

double RRCollection::estimate_influence(std::span<const NodeId> S, uint64_t lo,
                                        uint64_t hi) const {
  if (lo >= hi) throw std::invalid_argument("estimate_influence: empty range");
  return (double)n_ * (double)cov(S, lo, hi) / (double)(hi - lo);
}

GreedyResult RRCollection::max_coverage_greedy(uint32_t k, uint64_t lo,
                                               uint64_t hi) const {
  if (k < 1 || k > n_)
    throw std::invalid_argument("max_coverage_greedy needs 1 <= k <= n");
  if (lo > hi || hi > size())
    throw std::out_of_range("max_coverage_greedy: bad range");

  std::vector<uint64_t> gain(n_, 0);
  for (uint64_t id = lo; id < hi; ++id)
    for (NodeId u : set_nodes(id)) gain[u]++;

  std::vector<uint8_t> covered(hi - lo, 0);
  std::vector<uint8_t> picked(n_, 0);
  GreedyResult out;
  out.coverage = 0;
  out.seeds.reserve(k);
  for (uint32_t step = 0; step < k; ++step) {
    NodeId best = n_;
    uint64_t best_gain = 0;
    for (NodeId u = 0; u < n_; ++u) {
      if (picked[u]) continue;
      if (best == n_ || gain[u] > best_gain) {
        best = u;
        best_gain = gain[u];
      }
    }
    picked[best] = 1;
    out.seeds.push_back(best);
    out.coverage += best_gain;
    for_ids_in_range(index_[best], lo, hi, [&](uint32_t id) {
      if (covered[id - lo]) return;
      covered[id - lo] = 1;
      for (NodeId v : set_nodes(id)) gain[v]--;
    });
  }
  return out;
}

void RRCollection::append_flat_(const NodeId* nodes, const uint32_t* lens,
                                uint64_t nsets) {
  const NodeId* p = nodes;
  for (uint64_t s = 0; s < nsets; ++s) {
    auto id = (uint32_t)size();
    for (uint32_t j = 0; j < lens[s]; ++j) {
      NodeId u = *p++;
      nodes_.push_back(u);
      index_[u].push_back(id);
    }
    offsets_.push_back(nodes_.size());
  }
}

void append_batch(RRCollection& coll, const Graph& g, DiffusionModel model,
                  const RootSampler& roots, uint64_t seed,
                  uint64_t first_stream, uint64_t count, int threads) {
  if (threads < 1) threads = 1;
  if (count == 0) return;

  // Workers fill fixed chunks of the id range into flat per-chunk buffers;
  // the sampler writes each set into a reused scratch buffer, so the hot
  // loop does no per-set allocation.  Chunk contents depend only on
  // (seed, first_stream), not on which thread drew them.
  constexpr uint64_t kChunk = 1024;
  const uint64_t num_chunks = (count + kChunk - 1) / kChunk;
  struct ChunkBuf {
    std::vector<NodeId> nodes;
    std::vector<uint32_t> lens;
  };
  std::vector<ChunkBuf> chunks((size_t)num_chunks);
#pragma omp parallel num_threads(threads)
  {
    RRSampler sampler(g);
#pragma omp for schedule(dynamic, 1)
    for (int64_t c = 0; c < (int64_t)num_chunks; ++c) {
      ChunkBuf& buf = chunks[c];
      const uint64_t begin = (uint64_t)c * kChunk;
      const uint64_t end = std::min(begin + kChunk, count);
      buf.lens.reserve((size_t)(end - begin));
      for (uint64_t i = begin; i < end; ++i) {
        RngStream rng(seed, first_stream + i);
        NodeId root = roots.draw(rng);
        auto nodes = sampler.sample_into(model, root, rng);
        buf.nodes.insert(buf.nodes.end(), nodes.begin(), nodes.end());
        buf.lens.push_back((uint32_t)nodes.size());
      }
    }
  }
  if (num_chunks == 1) {
    coll.append_flat_(chunks[0].nodes.data(), chunks[0].lens.data(),
                      (uint64_t)chunks[0].lens.size());
    return;
  }

  // Merge.  Every chunk's position in the final arrays is fixed by prefix
  // sums, so node lists and set boundaries are copied in parallel with
  // positional writes; the inverted index is built in parallel over disjoint
  // node ranges, each owner walking the chunks in id order so per-node id
  // lists come out sorted.  Nothing here depends on the thread count.
  const uint64_t base_sets = coll.size();
  std::vector<uint64_t> set_base(num_chunks + 1), item_base(num_chunks + 1);
  set_base[0] = base_sets;
  item_base[0] = coll.nodes_.size();
  for (uint64_t c = 0; c < num_chunks; ++c) {
    set_base[c + 1] = set_base[c] + chunks[c].lens.size();
    item_base[c + 1] = item_base[c] + chunks[c].nodes.size();
  }
  const uint64_t batch_items = item_base[num_chunks] - item_base[0];
  coll.nodes_.resize(item_base[num_chunks]);
  coll.offsets_.resize(base_sets + 1 + count);

  const uint32_t n = coll.n_;
  std::vector<uint32_t> freq(n, 0);  // per-node occurrences in this batch
  std::vector<std::vector<uint32_t>> local_freq((size_t)threads);
  std::vector<uint32_t> bound((size_t)threads + 1, n);
#pragma omp parallel num_threads(threads)
  {
    const int tid = omp_get_thread_num();
    const int nt = omp_get_num_threads();

#pragma omp for schedule(static)
    for (int64_t c = 0; c < (int64_t)num_chunks; ++c) {
      const ChunkBuf& buf = chunks[c];
      std::copy(buf.nodes.begin(), buf.nodes.end(),
                coll.nodes_.begin() + (int64_t)item_base[c]);
      uint64_t off = item_base[c];
      uint64_t sid = set_base[c];
      for (uint32_t len : buf.lens) {
        off += len;
        coll.offsets_[sid + 1] = off;
        ++sid;
      }
    }

    std::vector<uint32_t>& lf = local_freq[tid];
    lf.assign(n, 0);
#pragma omp for schedule(static)
    for (int64_t c = 0; c < (int64_t)num_chunks; ++c)
      for (NodeId u : chunks[c].nodes) lf[u]++;

#pragma omp for schedule(static)
    for (int64_t u = 0; u < (int64_t)n; ++u) {
      uint32_t s = 0;
      for (int t = 0; t < nt; ++t) s += local_freq[t][u];
      freq[u] = s;
    }

#pragma omp single
    {
      // Node-range boundaries splitting the index work into roughly equal
      // occurrence mass.  The split only decides which thread writes which
      // per-node lists, never their contents.
      bound[0] = 0;
      int t = 1;
      uint64_t acc = 0;
      for (uint32_t u = 0; u < n && t < nt; ++u) {
        acc += freq[u];
        while (t < nt && acc * (uint64_t)nt >= batch_items * (uint64_t)t)
          bound[t++] = u + 1;
      }
      for (; t <= nt; ++t) bound[t] = n;
    }

    const uint32_t ulo = bound[tid];
    const uint32_t uhi = bound[tid + 1];
    for (uint32_t u = ulo; u < uhi; ++u)
      if (freq[u]) coll.index_[u].reserve(coll.index_[u].size() + freq[u]);
    for (uint64_t c = 0; c < num_chunks; ++c) {
      const ChunkBuf& buf = chunks[c];
      const NodeId* p = buf.nodes.data();
      uint32_t id = (uint32_t)set_base[c];
      for (uint32_t len : buf.lens) {
        for (uint32_t j = 0; j < len; ++j) {
          NodeId u = *p++;
          if (u >= ulo && u < uhi) coll.index_[u].push_back(id);
        }
        ++id;
      }
    }
  }
}

void append_batch_serial(RRCollection& coll, const Graph& g,
                         DiffusionModel model, const RootSampler& roots,
                         uint64_t seed, uint64_t first_stream,
                         uint64_t count) {
  RRSampler sampler(g);
  for (uint64_t i = 0; i < count; ++i) {
    RngStream rng(seed, first_stream + i);
    NodeId root = roots.draw(rng);
    coll.append(sampler.sample(model, root, rng));
  }
}

}  // namespace stopstare
