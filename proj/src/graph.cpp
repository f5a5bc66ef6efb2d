#include "stopstare/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace stopstare {

const char* model_name(DiffusionModel m) {
  return m == DiffusionModel::IC ? "ic" : "lt";
}

DiffusionModel model_from_name(const std::string& name) {
  if (name == "ic" || name == "IC") return DiffusionModel::IC;
  if (name == "lt" || name == "LT") return DiffusionModel::LT;
  throw std::invalid_argument("unknown diffusion model: " + name);
}

Graph Graph::from_edges(uint32_t n, std::vector<Edge> edges, LoadStats* stats) {
  LoadStats local;
  for (const Edge& e : edges) {
    if (e.from >= n || e.to >= n)
      throw std::out_of_range("edge endpoint out of range: " +
                              std::to_string(e.from) + " -> " +
                              std::to_string(e.to) + " with n = " +
                              std::to_string(n));
    if (!(e.weight >= 0.0 && e.weight <= 1.0))
      throw std::domain_error("edge weight outside [0,1]: " +
                              std::to_string(e.weight));
  }

  std::erase_if(edges, [&](const Edge& e) {
    if (e.from == e.to) {
      local.self_loops_dropped++;
      return true;
    }
    return false;
  });

  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });

  // Merge parallel arcs: live with probability 1 - prod(1 - w_i).
  std::vector<Edge> merged;
  merged.reserve(edges.size());
  for (size_t i = 0; i < edges.size();) {
    size_t j = i;
    double miss = 1.0;
    while (j < edges.size() && edges[j].from == edges[i].from &&
           edges[j].to == edges[i].to) {
      miss *= 1.0 - edges[j].weight;
      ++j;
    }
    local.parallel_edges_merged += j - i - 1;
    merged.push_back(
        {edges[i].from, edges[i].to, std::clamp(1.0 - miss, 0.0, 1.0)});
    i = j;
  }

  Graph g;
  g.n_ = n;
  g.m_ = merged.size();
  g.out_off_.assign(n + 1, 0);
  g.in_off_.assign(n + 1, 0);
  for (const Edge& e : merged) {
    g.out_off_[e.from + 1]++;
    g.in_off_[e.to + 1]++;
  }
  for (uint32_t v = 0; v < n; ++v) {
    g.out_off_[v + 1] += g.out_off_[v];
    g.in_off_[v + 1] += g.in_off_[v];
  }
  g.out_tgt_.resize(g.m_);
  g.out_w_.resize(g.m_);
  g.in_tgt_.resize(g.m_);
  g.in_w_.resize(g.m_);
  std::vector<uint64_t> in_pos(g.in_off_.begin(), g.in_off_.end() - 1);
  uint64_t out_pos = 0;
  for (const Edge& e : merged) {  // sorted by (from, to)
    g.out_tgt_[out_pos] = e.to;
    g.out_w_[out_pos] = e.weight;
    ++out_pos;
    uint64_t p = in_pos[e.to]++;
    g.in_tgt_[p] = e.from;  // in-lists end up sorted by source
    g.in_w_[p] = e.weight;
  }
  g.in_wsum_.assign(n, 0.0);
  for (uint32_t v = 0; v < n; ++v) {
    double s = 0.0;
    for (double w : g.in_weights(v)) s += w;
    g.in_wsum_[v] = s;
  }
  if (stats) *stats = local;
  return g;
}

Graph Graph::parse_edge_list(std::istream& in, const LoadOptions& opts,
                             LoadStats* stats) {
  auto next_content_line = [&](std::string& line, size_t& line_no) {
    while (std::getline(in, line)) {
      ++line_no;
      size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      return true;
    }
    return false;
  };

  std::string line;
  size_t line_no = 0;
  if (!next_content_line(line, line_no))
    throw ParseError(line_no + 1, "missing 'n m' header");

  uint64_t n = 0, m = 0;
  {
    std::istringstream iss(line);
    std::string extra;
    if (!(iss >> n >> m) || (iss >> extra))
      throw ParseError(line_no, "expected header 'n m', got: " + line);
    if (n > UINT32_MAX)
      throw ParseError(line_no, "node count exceeds 2^32 - 1");
  }

  std::vector<Edge> edges;
  edges.reserve(opts.undirected ? 2 * m : m);
  for (uint64_t i = 0; i < m; ++i) {
    if (!next_content_line(line, line_no))
      throw ParseError(line_no, "expected " + std::to_string(m) +
                                    " edges, input ended after " +
                                    std::to_string(i));
    std::istringstream iss(line);
    uint64_t u, v;
    double w = 1.0;
    if (!(iss >> u >> v))
      throw ParseError(line_no, "expected 'u v" +
                                    std::string(opts.auto_weight ? "" : " w") +
                                    "', got: " + line);
    if (!opts.auto_weight) {
      if (!(iss >> w))
        throw ParseError(line_no, "missing edge weight: " + line);
    } else {
      iss >> w;  // optional, replaced later anyway
      w = 1.0;
      iss.clear();
    }
    std::string extra;
    if (iss >> extra)
      throw ParseError(line_no, "trailing tokens: " + line);
    if (u >= n || v >= n)
      throw ParseError(line_no, "edge endpoint out of range: " + line);
    if (!(w >= 0.0 && w <= 1.0))
      throw ParseError(line_no, "edge weight outside [0,1]: " + line);
    edges.push_back({(NodeId)u, (NodeId)v, w});
    if (opts.undirected) edges.push_back({(NodeId)v, (NodeId)u, w});
  }
  if (next_content_line(line, line_no))
    throw ParseError(line_no, "unexpected content after " + std::to_string(m) +
                                  " edges: " + line);

  Graph g = from_edges((uint32_t)n, std::move(edges), stats);
  if (opts.auto_weight) g = g.with_uniform_in_weights();
  return g;
}

Graph Graph::with_uniform_in_weights() const {
  Graph g = *this;
  for (uint32_t v = 0; v < n_; ++v) {
    uint32_t d = g.in_degree(v);
    double w = d > 0 ? 1.0 / d : 0.0;
    for (uint64_t i = g.in_off_[v]; i < g.in_off_[v + 1]; ++i) g.in_w_[i] = w;
    // Exact 1.0 so the LT walk's stop probability is exactly zero here
    // (summing d copies of 1/d need not round to 1).
    g.in_wsum_[v] = d > 0 ? 1.0 : 0.0;
  }
  for (uint32_t u = 0; u < n_; ++u)
    for (uint64_t i = g.out_off_[u]; i < g.out_off_[u + 1]; ++i)
      g.out_w_[i] = 1.0 / g.in_degree(g.out_tgt_[i]);
  return g;
}

bool Graph::lt_feasible(NodeId* first_bad) const {
  for (uint32_t v = 0; v < n_; ++v) {
    if (in_wsum_[v] > 1.0 + 1e-9) {
      if (first_bad) *first_bad = v;
      return false;
    }
  }
  return true;
}

void Graph::require_lt_feasible() const {
  NodeId bad = 0;
  if (!lt_feasible(&bad))
    throw std::domain_error(
        "linear-threshold model needs total in-weight <= 1 at every node; "
        "node " +
        std::to_string(bad) + " has " + std::to_string(in_wsum_[bad]) +
        " (use uniform 1/in-degree weights or rescale)");
}

namespace {

constexpr char kMagic[4] = {'S', 'S', 'A', 'G'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t x) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = (char)(x >> (8 * i));
  out.write(b, 4);
}

void put_u64(std::ostream& out, uint64_t x) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (char)(x >> (8 * i));
  out.write(b, 8);
}

void put_f64(std::ostream& out, double x) {
  put_u64(out, std::bit_cast<uint64_t>(x));
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read((char*)b, 4))
    throw std::runtime_error("binary graph: truncated input");
  uint32_t x = 0;
  for (int i = 3; i >= 0; --i) x = (x << 8) | b[i];
  return x;
}

uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read((char*)b, 8))
    throw std::runtime_error("binary graph: truncated input");
  uint64_t x = 0;
  for (int i = 7; i >= 0; --i) x = (x << 8) | b[i];
  return x;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void Graph::write_binary(std::ostream& out) const {
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u64(out, n_);
  put_u64(out, m_);
  for (uint64_t o : in_off_) put_u64(out, o);
  for (NodeId t : in_tgt_) put_u32(out, t);
  for (double w : in_w_) put_f64(out, w);
  for (uint64_t o : out_off_) put_u64(out, o);
  for (NodeId t : out_tgt_) put_u32(out, t);
  for (double w : out_w_) put_f64(out, w);
  // Stored rather than recomputed: auto-weighted graphs pin these to exactly
  // 1.0 and the round trip must preserve that.
  for (double s : in_wsum_) put_f64(out, s);
  if (!out) throw std::runtime_error("binary graph: write failed");
}

Graph Graph::read_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic))
    throw std::runtime_error("binary graph: bad magic (not a graph snapshot)");
  uint32_t version = get_u32(in);
  if (version != kVersion)
    throw std::runtime_error("binary graph: unsupported version " +
                             std::to_string(version));
  Graph g;
  uint64_t n = get_u64(in);
  if (n > UINT32_MAX) throw std::runtime_error("binary graph: n too large");
  g.n_ = (uint32_t)n;
  g.m_ = get_u64(in);
  auto read_side = [&](std::vector<uint64_t>& off, std::vector<NodeId>& tgt,
                       std::vector<double>& w) {
    off.resize(g.n_ + 1);
    for (auto& o : off) o = get_u64(in);
    if (off.front() != 0 || off.back() != g.m_ ||
        !std::is_sorted(off.begin(), off.end()))
      throw std::runtime_error("binary graph: corrupt offsets");
    tgt.resize(g.m_);
    for (auto& t : tgt) {
      t = get_u32(in);
      if (t >= g.n_) throw std::runtime_error("binary graph: node id out of range");
    }
    w.resize(g.m_);
    for (auto& x : w) x = get_f64(in);
  };
  read_side(g.in_off_, g.in_tgt_, g.in_w_);
  read_side(g.out_off_, g.out_tgt_, g.out_w_);
  g.in_wsum_.resize(g.n_);
  for (auto& s : g.in_wsum_) s = get_f64(in);
  return g;
}

}  // namespace stopstare
