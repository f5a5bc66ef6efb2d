#include "stopstare/tvm.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace stopstare {

TargetWeights TargetWeights::from(std::vector<double> weights, uint32_t n) {
  if (weights.size() != n)
    throw std::invalid_argument("target weights must have one entry per node");
  // RootSampler revalidates entries; building it here also computes the
  // total the sampler will use, keeping the two gammas identical.
  RootSampler sampler = RootSampler::weighted(weights);
  TargetWeights tw;
  tw.weights = std::move(weights);
  tw.gamma = sampler.total_weight();
  return tw;
}

TargetWeights TargetWeights::load(std::istream& in, uint32_t n) {
  std::vector<double> w(n, 0.0);
  std::vector<uint8_t> seen(n, 0);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream iss(line);
    uint64_t id;
    double weight;
    std::string extra;
    if (!(iss >> id >> weight) || (iss >> extra))
      throw ParseError(line_no, "expected 'node_id weight', got: " + line);
    if (id >= n)
      throw ParseError(line_no, "node id out of range: " + line);
    if (seen[id])
      throw ParseError(line_no,
                       "duplicate weight for node " + std::to_string(id));
    if (!(weight >= 0.0) || !std::isfinite(weight))
      throw ParseError(line_no, "weight must be finite and >= 0: " + line);
    seen[id] = 1;
    w[id] = weight;
  }
  return from(std::move(w), n);
}

RunDetail tvm_run_detail(const Graph& g, const TargetWeights& tw, Algo algo,
                         const StopStareConfig& cfg) {
  if (tw.weights.size() != g.n())
    throw std::invalid_argument("target weights sized for a different graph");
  RootSampler roots = RootSampler::weighted(tw.weights);
  detail::SampleSpace space{&g, cfg.model, std::move(roots),
                            tw.gamma};
  return algo == Algo::SSA ? detail::ssa_core(space, cfg)
                           : detail::dssa_core(space, cfg);
}

SeedResult tvm_run(const Graph& g, const TargetWeights& tw, Algo algo,
                   const StopStareConfig& cfg) {
  return tvm_run_detail(g, tw, algo, cfg).result;
}

}  // namespace stopstare
