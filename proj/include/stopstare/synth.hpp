#pragma once

#include <cstdint>

#include "stopstare/graph.hpp"
#include "stopstare/stop_stare.hpp"

namespace stopstare {

// Seed-deterministic synthetic graphs for tests and benchmarks.
struct SyntheticSpec {
  enum class Family { ErdosRenyi, Star, Path, Cycle };
  enum class WeightRule { Explicit, UniformInverseInDegree };

  Family family = Family::ErdosRenyi;
  uint32_t n = 0;
  double p = 0.0;       // ErdosRenyi: arc probability
  double weight = 1.0;  // explicit edge weight (Star/Path/Cycle and ER)
  WeightRule weight_rule = WeightRule::Explicit;
  uint64_t seed = 1;
};

// ErdosRenyi draws each ordered pair u != v independently; Star puts node 0
// at the center with arcs to every leaf; Path chains 0 -> 1 -> ... ; Cycle
// closes the chain.  UniformInverseInDegree replaces weights by 1/d_in.
Graph generate(const SyntheticSpec& spec);

// Runs the chosen algorithm `trials` times with seeds seed0, seed0+1, ...,
// and returns the fraction of trials whose seed set has exact influence
// >= (1 - 1/e - eps) * OPT_k (both sides from the enumeration oracle, which
// must be feasible for the graph).
double guarantee_trial(const Graph& g, uint32_t k, double eps, double delta,
                       Algo algo, DiffusionModel model, uint32_t trials,
                       uint64_t seed0, int threads = 1);

}  // namespace stopstare
