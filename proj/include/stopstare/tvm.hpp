#pragma once

#include <iosfwd>
#include <vector>

#include "stopstare/stop_stare.hpp"

namespace stopstare {

// Per-node relevance weights for targeted runs; gamma is their sum and
// replaces n as the influence scale.
struct TargetWeights {
  std::vector<double> weights;
  double gamma;

  // Validates length n, nonnegative finite entries, positive total.
  static TargetWeights from(std::vector<double> weights, uint32_t n);

  // Text format: one "node_id weight" pair per line ('#' comments allowed);
  // nodes not listed get weight 0; duplicate ids are an error.
  static TargetWeights load(std::istream& in, uint32_t n);
};

// Runs the chosen algorithm with root selection proportional to the target
// weights; every influence estimate is then gamma * Pr[S covers a weighted-
// root RR set], the expected activated target weight.  Caps keep using n and
// C(n,k) — the candidate seed space is unchanged.  With constant weights
// this degenerates to the plain algorithm bit-for-bit (same RNG draws).
SeedResult tvm_run(const Graph& g, const TargetWeights& tw, Algo algo,
                   const StopStareConfig& cfg);
RunDetail tvm_run_detail(const Graph& g, const TargetWeights& tw, Algo algo,
                         const StopStareConfig& cfg);

}  // namespace stopstare
