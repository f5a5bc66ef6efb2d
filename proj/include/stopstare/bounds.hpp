#pragma once

#include <cstdint>

namespace stopstare::bounds {

// 1 - 1/e, the greedy max-coverage approximation factor.
inline constexpr double kOneMinusInvE = 0.63212055882855768;

// Chernoff-style sample-count kernel: (2 + 2*eps/3) * ln(1/delta) / eps^2.
// An average of this many unit-mean samples is within eps of the truth with
// probability 1 - delta.
double upsilon(double eps, double delta);

// Same kernel with ln(1/delta) supplied directly, for deltas too small to
// represent (for example delta / C(n,k)).
double upsilon_ln(double eps, double ln_inv_delta);

// ln of the binomial coefficient C(n, k), via lgamma.
double ln_choose(uint64_t n, uint64_t k);

// Error budget split used by the SSA stopping conditions.
struct EpsilonSplit {
  double eps1;
  double eps2;
  double eps3;
};

// (1 - 1/e) * (e1 + e2 + e1*e2 + e3) / ((1 + e1) * (1 + e2)) <= eps, the
// inequality a split must satisfy for the final eps-guarantee to hold.
bool check_epsilon_constraint(const EpsilonSplit& s, double eps);

// Default split: e2 = e3 = eps / (2 * (1 - 1/e)) and e1 chosen so the
// constraint binds exactly.  Requires eps < 1 - 1/e.
EpsilonSplit default_epsilon_split(double eps);

// Worst-case caps shared by both stopping algorithms.
struct Caps {
  double n_max;    // pool-size cap, kept as a real and compared with >=
  uint32_t i_max;  // bound on the number of doubling iterations
  double lambda;   // initial pool size Upsilon(eps, delta / (3 * i_max))
  double lambda1;  // single-stream verification threshold
                   // 1 + (1 + eps) * Upsilon(eps, delta / (3 * i_max))
};

// n_max = 8*(1 - 1/e)/(2 + 2*eps/3) * Upsilon(eps, (delta/6)/C(n,k)) * n/k,
// i_max = ceil(log2(2*n_max / Upsilon(eps, delta/3))).
Caps caps_for(uint64_t n, uint64_t k, double eps, double delta);

// Verification threshold for the split-based stopping rule:
// (1 + e1) * (1 + e2) * Upsilon(e3, delta / (3 * i_max)).
double split_lambda1(const EpsilonSplit& s, double delta, uint32_t i_max);

// Reference worst-case sample sizes of earlier RIS algorithms, for
// comparison output only.
double tim_threshold(uint64_t n, uint64_t k, double eps, double delta,
                     double opt_k);
double imm_threshold(uint64_t n, uint64_t k, double eps, double delta,
                     double opt_k);
// Model-free simplification using opt_k >= k (seeds activate themselves):
// 8*(1 - 1/e)*(ln(2/delta) + ln C(n,k))/eps^2 * n/k.
double simplified_threshold(uint64_t n, uint64_t k, double eps, double delta);

}  // namespace stopstare::bounds
