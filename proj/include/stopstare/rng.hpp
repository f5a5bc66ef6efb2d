#pragma once

#include <cstdint>

namespace stopstare {

// Counter-based random stream: xoshiro256++ seeded from a splitmix64 chain
// keyed by (seed, stream_id).  The same pair reproduces the same sequence on
// every platform and at any thread count, so parallel code can hand stream i
// to whichever thread processes work item i and still get deterministic
// results.  Distinct pairs give statistically independent sequences.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream_id) {
    // splitmix64 chain started at a hash of the pair; for a fixed seed,
    // distinct stream ids always start the chain at distinct states.
    uint64_t z = mix_(seed) + stream_id;
    for (auto& w : s_) {
      z += 0x9e3779b97f4a7c15ull;
      w = mix_(z);
    }
  }

  uint64_t next_u64() {
    const uint64_t result = rotl_(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl_(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); bound must be positive.  Unbiased
  // (Lemire's multiply-shift with rejection).
  uint32_t next_below(uint32_t bound) {
    uint64_t x = next_u64();
    unsigned __int128 m = (unsigned __int128)x * bound;
    auto lo = (uint64_t)m;
    if (lo < bound) {
      const uint64_t threshold = (0 - (uint64_t)bound) % bound;
      while (lo < threshold) {
        x = next_u64();
        m = (unsigned __int128)x * bound;
        lo = (uint64_t)m;
      }
    }
    return (uint32_t)(m >> 64);
  }

  // true with probability p.
  bool next_bernoulli(double p) { return next_unit() < p; }

 private:
  static uint64_t rotl_(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static uint64_t mix_(uint64_t z) {  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t s_[4];
};

}  // namespace stopstare
