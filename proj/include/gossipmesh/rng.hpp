#pragma once

#include <cstdint>

namespace gossipmesh {

// Deterministic PRNG used everywhere in the simulator. SplitMix64 keeps the
// implementation tiny and identical across platforms; std::mt19937 plus the
// standard distributions would not give reproducible draws between libstdc++
// and libc++, so we avoid them entirely.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) via Lemire's multiply-shift rejection.
  // bound must be nonzero.
  std::uint32_t uniform_index(std::uint32_t bound) {
    std::uint64_t x = next_u64() & 0xffffffffULL;
    std::uint64_t m = x * bound;
    std::uint32_t l = static_cast<std::uint32_t>(m);
    if (l < bound) {
      std::uint32_t t = (0u - bound) % bound;
      while (l < t) {
        x = next_u64() & 0xffffffffULL;
        m = x * bound;
        l = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Bernoulli draw. Always consumes exactly one draw so stream positions do
  // not depend on p.
  bool coin(double p) { return uniform01() < p; }

  // Stream derivation: fold a salt into a seed with one SplitMix64 step so
  // that (master, salt, node, round) streams are independent. Chaining mix
  // calls is how all per-node / per-round / per-purpose streams are built.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    Rng r(seed ^ (salt * 0x9e3779b97f4a7c15ULL));
    return r.next_u64();
  }

  static Rng derive(std::uint64_t master, std::uint64_t salt,
                    std::uint64_t node, std::uint64_t round) {
    return Rng(mix(mix(mix(master, salt), node), round));
  }

 private:
  std::uint64_t state_;
};

// Salts for the per-purpose streams. Keeping them in one place makes it easy
// to see that no two call sites share a stream.
enum Salt : std::uint64_t {
  kSaltPeerSelect = 1,
  kSaltLoss = 2,
  kSaltLatency = 3,
  kSaltProbe = 4,
  kSaltAntiEntropy = 5,
  kSaltWorkload = 6,
  kSaltAdversary = 7,
  kSaltAveraging = 8,
  kSaltZonePick = 9,
  kSaltInit = 10,
};

}  // namespace gossipmesh
