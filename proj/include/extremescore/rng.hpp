#pragma once

#include <cstdint>

namespace extremescore {

// Counter-seeded xoshiro256++. A (seed, stream_id) pair fully determines the
// sequence, so replication r of an experiment always draws the same numbers
// no matter which worker runs it or in what order.
class RandomStream {
public:
  explicit RandomStream(uint64_t seed, uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    uint64_t a = seed;
    uint64_t h = mix(a);
    uint64_t b = stream_id ^ 0x6a09e667f3bcc909ULL;
    uint64_t st = h ^ (mix(b) * 0x9e3779b97f4a7c15ULL);
    bool nonzero = false;
    for (auto& word : state_) {
      word = mix(st);
      nonzero = nonzero || word != 0;
    }
    if (!nonzero) state_[0] = 0x9e3779b97f4a7c15ULL;
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }

private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  // splitmix64 step; also used to expand the seed into the initial state.
  static uint64_t mix(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t state_[4];
  uint64_t seed_;
  uint64_t stream_id_;
};

} // namespace extremescore
