#pragma once

#include <cstdint>

namespace asg {

// SplitMix64, used only to expand seeds into stream states.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ stream. One instance is owned by exactly one replicate at a
// time; construction from (master_seed, stream_index) is O(1), so replicate
// streams can be handed out in any order without generating intermediate
// states.
class RandomStream {
 public:
  RandomStream() : RandomStream(0, 0) {}
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); never returns an exact 0 or 1, so
  // -log(u) is always finite and positive.
  double uniform01();

  // Exponential with the given rate (> 0).
  double exponential(double rate);

  // Standard normal via the polar method.
  double normal();

  // Uniform integer in [0, n), unbiased (rejection).
  std::uint64_t uniform_below(std::uint64_t n);

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// The replicate -> stream mapping used throughout: statistically independent,
// reproducible streams keyed by (master_seed, replicate_index).
inline RandomStream stream_for(std::uint64_t master_seed, std::uint64_t replicate_index) {
  return RandomStream(master_seed, replicate_index);
}

}  // namespace asg
