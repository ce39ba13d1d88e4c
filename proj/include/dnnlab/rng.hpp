#pragma once

#include <cstdint>

namespace dnnlab::rng {

struct U64x2 {
  std::uint64_t v0 = 0;
  std::uint64_t v1 = 0;
};

// Threefry-2x64, 20 rounds (Salmon et al., "Parallel random numbers: as easy
// as 1, 2, 3"). A pure function of (counter, key); no state to carry between
// threads or runs.
U64x2 threefry2x64(U64x2 counter, U64x2 key);

// Stream ids. A stream is keyed by (seed, purpose) and addressed by a
// 128-bit counter (substream, index), so draws are independent of execution
// order and prefix-stable when a pool or dataset is enlarged.
enum : std::uint64_t {
  kStreamData = 1,
  kStreamCandidates = 2,
  kStreamEvaluation = 3,
  kStreamNoise = 4,
  kStreamTrial = 5,
};

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t substream = 0)
      : key_{seed, purpose}, hi_(substream) {}

  std::uint64_t next_u64();

  // Uniform on [0,1) with 53 random bits.
  double next_double();

  double uniform(double a, double b) { return a + (b - a) * next_double(); }

 private:
  U64x2 key_;
  std::uint64_t hi_ = 0;
  std::uint64_t lo_ = 0;
  std::uint64_t cached_ = 0;
  bool has_cached_ = false;
};

// Decorrelated per-index seed for spawning independent trial streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose, std::uint64_t index);

}  // namespace dnnlab::rng
