#include "dnnlab/rng.hpp"

namespace dnnlab::rng {

namespace {

constexpr std::uint64_t kParity = 0x1BD11BDAA9FC1A22ULL;
constexpr unsigned kRot[8] = {16, 42, 12, 31, 16, 32, 24, 21};

inline std::uint64_t rotl(std::uint64_t x, unsigned n) {
  return (x << n) | (x >> (64 - n));
}

}  // namespace

U64x2 threefry2x64(U64x2 counter, U64x2 key) {
  const std::uint64_t ks[3] = {key.v0, key.v1, kParity ^ key.v0 ^ key.v1};
  std::uint64_t x0 = counter.v0 + ks[0];
  std::uint64_t x1 = counter.v1 + ks[1];
  for (unsigned r = 0; r < 20; ++r) {
    x0 += x1;
    x1 = rotl(x1, kRot[r % 8]);
    x1 ^= x0;
    if (r % 4 == 3) {
      const std::uint64_t s = r / 4 + 1;
      x0 += ks[s % 3];
      x1 += ks[(s + 1) % 3] + s;
    }
  }
  return {x0, x1};
}

std::uint64_t Stream::next_u64() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const U64x2 out = threefry2x64({hi_, lo_++}, key_);
  cached_ = out.v1;
  has_cached_ = true;
  return out.v0;
}

double Stream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose, std::uint64_t index) {
  return threefry2x64({index, 0}, {master, purpose}).v0;
}

}  // namespace dnnlab::rng
