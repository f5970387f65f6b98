#pragma once

#include <cstdint>

namespace cliquelab {

// splitmix64 output mixer (bijective on 64-bit words).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Root seed plus the stream-splitting rule. Every randomized operation takes
// an RngSeed and derives one independent substream per (a, b) pair, where a
// and b identify the consumer (grid point and trial index, for example):
//
//   derive(a, b) = mix64(mix64(mix64(seed + G) + a + G) + b + G),
//   G = 0x9e3779b97f4a7c15
//
// The rule is part of the output contract: results depend only on
// (seed, a, b), never on scheduling or thread count.
struct RngSeed {
  std::uint64_t value = 0;

  [[nodiscard]] constexpr RngSeed derive(std::uint64_t a, std::uint64_t b) const noexcept {
    constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t s = mix64(value + kGamma);
    s = mix64(s + a + kGamma);
    s = mix64(s + b + kGamma);
    return RngSeed{s};
  }

  friend constexpr bool operator==(RngSeed, RngSeed) noexcept = default;
};

// xoshiro256** 1.0, state filled by a splitmix64 walk from the seed.
class Xoshiro256 {
 public:
  explicit constexpr Xoshiro256(RngSeed seed) noexcept {
    std::uint64_t sm = seed.value;
    for (auto& word : state_) {
      sm += 0x9e3779b97f4a7c15ULL;
      word = mix64(sm);
    }
  }

  constexpr std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform draw from [0, n) by widening multiply with rejection; exactly
  // uniform, no modulo bias. n must be nonzero.
  std::uint64_t below(std::uint64_t n) noexcept {
    unsigned __int128 product = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        product = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4] = {};
};

}  // namespace cliquelab
