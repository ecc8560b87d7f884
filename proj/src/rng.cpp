#include "wmms/rng.hpp"

namespace wmms {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix64(state_);
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
  // Rejection sampling over the top of the range keeps the draw unbiased.
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

Rat SplitMix64::next_unit_rational() { return rat_from_bits(next() >> 11, 53); }

std::uint64_t derive_substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                               std::uint64_t c) {
  std::uint64_t x = seed;
  x = mix64(x ^ (a + kGolden));
  x = mix64(x ^ (b + 2 * kGolden));
  x = mix64(x ^ (c + 3 * kGolden));
  return x;
}

}  // namespace wmms
