#pragma once

#include <cstdint>

#include "wmms/rational.hpp"

namespace wmms {

// Counter-based pseudo-random generator (splitmix64). Output depends only on
// the seed and the number of draws, so streams are reproducible across
// platforms and independent of scheduling. Substreams for parallel trials are
// derived by mixing the trial index into the seed, never by sharing a stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Unbiased integer in [0, bound) via rejection sampling. bound >= 1.
  std::uint64_t next_below(std::uint64_t bound);

  // Exact dyadic rational in [0, 1) with 53-bit resolution.
  Rat next_unit_rational();

 private:
  std::uint64_t state_;
};

// Deterministic substream derivation: avalanche-mixes up to three stream
// labels into a base seed.
std::uint64_t derive_substream(std::uint64_t seed, std::uint64_t a,
                               std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace wmms
