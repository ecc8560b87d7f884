#include <doctest.h>

#include "wmms/rng.hpp"

using namespace wmms;

TEST_CASE("identical seeds give identical streams") {
  SplitMix64 a(12345), b(12345);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("next_below stays in range and covers it") {
  SplitMix64 rng(7);
  std::vector<int> hits(10, 0);
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t v = rng.next_below(10);
    REQUIRE(v < 10);
    ++hits[v];
  }
  for (int h : hits) CHECK(h > 800);  // roughly uniform
}

TEST_CASE("unit rationals live in [0, 1)") {
  SplitMix64 rng(99);
  for (int i = 0; i < 200; ++i) {
    Rat u = rng.next_unit_rational();
    CHECK(u >= 0);
    CHECK(u < 1);
  }
}

TEST_CASE("substream derivation separates labels") {
  CHECK(derive_substream(1, 2) != derive_substream(1, 3));
  CHECK(derive_substream(1, 2, 4) != derive_substream(1, 2, 5));
  CHECK(derive_substream(1, 2) == derive_substream(1, 2));
  CHECK(derive_substream(1, 2) != derive_substream(2, 2));
}
