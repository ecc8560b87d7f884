#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "wmms/generators.hpp"
#include "wmms/instance.hpp"

using namespace wmms;

TEST_CASE("instance validation normalizes entitlements") {
  Instance inst = Instance::create({{Rat(4), Rat(4), Rat(4), Rat(3), Rat(9)},
                                    {Rat(4), Rat(4), Rat(4), Rat(3), Rat(9)}},
                                   {make_rat(1, 3), make_rat(2, 3)});
  CHECK(inst.agent_count() == 2);
  CHECK(inst.item_count() == 5);
  CHECK(inst.total_value(0) == 24);

  Instance rescaled = Instance::create({{Rat(1)}, {Rat(2)}},
                                       {make_rat(1, 5), make_rat(1, 5)});
  CHECK(rescaled.entitlement(0) == make_rat(1, 2));
  CHECK(rescaled.entitlement(1) == make_rat(1, 2));
}

TEST_CASE("instance validation rejects bad input") {
  CHECK_THROWS_AS(Instance::create({{Rat(-1)}}, {Rat(1)}), ValidationError);
  CHECK_THROWS_AS(Instance::create({{Rat(1)}, {Rat(1), Rat(2)}}, {Rat(1), Rat(1)}),
                  ValidationError);
  CHECK_THROWS_AS(Instance::create({{Rat(1)}, {Rat(1)}}, {Rat(1), Rat(0)}),
                  ValidationError);
  CHECK_THROWS_AS(Instance::create({{Rat(1)}, {Rat(1)}}, {Rat(1), Rat(-1)}),
                  ValidationError);
  CHECK_THROWS_AS(Instance::create({{Rat(1)}, {Rat(1)}}, {Rat(1)}), ValidationError);
  CHECK_THROWS_AS(Instance::create({}, {}), ValidationError);
}

TEST_CASE("allocation validation") {
  CHECK_THROWS_AS(Allocation::of(2, 3, {{0, 1}, {1}}), ValidationError);  // duplicate
  CHECK_THROWS_AS(Allocation::of(2, 3, {{3}, {}}), ValidationError);      // out of range
  CHECK_THROWS_AS(Allocation::of(2, 3, {{0}}), ValidationError);          // bundle count
  Allocation partial = Allocation::of(2, 3, {{2}, {0}});
  CHECK_FALSE(partial.complete());
  CHECK(partial.allocated_count() == 2);
  Allocation full = Allocation::of(2, 3, {{2}, {0, 1}});
  CHECK(full.complete());
}

TEST_CASE("bundle_value sums the agent's row") {
  Example1 ex = example1();
  std::vector<std::size_t> first_four{0, 1, 2, 3};
  CHECK(bundle_value(ex.instance, 0, std::span<const std::size_t>(first_four)) == 15);
  CHECK(bundle_value(ex.instance, 0, std::span<const std::size_t>()) == 0);
  std::vector<std::size_t> all{0, 1, 2, 3, 4};
  CHECK(bundle_value(ex.instance, 0, std::span<const std::size_t>(all)) == 24);
  std::vector<std::size_t> bad{5};
  CHECK_THROWS_AS(bundle_value(ex.instance, 0, std::span<const std::size_t>(bad)),
                  ValidationError);
}

TEST_CASE("fairness scores of the two-agent fixture") {
  Example1 ex = example1();
  CHECK(fairness_score(ex.instance, 0, ex.alloc_a) == make_rat(15, 16));
  CHECK(fairness_score(ex.instance, 0, ex.alloc_a_prime) == 1);
}

TEST_CASE("fairness score is 1 for a single agent holding everything") {
  Instance solo = Instance::create({{Rat(2), Rat(5)}}, {Rat(1)});
  CHECK(fairness_score(solo, 0, Allocation::of(1, 2, {{0, 1}})) == 1);
}

TEST_CASE("fairness score is undefined at zero total valuation") {
  Instance zero = Instance::create({{Rat(0)}, {Rat(1)}}, {Rat(1), Rat(1)});
  CHECK_THROWS_AS(fairness_score(zero, 0, Allocation::of(2, 1, {{0}, {}})),
                  ValidationError);
}

TEST_CASE("guarantee report ratios and minimum") {
  Example1 ex = example1();
  std::vector<Rat> shares{Rat(8), Rat(16)};

  GuaranteeReport prime = guarantee_report(ex.instance, ex.alloc_a_prime, shares);
  CHECK(*prime.per_agent[0].ratio == 1);
  CHECK(*prime.per_agent[1].ratio == 1);
  CHECK(*prime.min_ratio == 1);

  GuaranteeReport a = guarantee_report(ex.instance, ex.alloc_a, shares);
  CHECK(*a.per_agent[0].ratio == make_rat(9, 8));
  CHECK(*a.per_agent[1].ratio == make_rat(15, 16));
  CHECK(*a.min_ratio == make_rat(15, 16));
}

TEST_CASE("zero shares give the infinite-ratio sentinel") {
  // Fewer items than agents: every share is zero.
  Instance tiny = Instance::create({{Rat(5)}, {Rat(5)}}, {make_rat(3, 5), make_rat(2, 5)});
  GuaranteeReport r = guarantee_report(tiny, Allocation::of(2, 1, {{0}, {}}),
                                       {Rat(0), Rat(0)});
  CHECK_FALSE(r.min_ratio.has_value());
  CHECK_FALSE(r.per_agent[0].ratio.has_value());
  CHECK_FALSE(r.per_agent[1].ratio.has_value());
}

TEST_CASE("bundle values are additive over disjoint sets") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Instance inst = testing::random_instance(3, 7, seed);
    std::vector<std::size_t> left{0, 2, 4}, right{1, 5}, both{0, 2, 4, 1, 5};
    for (std::size_t agent = 0; agent < 3; ++agent) {
      Rat sum = bundle_value(inst, agent, std::span<const std::size_t>(left)) +
                bundle_value(inst, agent, std::span<const std::size_t>(right));
      CHECK(sum == bundle_value(inst, agent, std::span<const std::size_t>(both)));
    }
  }
}

TEST_CASE("fairness score ignores a rescaling of the evaluator's row") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst = testing::random_instance(2, 5, seed);
    if (inst.total_value(0) == 0) continue;
    Allocation alloc = Allocation::of(2, 5, {{0, 3}, {1, 2, 4}});
    Rat before = fairness_score(inst, 0, alloc);

    std::vector<std::vector<Rat>> scaled{inst.valuation_row(0), inst.valuation_row(1)};
    for (auto& v : scaled[0]) v *= make_rat(7, 3);
    Instance scaled_inst = Instance::create(std::move(scaled), inst.entitlements());
    CHECK(fairness_score(scaled_inst, 0, alloc) == before);
  }
}

TEST_CASE("equal entitlements reduce the fairness score to n * min / total") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst = testing::random_instance(3, 6, seed, /*equal_entitlements=*/true);
    if (inst.total_value(0) == 0) continue;
    Allocation alloc = Allocation::of(3, 6, {{0, 1}, {2, 3}, {4, 5}});
    std::optional<Rat> low;
    for (std::size_t b = 0; b < 3; ++b) {
      Rat v = bundle_value(inst, 0, alloc, b);
      if (!low || v < *low) low = std::move(v);
    }
    CHECK(fairness_score(inst, 0, alloc) == Rat(3) * *low / inst.total_value(0));
  }
}

TEST_CASE("guarantee minimum is invariant under agent permutation") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst = testing::random_instance(3, 6, seed);
    Allocation alloc = Allocation::of(3, 6, {{0, 1}, {2, 3}, {4, 5}});
    std::vector<Rat> shares{Rat(2), make_rat(5, 2), Rat(1)};
    auto base = guarantee_report(inst, alloc, shares).min_ratio;

    // Rotate agents together with their bundles, entitlements, and shares.
    std::vector<std::size_t> perm{2, 0, 1};
    std::vector<std::vector<Rat>> values(3);
    std::vector<Rat> ents(3), pshares(3);
    std::vector<std::vector<std::size_t>> bundles(3);
    for (std::size_t i = 0; i < 3; ++i) {
      values[i] = inst.valuation_row(perm[i]);
      ents[i] = inst.entitlement(perm[i]);
      pshares[i] = shares[perm[i]];
      bundles[i] = alloc.bundle(perm[i]);
    }
    Instance pinst = Instance::create(std::move(values), std::move(ents));
    auto permuted =
        guarantee_report(pinst, Allocation::of(3, 6, std::move(bundles)), pshares).min_ratio;
    CHECK(base == permuted);
  }
}
