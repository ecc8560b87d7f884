#include <doctest.h>

#include "oracles.hpp"
#include "wmms/generators.hpp"
#include "wmms/solver.hpp"

using namespace wmms;

namespace {

Rat witness_value(const Instance& inst, std::size_t agent, const Allocation& witness) {
  std::optional<Rat> low;
  for (std::size_t b = 0; b < inst.agent_count(); ++b) {
    Rat term = bundle_value(inst, agent, witness, b) / inst.entitlement(b);
    if (!low || term < *low) low = std::move(term);
  }
  return inst.entitlement(agent) * *low;
}

}  // namespace

TEST_CASE("exact share of the two-agent fixture") {
  Example1 ex = example1();
  WmmsResult r = wmms_exact(ex.instance, 0);
  CHECK(r.value == 8);
  CHECK(witness_value(ex.instance, 0, r.witness) == 8);
  CHECK(wmms_exact(ex.instance, 1).value == 16);
}

TEST_CASE("a single agent's share is the whole pie") {
  Instance solo = Instance::create({{Rat(2), make_rat(7, 3), Rat(0)}}, {Rat(1)});
  WmmsResult r = wmms_exact(solo, 0);
  CHECK(r.value == solo.total_value(0));
  CHECK(r.witness.complete());
}

TEST_CASE("exact shares of the worst-case family") {
  Instance ce = counterexample(3, make_rat(1, 100));
  CHECK(wmms_exact(ce, 0).value == make_rat(1, 100));
  CHECK(wmms_exact(ce, 1).value == make_rat(1, 100));
  CHECK(wmms_exact(ce, 2).value == make_rat(49, 50));
}

TEST_CASE("equal-entitlement share via mms_exact") {
  Instance inst = Instance::create(
      {{Rat(3), Rat(3), Rat(2), Rat(2)}, {Rat(3), Rat(3), Rat(2), Rat(2)}},
      {Rat(1), Rat(1)});
  CHECK(mms_exact(inst, 0) == 5);  // matches full enumeration of the 16 splits

  Instance single = Instance::create({{Rat(7)}, {Rat(7)}}, {Rat(1), Rat(1)});
  CHECK(mms_exact(single, 0) == 0);

  Instance three = Instance::create({{Rat(1), Rat(1), Rat(1)},
                                     {Rat(1), Rat(1), Rat(1)},
                                     {Rat(1), Rat(1), Rat(1)}},
                                    {Rat(1), Rat(1), Rat(1)});
  CHECK(mms_exact(three, 0) == 1);
}

TEST_CASE("mms_exact refuses unequal entitlements") {
  Instance inst = Instance::create({{Rat(1)}, {Rat(1)}}, {make_rat(1, 3), make_rat(2, 3)});
  CHECK_THROWS_AS(mms_exact(inst, 0), ValidationError);
}

TEST_CASE("heuristic lower bound finds the fixture optimum") {
  Example1 ex = example1();
  CHECK(wmms_heuristic_lower_bound(ex.instance, 0, 100, 1) == 8);
}

TEST_CASE("heuristic is deterministic under a fixed seed") {
  Instance inst = testing::random_instance(3, 9, 5);
  Rat a = wmms_heuristic_lower_bound(inst, 1, 3, 77);
  Rat b = wmms_heuristic_lower_bound(inst, 1, 3, 77);
  CHECK(a == b);
}

TEST_CASE("heuristic on a single agent returns the total") {
  Instance solo = Instance::create({{Rat(4), Rat(1)}}, {Rat(1)});
  CHECK(wmms_heuristic_lower_bound(solo, 0, 1, 0) == 5);
}

TEST_CASE("heuristic never exceeds the exact share") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Instance inst = testing::random_instance(3, 7, seed);
    for (std::size_t agent = 0; agent < 3; ++agent) {
      Rat exact = wmms_exact(inst, agent).value;
      Rat heur = wmms_heuristic_lower_bound(inst, agent, 4, seed);
      CHECK(heur <= exact);
    }
  }
}

TEST_CASE("best achievable ratio on the worst-case family") {
  Instance ce = counterexample(3, make_rat(1, 100));
  ShareVector shares = exact_shares(ce);
  RatioResult r = best_achievable_min_ratio(ce, shares);
  CHECK(*r.ratio == make_rat(52, 147));  // frozen from full enumeration
  CHECK(*r.ratio <= make_rat(109, 294));
  CHECK(*r.ratio >= make_rat(1, 3));
  CHECK(r.best_allocation.complete());
}

TEST_CASE("best achievable ratio hits 1 on the fixture") {
  Example1 ex = example1();
  ShareVector shares;
  shares.values = {Rat(8), Rat(16)};
  RatioResult r = best_achievable_min_ratio(ex.instance, shares);
  CHECK(*r.ratio == 1);
}

TEST_CASE("best achievable ratio for one agent is exactly 1") {
  Instance solo = Instance::create({{Rat(2), Rat(3)}}, {Rat(1)});
  ShareVector shares = exact_shares(solo);
  CHECK(*best_achievable_min_ratio(solo, shares).ratio == 1);
}

TEST_CASE("all-zero shares make the ratio unbounded") {
  Instance tiny = Instance::create({{Rat(5)}, {Rat(5)}}, {Rat(1), Rat(1)});
  ShareVector shares;
  shares.values = {Rat(0), Rat(0)};
  RatioResult r = best_achievable_min_ratio(tiny, shares);
  CHECK_FALSE(r.ratio.has_value());
  CHECK(r.best_allocation.complete());
}

TEST_CASE("exact share vectors carry consistent witnesses") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst = testing::random_instance(3, 6, seed);
    ShareVector shares = exact_shares(inst);
    REQUIRE(shares.witnesses.size() == 3);
    for (std::size_t agent = 0; agent < 3; ++agent)
      CHECK(witness_value(inst, agent, *shares.witnesses[agent]) == shares.values[agent]);
  }
}

TEST_CASE("exact share equals equal-entitlement share on every instance") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Instance inst = testing::random_instance(3, 6, seed, /*equal_entitlements=*/true);
    for (std::size_t agent = 0; agent < 3; ++agent)
      CHECK(wmms_exact(inst, agent).value == mms_exact(inst, agent));
  }
}

TEST_CASE("search equals plain enumeration") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    Instance inst = testing::random_instance(3, 6, seed);
    for (std::size_t agent = 0; agent < 3; ++agent)
      CHECK(wmms_exact(inst, agent).value == testing::wmms_by_enumeration(inst, agent));
  }
}

TEST_CASE("share is bounded by the proportional value") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Instance inst = testing::random_instance(4, 6, seed);
    for (std::size_t agent = 0; agent < 4; ++agent)
      CHECK(wmms_exact(inst, agent).value <=
            inst.entitlement(agent) * inst.total_value(agent));
  }
}

TEST_CASE("fewer items than agents forces zero shares") {
  Instance inst = testing::random_instance(4, 3, 9);
  for (std::size_t agent = 0; agent < 4; ++agent)
    CHECK(wmms_exact(inst, agent).value == 0);
}

TEST_CASE("adding an item never lowers a share") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Instance inst = testing::random_instance(3, 5, seed);
    std::vector<std::vector<Rat>> grown;
    for (std::size_t i = 0; i < 3; ++i) {
      grown.push_back(inst.valuation_row(i));
      grown[i].push_back(make_rat(static_cast<long>(seed % 7) + 1, 2));
    }
    Instance bigger = Instance::create(std::move(grown), inst.entitlements());
    for (std::size_t agent = 0; agent < 3; ++agent)
      CHECK(wmms_exact(bigger, agent).value >= wmms_exact(inst, agent).value);
  }
}

TEST_CASE("scaling a row scales the share and keeps the witness") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst = testing::random_instance(3, 6, seed);
    WmmsResult base = wmms_exact(inst, 1);
    std::vector<std::vector<Rat>> scaled{inst.valuation_row(0), inst.valuation_row(1),
                                         inst.valuation_row(2)};
    for (auto& v : scaled[1]) v *= make_rat(5, 2);
    Instance scaled_inst = Instance::create(std::move(scaled), inst.entitlements());
    WmmsResult after = wmms_exact(scaled_inst, 1);
    CHECK(after.value == base.value * make_rat(5, 2));
    CHECK(after.witness == base.witness);
  }
}

TEST_CASE("exhausted budgets raise instead of degrading") {
  Instance inst = testing::random_instance(3, 12, 3);
  SolverBudget tiny{50, std::nullopt};
  CHECK_THROWS_AS(wmms_exact(inst, 0, tiny), BudgetExhaustedError);
  try {
    wmms_exact(inst, 0, tiny);
  } catch (const BudgetExhaustedError& e) {
    CHECK(e.states_explored > 50);
    CHECK(e.best_value >= 0);
  }
  ShareVector fake;
  fake.values = {Rat(1), Rat(1), Rat(1)};
  CHECK_THROWS_AS(best_achievable_min_ratio(inst, fake, tiny), BudgetExhaustedError);
}

TEST_CASE("exact share survives 64-bit overflow of the value grid") {
  // Denominators chosen so the scaled integer values exceed the int64 fast
  // path and force the big-integer fallback.
  Rat huge = Rat(mpz_class("123456789012345678901234567"), mpz_class("987654321098765432109"));
  Instance inst = Instance::create(
      {{huge, huge * 2, huge * 3, Rat(1)}, {Rat(1), Rat(2), Rat(3), Rat(4)}},
      {make_rat(1, 2), make_rat(1, 2)});
  CHECK(wmms_exact(inst, 0).value == testing::wmms_by_enumeration(inst, 0));
  CHECK(wmms_heuristic_lower_bound(inst, 0, 8, 3) <= wmms_exact(inst, 0).value);
}
