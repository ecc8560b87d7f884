#include <doctest.h>

#include "oracles.hpp"
#include "wmms/generators.hpp"
#include "wmms/lp.hpp"

using namespace wmms;

namespace {

void check_feasible(const Instance& inst, const FractionalAssignment& fa) {
  for (std::size_t j = 0; j < inst.item_count(); ++j) {
    Rat col(0);
    for (std::size_t i = 0; i < inst.agent_count(); ++i) {
      REQUIRE(fa.weights[i][j] >= 0);
      REQUIRE(fa.weights[i][j] <= 1);
      col += fa.weights[i][j];
    }
    REQUIRE(col <= 1);
  }
  for (std::size_t i = 0; i < inst.agent_count(); ++i) {
    Rat row(0);
    for (std::size_t j = 0; j < inst.item_count(); ++j)
      row += inst.value(i, j) * fa.weights[i][j];
    REQUIRE(row >= inst.entitlement(i) * inst.total_value(i));
  }
}

// A point is a vertex iff the tight constraints, restricted to the support
// coordinates, pin every support coordinate: rank == |support|. Checked by
// rational Gaussian elimination, independent of the production solver.
bool is_vertex(const Instance& inst, const FractionalAssignment& fa) {
  std::vector<std::pair<std::size_t, std::size_t>> support;
  for (std::size_t i = 0; i < inst.agent_count(); ++i)
    for (std::size_t j = 0; j < inst.item_count(); ++j)
      if (fa.weights[i][j] != 0) support.emplace_back(i, j);
  if (support.empty()) return true;

  std::vector<std::vector<Rat>> rows;
  for (std::size_t i = 0; i < inst.agent_count(); ++i) {
    Rat row_value(0);
    for (std::size_t j = 0; j < inst.item_count(); ++j)
      row_value += inst.value(i, j) * fa.weights[i][j];
    if (row_value != inst.entitlement(i) * inst.total_value(i)) continue;
    std::vector<Rat> row(support.size(), Rat(0));
    for (std::size_t c = 0; c < support.size(); ++c)
      if (support[c].first == i) row[c] = inst.value(i, support[c].second);
    rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < inst.item_count(); ++j) {
    Rat col(0);
    for (std::size_t i = 0; i < inst.agent_count(); ++i) col += fa.weights[i][j];
    if (col != 1) continue;
    std::vector<Rat> row(support.size(), Rat(0));
    for (std::size_t c = 0; c < support.size(); ++c)
      if (support[c].second == j) row[c] = 1;
    rows.push_back(std::move(row));
  }

  std::size_t rank = 0;
  for (std::size_t col = 0; col < support.size() && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      Rat factor = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < support.size(); ++c)
        rows[r][c] -= factor * rows[rank][c];
    }
    ++rank;
  }
  return rank == support.size();
}

Rat max_item_value(const Instance& inst, std::size_t agent) {
  Rat best(0);
  for (std::size_t j = 0; j < inst.item_count(); ++j)
    if (inst.value(agent, j) > best) best = inst.value(agent, j);
  return best;
}

}  // namespace

TEST_CASE("single agent takes every valued item fully") {
  Instance solo = Instance::create({{Rat(2), Rat(0), Rat(5)}}, {Rat(1)});
  FractionalAssignment fa = build_and_solve_lp(solo);
  CHECK(fa.basic);
  CHECK(fa.weights[0][0] == 1);
  CHECK(fa.weights[0][1] == 0);
  CHECK(fa.weights[0][2] == 1);
  SupportGraph g = build_support_graph(fa);
  CHECK(g.components.size() == 1);
  CHECK(g.kinds[0] == ComponentKind::tree);

  Allocation rounded = round_assignment(solo, fa);
  CHECK(rounded.bundle(0) == std::vector<std::size_t>{0, 2});
  CHECK_FALSE(rounded.complete());  // the worthless item stays out
}

TEST_CASE("identical two-by-two instance rounds to one item each") {
  Instance inst = Instance::create({{Rat(1), Rat(1)}, {Rat(1), Rat(1)}},
                                   {make_rat(1, 2), make_rat(1, 2)});
  FractionalAssignment fa = build_and_solve_lp(inst);
  check_feasible(inst, fa);
  CHECK(fa.basic);
  CHECK(fa.nonzero_count() <= 4);
  CHECK(is_vertex(inst, fa));

  Allocation rounded = round_assignment(inst, fa);
  CHECK(rounded.complete());
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(rounded.bundle(i).size() == 1);
    CHECK(bundle_value(inst, i, rounded, i) >= 0);  // floor 1*(1/2)*2 - 1
  }
}

TEST_CASE("fixture rows meet their proportional floors") {
  Example1 ex = example1();
  FractionalAssignment fa = build_and_solve_lp(ex.instance);
  check_feasible(ex.instance, fa);
  Rat row0(0), row1(0);
  for (std::size_t j = 0; j < 5; ++j) {
    row0 += ex.instance.value(0, j) * fa.weights[0][j];
    row1 += ex.instance.value(1, j) * fa.weights[1][j];
  }
  CHECK(row0 >= 8);
  CHECK(row1 >= 16);
}

TEST_CASE("no items yields the empty assignment") {
  Instance empty = Instance::create({{}, {}}, {Rat(1), Rat(1)});
  FractionalAssignment fa = build_and_solve_lp(empty);
  CHECK(fa.basic);
  CHECK(fa.nonzero_count() == 0);
  Allocation rounded = round_assignment(empty, fa);
  CHECK(rounded.complete());
  CHECK(rounded.allocated_count() == 0);
  CHECK(build_support_graph(fa).components.empty());
}

TEST_CASE("zero-total agents are rejected") {
  Instance zero = Instance::create({{Rat(0)}, {Rat(1)}}, {Rat(1), Rat(1)});
  CHECK_THROWS_AS(build_and_solve_lp(zero), ValidationError);
}

TEST_CASE("solver outputs are basic feasible vertices with pseudoforest support") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::size_t n = 2 + seed % 3;
    std::size_t m = 4 + seed % 4;
    Instance inst = testing::random_instance(n, m, seed);
    bool valid = true;
    for (std::size_t i = 0; i < n; ++i)
      if (inst.total_value(i) == 0) valid = false;
    if (!valid) continue;

    FractionalAssignment fa = build_and_solve_lp(inst);
    check_feasible(inst, fa);
    CHECK(fa.nonzero_count() <= n + m);
    CHECK(is_vertex(inst, fa));
    SupportGraph g = build_support_graph(fa);  // throws if not a pseudoforest
    CHECK(g.components.size() >= 1);
  }
}

TEST_CASE("rounded allocations keep the proportional value minus one item") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Instance inst = testing::random_instance(3, 6, seed);
    bool valid = true;
    for (std::size_t i = 0; i < 3; ++i)
      if (inst.total_value(i) == 0) valid = false;
    if (!valid) continue;

    FractionalAssignment fa = build_and_solve_lp(inst);
    Allocation rounded = round_assignment(inst, fa);
    for (std::size_t i = 0; i < 3; ++i) {
      Rat fractional(0);
      for (std::size_t j = 0; j < 6; ++j)
        fractional += inst.value(i, j) * fa.weights[i][j];
      Rat received = bundle_value(inst, i, rounded, i);
      Rat max_item = max_item_value(inst, i);
      CHECK(received >= fractional - max_item);
      CHECK(received >= inst.entitlement(i) * inst.total_value(i) - max_item);
    }
  }
}

TEST_CASE("support graph and rounding reject non-basic input") {
  Instance inst = Instance::create({{Rat(1), Rat(1)}, {Rat(1), Rat(1)}},
                                   {make_rat(1, 2), make_rat(1, 2)});
  FractionalAssignment proportional;
  proportional.agent_count = 2;
  proportional.item_count = 2;
  proportional.weights = {{make_rat(1, 2), make_rat(1, 2)},
                          {make_rat(1, 2), make_rat(1, 2)}};
  proportional.basic = false;
  CHECK_THROWS_AS(build_support_graph(proportional), ValidationError);
  CHECK_THROWS_AS(round_assignment(inst, proportional), ValidationError);
}

TEST_CASE("rounding rejects infeasible input") {
  Instance inst = Instance::create({{Rat(1), Rat(1)}, {Rat(1), Rat(1)}},
                                   {make_rat(1, 2), make_rat(1, 2)});
  FractionalAssignment bogus;
  bogus.agent_count = 2;
  bogus.item_count = 2;
  bogus.weights = {{make_rat(1, 4), Rat(0)}, {Rat(0), make_rat(1, 4)}};
  bogus.basic = true;  // flag lies; the row floors are missed
  CHECK_THROWS_AS(round_assignment(inst, bogus), ValidationError);
}

TEST_CASE("rounding certificates summarize the bound inputs") {
  Instance inst = Instance::create({{Rat(2), Rat(4)}, {Rat(3), Rat(1)}},
                                   {make_rat(1, 2), make_rat(1, 2)});
  FractionalAssignment fa = build_and_solve_lp(inst);
  Allocation rounded = round_assignment(inst, fa);
  auto certs = rounding_certificates(inst, rounded);
  REQUIRE(certs.size() == 2);
  CHECK(certs[0].proportional_share == 3);
  CHECK(certs[0].max_item == 4);
  CHECK(certs[0].received == bundle_value(inst, 0, rounded, 0));
  CHECK(certs[1].proportional_share == 2);
  CHECK(certs[1].max_item == 3);
}
