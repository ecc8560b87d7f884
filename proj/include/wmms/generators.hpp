#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wmms/instance.hpp"
#include "wmms/rng.hpp"

namespace wmms {

// Value distributions supported by the stochastic families. Support must lie
// within [0,1].
struct Uniform {
  Rat lo;
  Rat hi;
};
struct PointMass {
  Rat value;
};
using Distribution = std::variant<Uniform, PointMass>;

Rat sample_distribution(const Distribution& dist, SplitMix64& rng);
Distribution parse_distribution(const std::string& text);  // "uniform:0,1" | "point:0.5"

// Worst-case family showing that nothing beats a 1/n guarantee: n agents,
// 2n-1 items, the first n-1 agents have entitlement epsilon and value only
// the first n items; agent n holds the rest of the entitlement and spreads
// value almost uniformly. Requires 0 < epsilon < 1/(n-1).
Instance counterexample(std::size_t n, const Rat& epsilon);

// Fixed two-agent fixture (entitlements 1/3 and 2/3, items worth 4,4,4,3,9)
// with its known fairness scores and share value attached. The paper-style
// fixture only specifies the first agent's valuations; the second row is a
// symmetric copy.
struct Example1 {
  Instance instance;
  Allocation alloc_a;        // <{b5}, {b1..b4}>
  Allocation alloc_a_prime;  // <{b1,b2}, {b3,b4,b5}>
  Rat fairness_a;            // 15/16
  Rat fairness_a_prime;      // 1
  Rat wmms_agent1;           // 8
};
Example1 example1();

// Values V_i(b_j) drawn i.i.d. from the agent's own distribution.
// Entitlements default to equal; swap via Instance::with_entitlements.
Instance stochastic_agents(std::size_t n, std::size_t m,
                           const std::vector<Distribution>& per_agent,
                           std::uint64_t seed);

// Values V_i(b_j) drawn i.i.d. from the item's distribution (each column is
// identically distributed across agents).
Instance stochastic_items(std::size_t n, std::size_t m,
                          const std::vector<Distribution>& per_item,
                          std::uint64_t seed);

// n uniform(0,1) draws normalized to sum 1; zero draws are redrawn so every
// entitlement is strictly positive.
std::vector<Rat> random_entitlements(std::size_t n, std::uint64_t seed);

// Count-proportional allocation: agent i receives floor(m * e_i) items, items
// handed out in ascending index to agents in descending entitlement order;
// leftovers go one each to the agents with the largest fractional remainder
// (ties: larger entitlement, then lower index). Always complete.
Allocation proportional_count_allocation(const Instance& instance);

// Declarative description of a generated family, used by the CLI and the
// experiment harness.
struct GeneratorSpec {
  enum class Family { counterexample, example1, stochastic_agents, stochastic_items, bids };
  Family family = Family::stochastic_agents;
  std::size_t n = 2;
  std::size_t m = 2;
  std::optional<Rat> epsilon;               // counterexample only
  std::vector<Distribution> distributions;  // per agent or per item; replicated if size 1
  std::uint64_t seed = 0;
};

// Builds the instance a spec describes (bids family is handled by the bids
// module; passing it here throws).
Instance make_instance(const GeneratorSpec& spec);

}  // namespace wmms
