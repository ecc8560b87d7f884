#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "wmms/instance.hpp"

namespace wmms {

enum class ShareMethod { exact, heuristic_lower_bound };

// Per-agent weighted maxmin share values, optionally with the partition that
// attains each value.
struct ShareVector {
  std::vector<Rat> values;
  std::vector<std::optional<Allocation>> witnesses;  // empty, or one per agent
  ShareMethod method = ShareMethod::exact;
};

struct SolverBudget {
  std::uint64_t max_states = 10'000'000;
  std::optional<std::chrono::milliseconds> time_limit;
};

struct WmmsResult {
  Rat value;
  Allocation witness;
  std::uint64_t states_explored = 0;
};

// Exact weighted maxmin share of one agent:
//   max over n-partitions <A_1..A_n> of e_i * min_j V_i(A_j) / e_j,
// found by branch and bound over item-to-bundle assignments (items in
// descending value order, bundle j bounded by V_i(A_j) + V_i(unassigned)).
// Never returns an approximation: if the budget runs out the call throws
// BudgetExhaustedError carrying the best feasible value found.
WmmsResult wmms_exact(const Instance& instance, std::size_t agent,
                      const SolverBudget& budget = {});

// Maxmin share under equal entitlements. Throws ValidationError when
// entitlements differ; otherwise identical to wmms_exact.
Rat mms_exact(const Instance& instance, std::size_t agent,
              const SolverBudget& budget = {});

// Seeded local search (restart + hill climbing with single-item relocations
// and pairwise swaps). Always a feasible lower bound on the exact share.
Rat wmms_heuristic_lower_bound(const Instance& instance, std::size_t agent,
                               std::uint32_t iterations, std::uint64_t seed);

struct RatioResult {
  // Best achievable min ratio; empty means unbounded (every share was zero).
  std::optional<Rat> ratio;
  Allocation best_allocation;
  std::uint64_t states_explored = 0;
};

// Brute-force oracle: max over all complete allocations of
//   min over agents with share > 0 of V_i(A_i) / shares[i].
RatioResult best_achievable_min_ratio(const Instance& instance,
                                      const ShareVector& shares,
                                      const SolverBudget& budget = {});

// wmms_exact for every agent, with witnesses.
ShareVector exact_shares(const Instance& instance, const SolverBudget& budget = {});

// wmms_heuristic_lower_bound for every agent.
ShareVector heuristic_shares(const Instance& instance, std::uint32_t iterations,
                             std::uint64_t seed);

}  // namespace wmms
