#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wmms/instance.hpp"
#include "wmms/solver.hpp"

namespace wmms {

// Entitlement-ordered round robin: agents sorted by descending entitlement
// (ties keep the original order) repeatedly pick their most valuable
// unassigned item (value ties -> lowest item index) until nothing is left.
// Guarantees every agent a bundle worth at least a 1/n fraction of their
// weighted maxmin share. Always complete.
Allocation round_robin(const Instance& instance);

// Classic bag filling: items enter a bag in ascending index order; as soon as
// the bag reaches an unsatisfied agent's threshold (lowest index on ties)
// that agent takes the bag. Stops when items or unsatisfied agents run out;
// any partially filled bag stays unallocated, so the result may be partial.
Allocation bag_filling(const Instance& instance, const std::vector<Rat>& thresholds);

// Which (agent, item) pairs break the single-item cap V_i({b_j}) <= share_i.
struct RestrictedInstanceCheck {
  bool ok = true;
  std::vector<std::pair<std::size_t, std::size_t>> violations;  // (agent, item)
};

RestrictedInstanceCheck check_restriction(const Instance& instance,
                                          const ShareVector& shares);

// Greedy for restricted instances: repeatedly give the unsatisfied agent/item
// pair with the highest V_i({b_j}) * e_i / share_i (ties: lowest agent, then
// lowest item) its item, until every agent holds at least half their share or
// items run out. On restricted instances every agent ends with at least half
// and never more than their full share. Leftovers stay unallocated.
//
// Requires exact shares and a passing restriction check; throws
// ValidationError naming the violating pairs otherwise. Agents with a zero
// share are born satisfied and never receive items.
Allocation restricted_greedy(const Instance& instance, const ShareVector& shares);

// Completes a partial allocation by handing out the leftovers round-robin
// (same picking order as round_robin). Bundle-cap guarantees of the producing
// algorithm no longer apply to the filled-up allocation.
Allocation distribute_leftovers_round_robin(const Instance& instance,
                                            const Allocation& allocation);

}  // namespace wmms
