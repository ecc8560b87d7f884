#include "wmms/algorithms.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace wmms {

namespace {

// Agents in descending entitlement order, original order on ties.
std::vector<std::size_t> picking_order(const Instance& instance) {
  std::vector<std::size_t> order(instance.agent_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instance.entitlement(a) > instance.entitlement(b);
  });
  return order;
}

// Highest-valued unassigned item for the agent, lowest index on ties.
std::size_t best_remaining_item(const Instance& instance, std::size_t agent,
                                const std::vector<bool>& taken) {
  std::size_t best = instance.item_count();
  for (std::size_t j = 0; j < instance.item_count(); ++j) {
    if (taken[j]) continue;
    if (best == instance.item_count() || instance.value(agent, j) > instance.value(agent, best))
      best = j;
  }
  return best;
}

}  // namespace

Allocation round_robin(const Instance& instance) {
  const std::size_t n = instance.agent_count();
  const std::size_t m = instance.item_count();
  std::vector<std::size_t> order = picking_order(instance);
  std::vector<std::vector<std::size_t>> bundles(n);
  std::vector<bool> taken(m, false);

  std::size_t assigned = 0;
  while (assigned < m) {
    for (std::size_t turn = 0; turn < n && assigned < m; ++turn) {
      std::size_t agent = order[turn];
      std::size_t item = best_remaining_item(instance, agent, taken);
      taken[item] = true;
      bundles[agent].push_back(item);
      ++assigned;
    }
  }
  return Allocation::of(n, m, std::move(bundles));
}

Allocation bag_filling(const Instance& instance, const std::vector<Rat>& thresholds) {
  const std::size_t n = instance.agent_count();
  const std::size_t m = instance.item_count();
  if (thresholds.size() != n)
    throw ValidationError("threshold vector length does not match agent count");

  std::vector<std::vector<std::size_t>> bundles(n);
  std::vector<bool> satisfied(n, false);
  std::size_t open = n;

  std::vector<std::size_t> bag;
  std::vector<Rat> bag_value(n, Rat(0));
  for (std::size_t j = 0; j < m && open > 0; ++j) {
    bag.push_back(j);
    for (std::size_t i = 0; i < n; ++i) bag_value[i] += instance.value(i, j);
    for (std::size_t i = 0; i < n; ++i) {
      if (satisfied[i] || bag_value[i] < thresholds[i]) continue;
      bundles[i] = bag;
      satisfied[i] = true;
      --open;
      bag.clear();
      std::fill(bag_value.begin(), bag_value.end(), Rat(0));
      break;
    }
  }
  // A partially filled bag and any untouched items stay unallocated.
  return Allocation::of(n, m, std::move(bundles));
}

RestrictedInstanceCheck check_restriction(const Instance& instance,
                                          const ShareVector& shares) {
  if (shares.values.size() != instance.agent_count())
    throw ValidationError("share vector length does not match agent count");
  RestrictedInstanceCheck check;
  for (std::size_t i = 0; i < instance.agent_count(); ++i)
    for (std::size_t j = 0; j < instance.item_count(); ++j)
      if (instance.value(i, j) > shares.values[i]) check.violations.emplace_back(i, j);
  check.ok = check.violations.empty();
  return check;
}

Allocation restricted_greedy(const Instance& instance, const ShareVector& shares) {
  if (shares.method != ShareMethod::exact)
    throw ValidationError("restricted greedy requires exact shares");
  RestrictedInstanceCheck check = check_restriction(instance, shares);
  if (!check.ok) {
    std::ostringstream msg;
    msg << "instance is not restricted; item values exceed the agent share at";
    for (const auto& [agent, item] : check.violations)
      msg << " (agent " << agent + 1 << ", item " << item + 1 << ")";
    throw ValidationError(msg.str());
  }

  const std::size_t n = instance.agent_count();
  const std::size_t m = instance.item_count();

  // Selection metric V_i({b_j}) * e_i / share_i; agents with zero share are
  // born satisfied, which also keeps the metric finite.
  std::vector<Rat> metric_scale(n, Rat(0));
  std::vector<bool> satisfied(n, false);
  std::size_t open = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (shares.values[i] == 0) {
      satisfied[i] = true;
    } else {
      metric_scale[i] = instance.entitlement(i) / shares.values[i];
      ++open;
    }
  }

  std::vector<std::vector<std::size_t>> bundles(n);
  std::vector<Rat> held(n, Rat(0));
  std::vector<bool> taken(m, false);
  std::size_t remaining = m;

  while (open > 0 && remaining > 0) {
    std::size_t pick_agent = n, pick_item = m;
    Rat pick_metric;
    for (std::size_t i = 0; i < n; ++i) {
      if (satisfied[i]) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (taken[j]) continue;
        Rat metric = instance.value(i, j) * metric_scale[i];
        if (pick_agent == n || metric > pick_metric) {
          pick_agent = i;
          pick_item = j;
          pick_metric = std::move(metric);
        }
      }
    }
    taken[pick_item] = true;
    --remaining;
    bundles[pick_agent].push_back(pick_item);
    held[pick_agent] += instance.value(pick_agent, pick_item);
    if (2 * held[pick_agent] >= shares.values[pick_agent]) {
      satisfied[pick_agent] = true;
      --open;
    }
  }
  return Allocation::of(n, m, std::move(bundles));
}

Allocation distribute_leftovers_round_robin(const Instance& instance,
                                            const Allocation& allocation) {
  const std::size_t n = instance.agent_count();
  const std::size_t m = instance.item_count();
  std::vector<std::vector<std::size_t>> bundles = allocation.bundles();
  std::vector<bool> taken(m, false);
  for (const auto& bundle : bundles)
    for (std::size_t j : bundle) taken[j] = true;

  std::size_t assigned = allocation.allocated_count();
  std::vector<std::size_t> order = picking_order(instance);
  while (assigned < m) {
    for (std::size_t turn = 0; turn < n && assigned < m; ++turn) {
      std::size_t agent = order[turn];
      std::size_t item = best_remaining_item(instance, agent, taken);
      taken[item] = true;
      bundles[agent].push_back(item);
      ++assigned;
    }
  }
  return Allocation::of(n, m, std::move(bundles));
}

}  // namespace wmms
