#include "wmms/instance.hpp"

#include <algorithm>

namespace wmms {

Instance Instance::create(std::vector<std::vector<Rat>> valuations,
                          std::vector<Rat> entitlements) {
  const std::size_t n = valuations.size();
  if (n == 0) throw ValidationError("instance needs at least one agent");
  if (entitlements.size() != n)
    throw ValidationError("entitlement vector length does not match agent count");

  const std::size_t m = valuations.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    if (valuations[i].size() != m)
      throw ValidationError("valuation matrix rows have inconsistent lengths");
    for (std::size_t j = 0; j < m; ++j)
      if (valuations[i][j] < 0)
        throw ValidationError("negative valuation for agent " + std::to_string(i + 1) +
                              ", item " + std::to_string(j + 1));
  }

  Rat sum(0);
  for (std::size_t i = 0; i < n; ++i) {
    if (entitlements[i] <= 0)
      throw ValidationError("non-positive entitlement for agent " + std::to_string(i + 1));
    sum += entitlements[i];
  }
  if (sum == 0) throw ValidationError("entitlements sum to zero");
  for (auto& e : entitlements) e /= sum;

  Instance instance;
  instance.item_count_ = m;
  instance.totals_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rat total(0);
    for (const auto& v : valuations[i]) total += v;
    instance.totals_.push_back(std::move(total));
  }
  instance.valuations_ = std::move(valuations);
  instance.entitlements_ = std::move(entitlements);
  return instance;
}

Instance Instance::with_entitlements(std::vector<Rat> entitlements) const {
  return Instance::create(valuations_, std::move(entitlements));
}

Allocation Allocation::of(std::size_t agent_count, std::size_t item_count,
                          std::vector<std::vector<std::size_t>> bundles) {
  if (bundles.size() != agent_count)
    throw ValidationError("allocation bundle count does not match agent count");

  std::vector<bool> seen(item_count, false);
  std::size_t assigned = 0;
  for (auto& bundle : bundles) {
    std::sort(bundle.begin(), bundle.end());
    for (std::size_t item : bundle) {
      if (item >= item_count)
        throw ValidationError("allocation references item " + std::to_string(item + 1) +
                              " beyond item count " + std::to_string(item_count));
      if (seen[item])
        throw ValidationError("item " + std::to_string(item + 1) +
                              " appears in more than one bundle");
      seen[item] = true;
      ++assigned;
    }
  }

  Allocation a;
  a.bundles_ = std::move(bundles);
  a.item_count_ = item_count;
  a.complete_ = (assigned == item_count);
  return a;
}

Allocation Allocation::empty_allocation(std::size_t agent_count, std::size_t item_count) {
  return Allocation::of(agent_count, item_count,
                        std::vector<std::vector<std::size_t>>(agent_count));
}

std::size_t Allocation::allocated_count() const {
  std::size_t total = 0;
  for (const auto& b : bundles_) total += b.size();
  return total;
}

Rat bundle_value(const Instance& instance, std::size_t agent,
                 std::span<const std::size_t> bundle) {
  if (agent >= instance.agent_count())
    throw ValidationError("agent index out of range");
  Rat sum(0);
  for (std::size_t item : bundle) {
    if (item >= instance.item_count())
      throw ValidationError("item index out of range");
    sum += instance.value(agent, item);
  }
  return sum;
}

Rat bundle_value(const Instance& instance, std::size_t agent,
                 const Allocation& allocation, std::size_t bundle_index) {
  return bundle_value(instance, agent, std::span(allocation.bundle(bundle_index)));
}

Rat fairness_score(const Instance& instance, std::size_t evaluating_agent,
                   const Allocation& allocation) {
  if (evaluating_agent >= instance.agent_count())
    throw ValidationError("agent index out of range");
  if (allocation.agent_count() != instance.agent_count())
    throw ValidationError("allocation agent count does not match instance");

  const Rat& total = instance.total_value(evaluating_agent);
  if (total == 0)
    throw ValidationError("fairness score undefined: agent " +
                          std::to_string(evaluating_agent + 1) +
                          " values the whole item set at zero");

  std::optional<Rat> score;
  for (std::size_t j = 0; j < instance.agent_count(); ++j) {
    Rat v = bundle_value(instance, evaluating_agent, allocation, j);
    Rat term = v / (total * instance.entitlement(j));
    if (!score || term < *score) score = std::move(term);
  }
  return *score;
}

GuaranteeReport guarantee_report(const Instance& instance, const Allocation& allocation,
                                 const std::vector<Rat>& shares) {
  if (shares.size() != instance.agent_count())
    throw ValidationError("share vector length does not match agent count");
  if (allocation.agent_count() != instance.agent_count())
    throw ValidationError("allocation agent count does not match instance");

  GuaranteeReport report;
  report.per_agent.reserve(shares.size());
  for (std::size_t i = 0; i < shares.size(); ++i) {
    AgentGuarantee g;
    g.received = bundle_value(instance, i, allocation, i);
    g.share = shares[i];
    if (shares[i] > 0) {
      g.ratio = g.received / g.share;
      if (!report.min_ratio || *g.ratio < *report.min_ratio) report.min_ratio = g.ratio;
    }
    report.per_agent.push_back(std::move(g));
  }
  return report;
}

}  // namespace wmms
