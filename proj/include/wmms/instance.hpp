#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wmms/errors.hpp"
#include "wmms/rational.hpp"

namespace wmms {

// A fair-division instance: n agents with additive valuations over m
// indivisible items, plus a positive entitlement per agent. Entitlements are
// rescaled to sum to exactly 1 at construction. Immutable after creation.
class Instance {
 public:
  // Validates and normalizes. Throws ValidationError on: inconsistent
  // dimensions, a negative valuation, a non-positive entitlement, or an
  // entitlement vector summing to zero.
  static Instance create(std::vector<std::vector<Rat>> valuations,
                         std::vector<Rat> entitlements);

  std::size_t agent_count() const { return valuations_.size(); }
  std::size_t item_count() const { return item_count_; }

  const Rat& value(std::size_t agent, std::size_t item) const {
    return valuations_[agent][item];
  }
  const std::vector<Rat>& valuation_row(std::size_t agent) const {
    return valuations_[agent];
  }
  const Rat& entitlement(std::size_t agent) const { return entitlements_[agent]; }
  const std::vector<Rat>& entitlements() const { return entitlements_; }

  // V_i(M): the agent's value for the whole item set (cached).
  const Rat& total_value(std::size_t agent) const { return totals_[agent]; }

  // Same valuations, different entitlements (re-validated and normalized).
  Instance with_entitlements(std::vector<Rat> entitlements) const;

 private:
  Instance() = default;

  std::vector<std::vector<Rat>> valuations_;
  std::vector<Rat> entitlements_;
  std::vector<Rat> totals_;
  std::size_t item_count_ = 0;
};

// A partition of a subset of the items into one bundle per agent. Bundles are
// kept sorted; `complete()` is true iff every item is allocated.
class Allocation {
 public:
  // Validates disjointness and index ranges (item indices are 0-based here;
  // the JSON wire format is 1-based).
  static Allocation of(std::size_t agent_count, std::size_t item_count,
                       std::vector<std::vector<std::size_t>> bundles);

  static Allocation empty_allocation(std::size_t agent_count, std::size_t item_count);

  std::size_t agent_count() const { return bundles_.size(); }
  std::size_t item_count() const { return item_count_; }
  bool complete() const { return complete_; }

  const std::vector<std::size_t>& bundle(std::size_t agent) const {
    return bundles_[agent];
  }
  const std::vector<std::vector<std::size_t>>& bundles() const { return bundles_; }

  std::size_t allocated_count() const;

  bool operator==(const Allocation& other) const {
    return bundles_ == other.bundles_ && item_count_ == other.item_count_;
  }

 private:
  Allocation() = default;

  std::vector<std::vector<std::size_t>> bundles_;
  std::size_t item_count_ = 0;
  bool complete_ = false;
};

// Sum of the agent's values over a set of items. Empty set -> 0.
Rat bundle_value(const Instance& instance, std::size_t agent,
                 std::span<const std::size_t> bundle);

// Value of `allocation`'s bundle `bundle_index` through `agent`'s eyes.
Rat bundle_value(const Instance& instance, std::size_t agent,
                 const Allocation& allocation, std::size_t bundle_index);

// Fairness of an allocation as judged by one agent:
//   min over bundles j of V_i(A_j) / (V_i(M) * e_j).
// Equals 1 when every bundle is exactly proportional to its entitlement.
// Throws ValidationError when the evaluating agent values the whole item set
// at zero (the score is undefined there).
Rat fairness_score(const Instance& instance, std::size_t evaluating_agent,
                   const Allocation& allocation);

// Received value vs. share value per agent. `ratio` is empty when the share
// is zero (the agent is vacuously satisfied; rendered as "inf").
struct AgentGuarantee {
  Rat received;
  Rat share;
  std::optional<Rat> ratio;
};

struct GuaranteeReport {
  std::vector<AgentGuarantee> per_agent;
  // Minimum ratio over agents with a positive share; empty when there are
  // none (every agent had share zero).
  std::optional<Rat> min_ratio;
};

GuaranteeReport guarantee_report(const Instance& instance,
                                 const Allocation& allocation,
                                 const std::vector<Rat>& shares);

}  // namespace wmms
