#include "wmms/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "wmms/algorithms.hpp"
#include "wmms/lp.hpp"
#include "wmms/rng.hpp"

namespace wmms {

namespace {

constexpr std::uint64_t kTrialTag = 0x747269;
constexpr std::uint64_t kModelItemTag = 0xd157;

bool exact_search_within_budget(std::size_t n, std::size_t m, std::uint64_t budget) {
  // The allocation search explores at most ~ 2 * n^m states.
  std::uint64_t states = 1;
  for (std::size_t k = 0; k < m; ++k) {
    if (states > budget / (2 * n)) return false;
    states *= n;
  }
  return true;
}

// Hill climbing over complete allocations, maximizing the minimum ratio
// received/share across agents with positive shares. Exact arithmetic; the
// three lowest ratios make candidate evaluation O(1) comparisons.
class AllocationClimb {
 public:
  AllocationClimb(const Instance& inst, const std::vector<Rat>& shares)
      : inst_(inst), n_(inst.agent_count()), m_(inst.item_count()) {
    inverse_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i)
      if (shares[i] > 0) {
        inverse_[i] = 1 / shares[i];
        considered_.push_back(i);
      }
    sums_.assign(n_, Rat(0));
    assign_.assign(m_, 0);
  }

  bool has_considered() const { return !considered_.empty(); }

  void load(const Allocation& allocation) {
    std::fill(sums_.begin(), sums_.end(), Rat(0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j : allocation.bundle(i)) {
        assign_[j] = i;
        sums_[i] += inst_.value(i, j);
      }
  }

  Rat ratio(std::size_t agent) const { return sums_[agent] * inverse_[agent]; }

  Rat objective() const {
    Rat best = ratio(considered_.front());
    for (std::size_t k = 1; k < considered_.size(); ++k) {
      Rat r = ratio(considered_[k]);
      if (r < best) best = std::move(r);
    }
    return best;
  }

  void climb(std::size_t max_steps) {
    if (considered_.empty() || n_ < 2) return;
    for (std::size_t step = 0; step < max_steps; ++step)
      if (!improve_once()) return;
  }

  Allocation allocation() const {
    std::vector<std::vector<std::size_t>> bundles(n_);
    for (std::size_t j = 0; j < m_; ++j) bundles[assign_[j]].push_back(j);
    return Allocation::of(n_, m_, std::move(bundles));
  }

 private:
  struct Low3 {
    std::array<int, 3> idx{-1, -1, -1};
    std::array<Rat, 3> val;
  };

  Low3 lowest_three() const {
    Low3 low;
    for (std::size_t agent : considered_) {
      Rat r = ratio(agent);
      int id = static_cast<int>(agent);
      for (int slot = 0; slot < 3; ++slot) {
        if (low.idx[slot] < 0) {
          low.idx[slot] = id;
          low.val[slot] = std::move(r);
          break;
        }
        if (r < low.val[slot]) {
          std::swap(low.idx[slot], id);
          std::swap(low.val[slot], r);
        }
      }
    }
    return low;
  }

  bool improve_once() {
    Low3 low = lowest_three();
    Rat current = low.val[0];

    bool found = false;
    Rat best_obj;
    std::size_t mv_item = 0, mv_other = 0, mv_to = 0;
    bool mv_swap = false;

    auto outside_floor = [&](std::size_t a, std::size_t b, Rat& out) -> bool {
      for (int slot = 0; slot < 3; ++slot) {
        if (low.idx[slot] < 0) return false;
        std::size_t agent = static_cast<std::size_t>(low.idx[slot]);
        if (agent != a && agent != b) {
          out = low.val[slot];
          return true;
        }
      }
      return false;
    };

    auto consider = [&](std::size_t a, Rat new_a_sum, std::size_t b, Rat new_b_sum,
                        std::size_t item, std::size_t other, std::size_t to, bool swap) {
      Rat obj;
      bool have = false;
      if (inverse_[a] != 0) {
        obj = new_a_sum * inverse_[a];
        have = true;
      }
      if (inverse_[b] != 0) {
        Rat rb = new_b_sum * inverse_[b];
        if (!have || rb < obj) obj = std::move(rb);
        have = true;
      }
      Rat floor;
      if (outside_floor(a, b, floor) && (!have || floor < obj)) {
        obj = std::move(floor);
        have = true;
      }
      if (!have) return;  // no considered agent affected
      if (obj <= current) return;
      if (found && obj <= best_obj) return;
      found = true;
      best_obj = std::move(obj);
      mv_item = item;
      mv_other = other;
      mv_to = to;
      mv_swap = swap;
    };

    for (std::size_t j = 0; j < m_; ++j) {
      std::size_t a = assign_[j];
      for (std::size_t b = 0; b < n_; ++b) {
        if (b == a) continue;
        consider(a, sums_[a] - inst_.value(a, j), b, sums_[b] + inst_.value(b, j), j, 0,
                 b, false);
      }
    }
    for (std::size_t j = 0; j < m_; ++j) {
      std::size_t a = assign_[j];
      for (std::size_t k = j + 1; k < m_; ++k) {
        std::size_t b = assign_[k];
        if (a == b) continue;
        consider(a, sums_[a] - inst_.value(a, j) + inst_.value(a, k), b,
                 sums_[b] - inst_.value(b, k) + inst_.value(b, j), j, k, b, true);
      }
    }

    if (!found) return false;
    if (mv_swap) {
      std::size_t a = assign_[mv_item], b = assign_[mv_other];
      sums_[a] += inst_.value(a, mv_other) - inst_.value(a, mv_item);
      sums_[b] += inst_.value(b, mv_item) - inst_.value(b, mv_other);
      std::swap(assign_[mv_item], assign_[mv_other]);
    } else {
      std::size_t a = assign_[mv_item];
      sums_[a] -= inst_.value(a, mv_item);
      sums_[mv_to] += inst_.value(mv_to, mv_item);
      assign_[mv_item] = mv_to;
    }
    return true;
  }

  const Instance& inst_;
  std::size_t n_, m_;
  std::vector<Rat> inverse_;  // 1/share, or 0 for zero-share agents
  std::vector<std::size_t> considered_;
  std::vector<Rat> sums_;
  std::vector<std::size_t> assign_;
};

std::optional<Rat> allocation_min_ratio(const Instance& inst, const Allocation& alloc,
                                        const ShareVector& shares) {
  return guarantee_report(inst, alloc, shares.values).min_ratio;
}

// Best min-ratio allocation found by a fixed portfolio: the guaranteed
// algorithms that apply, the rounded fractional assignment, then hill
// climbing from the best starting point. A lower bound on the true optimum.
std::optional<Rat> portfolio_ratio(const Instance& inst, const ShareVector& shares) {
  std::vector<Allocation> candidates;
  candidates.push_back(round_robin(inst));
  if (shares.method == ShareMethod::exact && check_restriction(inst, shares).ok)
    candidates.push_back(restricted_greedy(inst, shares));
  bool lp_applicable = true;
  for (std::size_t i = 0; i < inst.agent_count(); ++i)
    if (inst.total_value(i) == 0) lp_applicable = false;
  if (lp_applicable)
    candidates.push_back(round_assignment(inst, build_and_solve_lp(inst)));

  std::optional<Rat> best;
  const Allocation* best_alloc = nullptr;
  bool best_infinite = false;
  for (const auto& cand : candidates) {
    auto ratio = allocation_min_ratio(inst, cand, shares);
    if (!ratio) {  // every share zero: vacuously unbounded
      best_infinite = true;
      break;
    }
    if (!best || *ratio > *best) {
      best = ratio;
      best_alloc = &cand;
    }
  }
  if (best_infinite) return std::nullopt;

  AllocationClimb climb(inst, shares.values);
  if (!climb.has_considered()) return std::nullopt;
  climb.load(distribute_leftovers_round_robin(inst, *best_alloc));
  climb.climb(24 + 2 * inst.item_count());
  Rat climbed = climb.objective();
  return climbed > *best ? climbed : *best;
}

Allocation run_named_algorithm(const std::string& name, const Instance& inst,
                               const ShareVector& shares) {
  if (name == "roundrobin") return round_robin(inst);
  if (name == "bagfill") {
    std::vector<Rat> thresholds;
    thresholds.reserve(shares.values.size());
    for (const auto& s : shares.values) thresholds.push_back(s / 2);
    return bag_filling(inst, thresholds);
  }
  if (name == "restricted") return restricted_greedy(inst, shares);
  if (name == "lp") return round_assignment(inst, build_and_solve_lp(inst));
  throw ValidationError("unknown algorithm '" + name + "'");
}

struct ValueSource {
  const BidPool* pool = nullptr;
  const GeneratorSpec* family = nullptr;

  Instance make(std::size_t n, std::size_t m, std::uint64_t seed) const {
    if (pool) return instance_from_bids(*pool, n, m, seed);
    GeneratorSpec spec = *family;
    spec.n = n;
    spec.m = m;
    spec.seed = seed;
    return make_instance(spec);
  }
};

ExperimentReport run_experiment_impl(const ExperimentConfig& config,
                                     const ValueSource& source) {
  if (config.m_values.empty()) throw ValidationError("experiment needs at least one m");
  if (config.trials == 0) throw ValidationError("experiment needs at least one trial");

  ExperimentReport report;
  SolverBudget budget{config.budget_states, std::nullopt};

  for (std::size_t m : config.m_values) {
    auto started = std::chrono::steady_clock::now();
    ExperimentRow row;
    row.n = config.n;
    row.m = m;
    row.trials = config.trials;
    row.share_method = config.share_method == ShareMethod::exact
                           ? "exact"
                           : "heuristic(" + std::to_string(config.heuristic_iterations) + ")";

    for (std::size_t t = 0; t < config.trials; ++t) {
      TrialRecord rec;
      rec.m = m;
      rec.trial = t;
      std::uint64_t base = derive_substream(config.seed, kTrialTag ^ m, t);
      try {
        auto entitlements = random_entitlements(config.n, derive_substream(base, 1));
        Instance inst = source.make(config.n, m, derive_substream(base, 2))
                            .with_entitlements(std::move(entitlements));

        ShareVector shares =
            config.share_method == ShareMethod::exact
                ? exact_shares(inst, budget)
                : heuristic_shares(inst, config.heuristic_iterations, derive_substream(base, 3));

        std::optional<Rat> ratio;
        if (config.mode == RatioMode::existence_search) {
          if (exact_search_within_budget(config.n, m, config.budget_states)) {
            ratio = best_achievable_min_ratio(inst, shares, budget).ratio;
          } else {
            ratio = portfolio_ratio(inst, shares);
            rec.ratio_is_lower_bound = true;
          }
        } else {
          Allocation alloc = run_named_algorithm(config.algorithm, inst, shares);
          ratio = allocation_min_ratio(inst, alloc, shares);
        }

        if (ratio) {
          rec.status = TrialStatus::ok;
          rec.min_ratio = std::move(ratio);
        } else {
          rec.status = TrialStatus::infinite_ratio;
        }
      } catch (const BudgetExhaustedError& e) {
        rec.status = TrialStatus::budget_exhausted;
        rec.note = e.what();
      } catch (const ValidationError& e) {
        rec.status = TrialStatus::failed;
        rec.note = e.what();
      }

      switch (rec.status) {
        case TrialStatus::ok:
          if (!row.min_ratio || *rec.min_ratio < *row.min_ratio)
            row.min_ratio = rec.min_ratio;
          if (rec.ratio_is_lower_bound) row.lower_bound_only = true;
          break;
        case TrialStatus::infinite_ratio:
          ++row.infinite_trials;
          break;
        default:
          ++row.failed_trials;
          break;
      }
      if (config.record_details) report.details.push_back(std::move(rec));
    }

    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - started)
                      .count();
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const BidPool& pool) {
  ValueSource source;
  source.pool = &pool;
  return run_experiment_impl(config, source);
}

ExperimentReport run_experiment(const ExperimentConfig& config, const GeneratorSpec& family) {
  ValueSource source;
  source.family = &family;
  return run_experiment_impl(config, source);
}

void write_report_csv(const ExperimentReport& report, std::ostream& out,
                      bool include_wall_times) {
  out << "n,m,min_ratio,trials,share_method,wall_ms\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << row.m << ',';
    if (row.min_ratio)
      out << to_decimal_string(*row.min_ratio);
    else
      out << (row.infinite_trials > 0 ? "inf" : "nan");
    out << ',' << row.trials << ',' << row.share_method << ','
        << (include_wall_times ? row.wall_ms : 0) << '\n';
  }
}

StochasticVerification verify_stochastic_model(StochasticModel model, std::size_t n,
                                               std::size_t m, const Rat& epsilon,
                                               std::size_t trials, std::uint64_t seed,
                                               const std::vector<Distribution>* distributions) {
  if (n == 0 || m == 0) throw ValidationError("verification needs agents and items");
  if (trials == 0) throw ValidationError("verification needs at least one trial");
  if (epsilon <= 0 || epsilon >= 1)
    throw ValidationError("epsilon must lie strictly between 0 and 1");

  // Fixed unequal entitlement profile: e_i proportional to n + i.
  std::vector<Rat> entitlements;
  entitlements.reserve(n);
  for (std::size_t i = 1; i <= n; ++i)
    entitlements.push_back(Rat(static_cast<long>(n + i)));

  std::vector<Distribution> dists;
  if (distributions) {
    dists = *distributions;
  } else if (model == StochasticModel::agents) {
    dists.assign(n, Uniform{Rat(0), Rat(1)});
  } else {
    dists.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
      SplitMix64 rng(derive_substream(seed, kModelItemTag, j));
      Rat mean = make_rat(1, 5) + make_rat(3, 5) * rng.next_unit_rational();
      Rat room = mean <= 1 - mean ? mean : 1 - mean;
      Rat half = room * rng.next_unit_rational();
      dists.push_back(Uniform{mean - half, mean + half});
    }
  }

  StochasticVerification result;
  result.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    std::uint64_t sub = derive_substream(seed, kTrialTag, t);
    Instance inst = (model == StochasticModel::agents
                         ? stochastic_agents(n, m, dists, sub)
                         : stochastic_items(n, m, dists, sub))
                        .with_entitlements(entitlements);

    bool success = true;
    try {
      Allocation witness = model == StochasticModel::agents
                               ? proportional_count_allocation(inst)
                               : round_assignment(inst, build_and_solve_lp(inst));
      for (std::size_t i = 0; i < n && success; ++i) {
        Rat target = (1 - epsilon) * inst.entitlement(i) * inst.total_value(i);
        if (bundle_value(inst, i, witness, i) < target) success = false;
      }
    } catch (const ValidationError&) {
      success = false;  // degenerate draw (e.g. an all-zero row)
    }
    if (success) ++result.successes;
  }

  result.success_rate =
      Rat(static_cast<long>(result.successes)) / Rat(static_cast<long>(result.trials));

  // 95% Wilson interval.
  double p = static_cast<double>(result.successes) / static_cast<double>(result.trials);
  double z = 1.959963984540054;
  double nn = static_cast<double>(result.trials);
  double denom = 1.0 + z * z / nn;
  double center = (p + z * z / (2 * nn)) / denom;
  double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
  result.ci_low = std::max(0.0, center - half);
  result.ci_high = std::min(1.0, center + half);
  return result;
}

}  // namespace wmms
