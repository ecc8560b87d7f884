#include "wmms/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>

#include "wmms/rng.hpp"

namespace wmms {

namespace {

using Clock = std::chrono::steady_clock;

// Signals thrown inside a search and converted to BudgetExhaustedError by the
// wrapper that knows how to rescale the best value found.
struct SearchBudgetExceeded {
  std::uint64_t states;
};

// Exact comparison of a1/b1 vs a2/b2 with positive denominators.
inline int frac_cmp(long long a1, long long b1, long long a2, long long b2) {
  __int128 lhs = static_cast<__int128>(a1) * b2;
  __int128 rhs = static_cast<__int128>(a2) * b1;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

inline int frac_cmp(const mpz_class& a1, const mpz_class& b1, const mpz_class& a2,
                    const mpz_class& b2) {
  mpz_class lhs = a1 * b2;
  mpz_class rhs = a2 * b1;
  return cmp(lhs, rhs);
}

// An agent's solve problem rescaled to integers: item values multiplied by the
// common denominator of the valuation row, entitlements by theirs. The
// objective e_i * min_j V_i(A_j)/e_j becomes objective_factor * min_j S_j/w_j
// with integer bundle sums S and integer weights w. Items worth zero to the
// agent are dropped up front (they change no bundle value).
struct ScaledProblem {
  bool fits64 = false;
  std::vector<long long> values64;
  std::vector<long long> weights64;
  std::vector<mpz_class> values_big;
  std::vector<mpz_class> weights_big;
  std::vector<std::size_t> item_of;  // search position -> original item index
  Rat objective_factor;              // e_i * D / scale
  std::size_t bundle_count = 0;
};

ScaledProblem scale_problem(const Instance& instance, std::size_t agent,
                            bool order_descending) {
  const std::size_t n = instance.agent_count();
  const std::size_t m = instance.item_count();

  mpz_class scale(1);
  for (std::size_t j = 0; j < m; ++j)
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(),
            instance.value(agent, j).get_den().get_mpz_t());
  mpz_class ent_den(1);
  for (std::size_t i = 0; i < n; ++i)
    mpz_lcm(ent_den.get_mpz_t(), ent_den.get_mpz_t(),
            instance.entitlement(i).get_den().get_mpz_t());

  ScaledProblem p;
  p.bundle_count = n;
  p.objective_factor = instance.entitlement(agent) * Rat(ent_den) / Rat(scale);

  std::vector<std::size_t> positive_items;
  for (std::size_t j = 0; j < m; ++j)
    if (instance.value(agent, j) > 0) positive_items.push_back(j);

  std::vector<mpz_class> vals;
  vals.reserve(positive_items.size());
  mpz_class total(0);
  for (std::size_t j : positive_items) {
    const Rat& v = instance.value(agent, j);
    mpz_class scaled = v.get_num() * (scale / v.get_den());
    total += scaled;
    vals.push_back(std::move(scaled));
  }
  std::vector<mpz_class> weights;
  weights.reserve(n);
  mpz_class max_weight(0);
  for (std::size_t i = 0; i < n; ++i) {
    const Rat& e = instance.entitlement(i);
    mpz_class w = e.get_num() * (ent_den / e.get_den());
    if (w > max_weight) max_weight = w;
    weights.push_back(std::move(w));
  }

  if (order_descending) {
    std::vector<std::size_t> order(positive_items.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return vals[a] > vals[b];
    });
    std::vector<mpz_class> sorted;
    sorted.reserve(order.size());
    for (std::size_t k : order) {
      sorted.push_back(vals[k]);
      p.item_of.push_back(positive_items[k]);
    }
    vals = std::move(sorted);
  } else {
    p.item_of = positive_items;
  }

  // Bundle sums never exceed the row total, and bound computations add at
  // most one more row total, so half the int64 range is safe headroom.
  const mpz_class limit(static_cast<long>(std::numeric_limits<long long>::max() / 2));
  p.fits64 = total <= limit && max_weight <= limit;
  if (p.fits64) {
    for (const auto& v : vals) p.values64.push_back(v.get_si());
    for (const auto& w : weights) p.weights64.push_back(w.get_si());
  } else {
    p.values_big = std::move(vals);
    p.weights_big = std::move(weights);
  }
  return p;
}

Rat frac_to_rat(long long num, long long den) {
  Rat q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  q.canonicalize();
  return q;
}
Rat frac_to_rat(const mpz_class& num, const mpz_class& den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Branch and bound over item-to-bundle assignments, items in descending value
// order. A node's optimistic bound gives every bundle all still-unassigned
// value; the node is cut when that cannot strictly beat the incumbent.
template <typename Num>
struct WmmsSearch {
  const std::vector<Num>& values;
  const std::vector<Num>& weights;
  std::vector<Num> suffix;
  std::vector<Num> sums;
  std::vector<int> assign;
  std::vector<int> best_assign;
  Num best_num{};
  Num best_den{};
  bool has_best = false;
  std::uint64_t states = 0;
  std::uint64_t max_states;
  std::optional<Clock::time_point> deadline;

  WmmsSearch(const std::vector<Num>& vals, const std::vector<Num>& ws,
             const SolverBudget& budget)
      : values(vals), weights(ws), max_states(budget.max_states) {
    suffix.assign(values.size() + 1, Num(0));
    for (std::size_t k = values.size(); k-- > 0;) suffix[k] = suffix[k + 1] + values[k];
    sums.assign(weights.size(), Num(0));
    assign.assign(values.size(), -1);
    if (budget.time_limit) deadline = Clock::now() + *budget.time_limit;
  }

  void tick() {
    if (++states > max_states) throw SearchBudgetExceeded{states};
    if (deadline && (states & 0x1fff) == 0 && Clock::now() > *deadline)
      throw SearchBudgetExceeded{states};
  }

  void dfs(std::size_t depth) {
    tick();
    if (depth == values.size()) {
      std::size_t worst = 0;
      for (std::size_t j = 1; j < sums.size(); ++j)
        if (frac_cmp(sums[j], weights[j], sums[worst], weights[worst]) < 0) worst = j;
      if (!has_best || frac_cmp(sums[worst], weights[worst], best_num, best_den) > 0) {
        best_num = sums[worst];
        best_den = weights[worst];
        has_best = true;
        best_assign = assign;
      }
      return;
    }
    if (has_best) {
      std::size_t worst = 0;
      bool first = true;
      for (std::size_t j = 0; j < sums.size(); ++j) {
        Num reach = sums[j] + suffix[depth];
        if (first || frac_cmp(reach, weights[j], sums[worst] + suffix[depth],
                              weights[worst]) < 0) {
          worst = j;
          first = false;
        }
      }
      Num reach = sums[worst] + suffix[depth];
      if (frac_cmp(reach, weights[worst], best_num, best_den) <= 0) return;
    }
    for (std::size_t j = 0; j < sums.size(); ++j) {
      sums[j] += values[depth];
      assign[depth] = static_cast<int>(j);
      dfs(depth + 1);
      sums[j] -= values[depth];
    }
  }
};

Allocation assignment_to_allocation(const Instance& instance,
                                    const std::vector<int>& assign,
                                    const std::vector<std::size_t>& item_of) {
  std::vector<std::vector<std::size_t>> bundles(instance.agent_count());
  std::vector<bool> placed(instance.item_count(), false);
  for (std::size_t k = 0; k < assign.size(); ++k) {
    bundles[static_cast<std::size_t>(assign[k])].push_back(item_of[k]);
    placed[item_of[k]] = true;
  }
  // Items the searched agent values at zero go to the first bundle; they
  // change no bundle's value.
  for (std::size_t j = 0; j < instance.item_count(); ++j)
    if (!placed[j]) bundles[0].push_back(j);
  return Allocation::of(instance.agent_count(), instance.item_count(), std::move(bundles));
}

Allocation trivial_witness(const Instance& instance) {
  // Canonical partition used when every partition is optimal (share is zero).
  std::vector<std::vector<std::size_t>> bundles(instance.agent_count());
  for (std::size_t j = 0; j < instance.item_count(); ++j)
    bundles[j % instance.agent_count()].push_back(j);
  return Allocation::of(instance.agent_count(), instance.item_count(), std::move(bundles));
}

template <typename Num>
WmmsResult run_wmms_search(const Instance& instance, std::size_t agent,
                           const ScaledProblem& problem, const std::vector<Num>& values,
                           const std::vector<Num>& weights, const SolverBudget& budget) {
  WmmsSearch<Num> search(values, weights, budget);
  try {
    search.dfs(0);
  } catch (const SearchBudgetExceeded& e) {
    Rat best = search.has_best
                   ? Rat(problem.objective_factor * frac_to_rat(search.best_num, search.best_den))
                   : Rat(0);
    throw BudgetExhaustedError(
        "exact share search for agent " + std::to_string(agent + 1) +
            " exhausted its state budget; best feasible value found so far is " +
            to_fraction_string(best),
        best, e.states);
  }
  return WmmsResult{
      problem.objective_factor * frac_to_rat(search.best_num, search.best_den),
      assignment_to_allocation(instance, search.best_assign, problem.item_of),
      search.states};
}

}  // namespace

WmmsResult wmms_exact(const Instance& instance, std::size_t agent,
                      const SolverBudget& budget) {
  if (agent >= instance.agent_count()) throw ValidationError("agent index out of range");
  if (budget.max_states == 0) throw ValidationError("budget must allow at least one state");

  ScaledProblem problem = scale_problem(instance, agent, /*order_descending=*/true);
  const std::size_t positive = problem.item_of.size();

  // Fewer positively valued items than bundles leaves some bundle worthless,
  // so the share is zero no matter the partition.
  if (positive < instance.agent_count())
    return WmmsResult{Rat(0), trivial_witness(instance), 0};

  if (problem.fits64)
    return run_wmms_search<long long>(instance, agent, problem, problem.values64,
                                      problem.weights64, budget);
  return run_wmms_search<mpz_class>(instance, agent, problem, problem.values_big,
                                    problem.weights_big, budget);
}

Rat mms_exact(const Instance& instance, std::size_t agent, const SolverBudget& budget) {
  for (std::size_t i = 1; i < instance.agent_count(); ++i)
    if (instance.entitlement(i) != instance.entitlement(0))
      throw ValidationError("maxmin share requires equal entitlements");
  return wmms_exact(instance, agent, budget).value;
}

namespace {

// One hill-climbing pass over single-item relocations and cross-bundle swaps,
// best improvement first. Candidate objectives are evaluated in O(1) exact
// comparisons by tracking the three lowest bundle ratios.
template <typename Num>
struct LocalSearch {
  const std::vector<Num>& values;
  const std::vector<Num>& weights;
  std::vector<Num> sums;
  std::vector<int> assign;

  LocalSearch(const std::vector<Num>& vals, const std::vector<Num>& ws)
      : values(vals), weights(ws), sums(ws.size(), Num(0)), assign(vals.size(), 0) {}

  void load(const std::vector<int>& a) {
    assign = a;
    std::fill(sums.begin(), sums.end(), Num(0));
    for (std::size_t k = 0; k < assign.size(); ++k)
      sums[static_cast<std::size_t>(assign[k])] += values[k];
  }

  // Indices of the three lowest sums[j]/weights[j], ascending.
  std::array<int, 3> lowest_three() const {
    std::array<int, 3> low{-1, -1, -1};
    for (std::size_t j = 0; j < sums.size(); ++j) {
      int idx = static_cast<int>(j);
      for (int slot = 0; slot < 3; ++slot) {
        if (low[slot] < 0) {
          low[slot] = idx;
          break;
        }
        std::size_t cur = static_cast<std::size_t>(low[slot]);
        if (frac_cmp(sums[static_cast<std::size_t>(idx)], weights[static_cast<std::size_t>(idx)],
                     sums[cur], weights[cur]) < 0) {
          std::swap(low[slot], idx);
        }
      }
    }
    return low;
  }

  void climb(std::size_t max_steps) {
    if (values.empty() || weights.size() < 2) return;
    for (std::size_t step = 0; step < max_steps; ++step) {
      auto low = lowest_three();
      std::size_t cur = static_cast<std::size_t>(low[0]);
      Num cur_num = sums[cur];
      Num cur_den = weights[cur];

      bool found = false;
      Num cand_num{}, cand_den{};
      std::size_t move_item = 0, move_partner = 0, move_to = 0;
      bool move_is_swap = false;

      auto floor_outside = [&](std::size_t a, std::size_t b, Num& num, Num& den) -> bool {
        for (int slot = 0; slot < 3; ++slot) {
          if (low[slot] < 0) return false;
          std::size_t j = static_cast<std::size_t>(low[slot]);
          if (j != a && j != b) {
            num = sums[j];
            den = weights[j];
            return true;
          }
        }
        return false;
      };

      auto consider = [&](std::size_t a, Num new_a, std::size_t b, Num new_b,
                          std::size_t item, std::size_t partner, std::size_t to,
                          bool is_swap) {
        Num num = new_a, den = weights[a];
        if (frac_cmp(new_b, weights[b], num, den) < 0) {
          num = new_b;
          den = weights[b];
        }
        Num out_num{}, out_den{};
        if (floor_outside(a, b, out_num, out_den) && frac_cmp(out_num, out_den, num, den) < 0) {
          num = out_num;
          den = out_den;
        }
        if (frac_cmp(num, den, cur_num, cur_den) <= 0) return;
        if (found && frac_cmp(num, den, cand_num, cand_den) <= 0) return;
        found = true;
        cand_num = num;
        cand_den = den;
        move_item = item;
        move_partner = partner;
        move_to = to;
        move_is_swap = is_swap;
      };

      for (std::size_t k = 0; k < values.size(); ++k) {
        std::size_t a = static_cast<std::size_t>(assign[k]);
        for (std::size_t b = 0; b < weights.size(); ++b) {
          if (b == a) continue;
          consider(a, sums[a] - values[k], b, sums[b] + values[k], k, 0, b, false);
        }
      }
      for (std::size_t k = 0; k < values.size(); ++k) {
        std::size_t a = static_cast<std::size_t>(assign[k]);
        for (std::size_t l = k + 1; l < values.size(); ++l) {
          std::size_t b = static_cast<std::size_t>(assign[l]);
          if (a == b) continue;
          consider(a, sums[a] - values[k] + values[l], b, sums[b] + values[k] - values[l],
                   k, l, b, true);
        }
      }

      if (!found) return;
      if (move_is_swap) {
        std::size_t a = static_cast<std::size_t>(assign[move_item]);
        std::size_t b = static_cast<std::size_t>(assign[move_partner]);
        sums[a] += values[move_partner] - values[move_item];
        sums[b] += values[move_item] - values[move_partner];
        std::swap(assign[move_item], assign[move_partner]);
      } else {
        std::size_t a = static_cast<std::size_t>(assign[move_item]);
        sums[a] -= values[move_item];
        sums[move_to] += values[move_item];
        assign[move_item] = static_cast<int>(move_to);
      }
    }
  }

  std::pair<Num, Num> objective() const {
    std::size_t worst = 0;
    for (std::size_t j = 1; j < sums.size(); ++j)
      if (frac_cmp(sums[j], weights[j], sums[worst], weights[worst]) < 0) worst = j;
    return {sums[worst], weights[worst]};
  }
};

template <typename Num>
std::pair<Rat, std::vector<int>> run_heuristic(const Instance& instance, std::size_t agent,
                                               const ScaledProblem& problem,
                                               const std::vector<Num>& values,
                                               const std::vector<Num>& weights,
                                               std::uint32_t iterations, std::uint64_t seed) {
  const std::size_t n = instance.agent_count();
  LocalSearch<Num> search(values, weights);
  std::vector<int> start(values.size(), 0);

  bool has_best = false;
  Num best_num{}, best_den{};
  std::vector<int> best_assign;

  const std::size_t step_cap = 64 + 8 * values.size();
  std::vector<std::size_t> bundle_count(n);
  for (std::uint32_t r = 0; r < iterations; ++r) {
    SplitMix64 rng(derive_substream(seed, agent, r));
    std::fill(bundle_count.begin(), bundle_count.end(), 0);
    for (std::size_t k = 0; k < start.size(); ++k) {
      // Entitlement-proportional bundle draw.
      Rat u = rng.next_unit_rational();
      Rat acc(0);
      std::size_t pick = n - 1;
      for (std::size_t j = 0; j < n; ++j) {
        acc += instance.entitlement(j);
        if (u < acc) {
          pick = j;
          break;
        }
      }
      start[k] = static_cast<int>(pick);
      ++bundle_count[pick];
    }
    // Hill climbing cannot escape a start with two empty bundles (the
    // minimum stays pinned at zero), so spread items first.
    for (std::size_t b = 0; b < n; ++b) {
      if (bundle_count[b] > 0) continue;
      std::size_t donor = 0;
      for (std::size_t a = 1; a < n; ++a)
        if (bundle_count[a] > bundle_count[donor]) donor = a;
      for (std::size_t k = 0; k < start.size(); ++k)
        if (start[k] == static_cast<int>(donor)) {
          start[k] = static_cast<int>(b);
          --bundle_count[donor];
          ++bundle_count[b];
          break;
        }
    }
    search.load(start);
    search.climb(step_cap);
    auto [num, den] = search.objective();
    if (!has_best || frac_cmp(num, den, best_num, best_den) > 0) {
      has_best = true;
      best_num = num;
      best_den = den;
      best_assign = search.assign;
    }
  }
  return {problem.objective_factor * frac_to_rat(best_num, best_den), best_assign};
}

}  // namespace

Rat wmms_heuristic_lower_bound(const Instance& instance, std::size_t agent,
                               std::uint32_t iterations, std::uint64_t seed) {
  if (agent >= instance.agent_count()) throw ValidationError("agent index out of range");
  if (iterations == 0) throw ValidationError("heuristic iterations must be positive");

  ScaledProblem problem = scale_problem(instance, agent, /*order_descending=*/false);
  if (problem.item_of.size() < instance.agent_count()) return Rat(0);
  if (problem.fits64)
    return run_heuristic<long long>(instance, agent, problem, problem.values64,
                                    problem.weights64, iterations, seed)
        .first;
  return run_heuristic<mpz_class>(instance, agent, problem, problem.values_big,
                                  problem.weights_big, iterations, seed)
      .first;
}

namespace {

struct RatioSearch {
  const Instance& instance;
  const std::vector<Rat>& shares;
  std::vector<std::size_t> considered;  // agents with a positive share
  std::vector<std::size_t> items;       // items someone considered values > 0
  std::vector<std::vector<Rat>> suffix;  // per considered agent
  std::vector<Rat> sums;
  std::vector<int> assign;
  std::vector<int> best_assign;
  std::optional<Rat> best;
  std::uint64_t states = 0;
  std::uint64_t max_states;
  std::optional<Clock::time_point> deadline;

  RatioSearch(const Instance& inst, const std::vector<Rat>& sh, const SolverBudget& budget)
      : instance(inst), shares(sh), max_states(budget.max_states) {
    for (std::size_t i = 0; i < inst.agent_count(); ++i)
      if (shares[i] > 0) considered.push_back(i);
    for (std::size_t j = 0; j < inst.item_count(); ++j) {
      bool relevant = false;
      for (std::size_t i : considered)
        if (inst.value(i, j) > 0) {
          relevant = true;
          break;
        }
      if (relevant) items.push_back(j);
    }
    suffix.resize(considered.size());
    for (std::size_t a = 0; a < considered.size(); ++a) {
      suffix[a].assign(items.size() + 1, Rat(0));
      for (std::size_t k = items.size(); k-- > 0;)
        suffix[a][k] = suffix[a][k + 1] + inst.value(considered[a], items[k]);
    }
    sums.assign(inst.agent_count(), Rat(0));
    assign.assign(items.size(), -1);
    if (budget.time_limit) deadline = Clock::now() + *budget.time_limit;
  }

  void tick() {
    if (++states > max_states) throw SearchBudgetExceeded{states};
    if (deadline && (states & 0x1fff) == 0 && Clock::now() > *deadline)
      throw SearchBudgetExceeded{states};
  }

  void dfs(std::size_t depth) {
    tick();
    if (depth == items.size()) {
      std::optional<Rat> ratio;
      for (std::size_t a = 0; a < considered.size(); ++a) {
        Rat r = sums[considered[a]] / shares[considered[a]];
        if (!ratio || r < *ratio) ratio = std::move(r);
      }
      if (!best || *ratio > *best) {
        best = ratio;
        best_assign = assign;
      }
      return;
    }
    if (best) {
      std::optional<Rat> bound;
      for (std::size_t a = 0; a < considered.size(); ++a) {
        Rat r = (sums[considered[a]] + suffix[a][depth]) / shares[considered[a]];
        if (!bound || r < *bound) bound = std::move(r);
      }
      if (*bound <= *best) return;
    }
    for (std::size_t i = 0; i < instance.agent_count(); ++i) {
      sums[i] += instance.value(i, items[depth]);
      assign[depth] = static_cast<int>(i);
      dfs(depth + 1);
      sums[i] -= instance.value(i, items[depth]);
    }
  }

  Allocation to_allocation(const std::vector<int>& a) const {
    std::vector<std::vector<std::size_t>> bundles(instance.agent_count());
    std::vector<bool> placed(instance.item_count(), false);
    for (std::size_t k = 0; k < a.size(); ++k) {
      bundles[static_cast<std::size_t>(a[k])].push_back(items[k]);
      placed[items[k]] = true;
    }
    for (std::size_t j = 0; j < instance.item_count(); ++j)
      if (!placed[j]) bundles[0].push_back(j);
    return Allocation::of(instance.agent_count(), instance.item_count(), std::move(bundles));
  }
};

}  // namespace

RatioResult best_achievable_min_ratio(const Instance& instance, const ShareVector& shares,
                                      const SolverBudget& budget) {
  if (shares.values.size() != instance.agent_count())
    throw ValidationError("share vector length does not match agent count");
  for (const Rat& s : shares.values)
    if (s < 0) throw ValidationError("negative share value");

  RatioSearch search(instance, shares.values, budget);
  if (search.considered.empty()) {
    // Every share is zero: any complete allocation vacuously satisfies all
    // agents, so the achievable ratio is unbounded.
    std::vector<std::vector<std::size_t>> bundles(instance.agent_count());
    for (std::size_t j = 0; j < instance.item_count(); ++j) bundles[0].push_back(j);
    return RatioResult{std::nullopt,
                       Allocation::of(instance.agent_count(), instance.item_count(),
                                      std::move(bundles)),
                       0};
  }
  try {
    search.dfs(0);
  } catch (const SearchBudgetExceeded& e) {
    Rat best = search.best ? *search.best : Rat(0);
    throw BudgetExhaustedError(
        "allocation-ratio search exhausted its state budget; best min ratio found so far is " +
            to_fraction_string(best),
        best, e.states);
  }
  return RatioResult{*search.best, search.to_allocation(search.best_assign), search.states};
}

ShareVector exact_shares(const Instance& instance, const SolverBudget& budget) {
  ShareVector shares;
  shares.method = ShareMethod::exact;
  shares.values.reserve(instance.agent_count());
  shares.witnesses.reserve(instance.agent_count());
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    WmmsResult r = wmms_exact(instance, i, budget);
    shares.values.push_back(std::move(r.value));
    shares.witnesses.emplace_back(std::move(r.witness));
  }
  return shares;
}

ShareVector heuristic_shares(const Instance& instance, std::uint32_t iterations,
                             std::uint64_t seed) {
  ShareVector shares;
  shares.method = ShareMethod::heuristic_lower_bound;
  shares.values.reserve(instance.agent_count());
  for (std::size_t i = 0; i < instance.agent_count(); ++i)
    shares.values.push_back(wmms_heuristic_lower_bound(instance, i, iterations, seed));
  return shares;
}

}  // namespace wmms
