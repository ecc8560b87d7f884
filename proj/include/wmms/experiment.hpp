#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wmms/bids.hpp"
#include "wmms/generators.hpp"
#include "wmms/solver.hpp"

namespace wmms {

enum class RatioMode { existence_search, algorithm };

// One Monte Carlo campaign: for every m in m_values run `trials` trials, each
// with a fresh random entitlement vector and fresh instance values, compute
// shares (exact or heuristic), then either search for the best achievable
// min ratio or run a fixed algorithm, and keep the minimum over trials.
struct ExperimentConfig {
  std::size_t n = 2;
  std::vector<std::size_t> m_values;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  ShareMethod share_method = ShareMethod::exact;
  std::uint32_t heuristic_iterations = 4;
  RatioMode mode = RatioMode::existence_search;
  std::string algorithm = "roundrobin";  // used when mode == algorithm
  std::uint64_t budget_states = 2'000'000;
  bool record_details = true;
};

enum class TrialStatus { ok, infinite_ratio, budget_exhausted, failed };

struct TrialRecord {
  std::size_t m = 0;
  std::size_t trial = 0;
  TrialStatus status = TrialStatus::ok;
  std::optional<Rat> min_ratio;  // present iff status == ok
  bool ratio_is_lower_bound = false;
  std::string note;
};

struct ExperimentRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  std::string share_method;       // "exact" or "heuristic(K)"
  std::optional<Rat> min_ratio;   // min over finite trial ratios
  std::size_t infinite_trials = 0;
  std::size_t failed_trials = 0;
  bool lower_bound_only = false;  // some trial ratio came from the portfolio
  std::int64_t wall_ms = 0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<TrialRecord> details;
};

ExperimentReport run_experiment(const ExperimentConfig& config, const BidPool& pool);
ExperimentReport run_experiment(const ExperimentConfig& config, const GeneratorSpec& family);

// CSV columns: n,m,min_ratio,trials,share_method,wall_ms. Wall times are
// zeroed unless requested, keeping fixed-seed outputs byte-identical.
void write_report_csv(const ExperimentReport& report, std::ostream& out,
                      bool include_wall_times = false);

enum class StochasticModel { agents, items };  // per-agent / per-item value draws

struct StochasticVerification {
  std::size_t trials = 0;
  std::size_t successes = 0;
  Rat success_rate;
  double ci_low = 0.0;  // 95% Wilson interval for the success probability
  double ci_high = 0.0;
};

// Monte Carlo check that the designated witness allocation gives every agent
// at least (1 - epsilon) of their proportional value e_i * V_i(M) — a
// sufficient condition for a (1-epsilon)-approximate share since no share
// exceeds the proportional value. Model `agents` draws every agent's values
// from uniform(0,1) and uses the count-proportional witness; model `items`
// draws per-item uniform distributions (means in [0.2, 0.8], seeded) and uses
// the rounded fractional-assignment witness. Entitlements are the fixed
// unequal profile e_i proportional to n + i. `distributions` overrides the
// default value distributions (one per agent for model `agents`, one per item
// for model `items`).
StochasticVerification verify_stochastic_model(
    StochasticModel model, std::size_t n, std::size_t m, const Rat& epsilon,
    std::size_t trials, std::uint64_t seed,
    const std::vector<Distribution>* distributions = nullptr);

}  // namespace wmms
