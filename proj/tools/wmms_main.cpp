// wmms — weighted maxmin share toolkit.
//
// Subcommands:
//   solve             exact or heuristic share values for an instance
//   allocate          run an allocation algorithm and report guarantees
//   gen               write instances from the built-in families
//   experiment        Monte Carlo min-guarantee campaign (CSV/JSON output)
//   verify-stochastic Monte Carlo check of the stochastic-model witnesses
//
// Exit codes: 0 success, 2 validation error, 3 solver budget exhausted.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "wmms/algorithms.hpp"
#include "wmms/bids.hpp"
#include "wmms/experiment.hpp"
#include "wmms/generators.hpp"
#include "wmms/json_io.hpp"
#include "wmms/lp.hpp"
#include "wmms/solver.hpp"

using nlohmann::json;

namespace {

wmms::Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wmms::ValidationError("cannot open instance file '" + path + "'");
  json j;
  in >> j;
  return wmms::instance_from_json(j);
}

void write_output(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw wmms::ValidationError("cannot write to '" + path + "'");
  out << j.dump(2) << "\n";
}

json solve_one(const wmms::Instance& instance, std::size_t agent,
               const wmms::SolverBudget& budget, std::optional<std::uint32_t> heuristic,
               std::uint64_t seed) {
  json out;
  out["agent"] = agent + 1;
  if (heuristic) {
    wmms::Rat value = wmms::wmms_heuristic_lower_bound(instance, agent, *heuristic, seed);
    out["value"] = wmms::rat_to_json(value);
    out["value_decimal"] = wmms::to_decimal_string(value);
    out["method"] = "heuristic-lower-bound";
    out["iterations"] = *heuristic;
    out["seed"] = seed;
  } else {
    wmms::WmmsResult result = wmms::wmms_exact(instance, agent, budget);
    out["value"] = wmms::rat_to_json(result.value);
    out["value_decimal"] = wmms::to_decimal_string(result.value);
    out["method"] = "exact";
    out["witness"] = wmms::allocation_to_json(result.witness);
    out["states_explored"] = result.states_explored;
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"weighted maxmin share toolkit"};
  app.require_subcommand(1);

  // --- solve ---------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "compute share values");
  std::string solve_instance_path;
  int solve_agent = 0;
  std::uint64_t solve_budget = wmms::SolverBudget{}.max_states;
  std::uint32_t solve_heuristic = 0;
  std::uint64_t solve_seed = 0;
  std::string solve_out;
  solve->add_option("--instance", solve_instance_path, "instance JSON file")->required();
  solve->add_option("--agent", solve_agent, "1-based agent index (default: all agents)");
  solve->add_option("--budget", solve_budget, "state budget for the exact search");
  solve->add_option("--heuristic", solve_heuristic,
                    "use the seeded local-search lower bound with this many restarts");
  solve->add_option("--seed", solve_seed, "seed for --heuristic");
  solve->add_option("-o,--output", solve_out, "output file (default: stdout)");

  // --- allocate ------------------------------------------------------------
  auto* allocate = app.add_subcommand("allocate", "run an allocation algorithm");
  std::string alloc_instance_path, alloc_alg, alloc_shares_path, alloc_out;
  bool alloc_exact = false, alloc_complete = false;
  std::uint64_t alloc_budget = wmms::SolverBudget{}.max_states;
  allocate->add_option("--instance", alloc_instance_path, "instance JSON file")->required();
  allocate->add_option("--alg", alloc_alg, "roundrobin | bagfill | restricted | lp")
      ->required();
  allocate->add_option("--shares", alloc_shares_path, "share vector JSON file");
  allocate->add_flag("--exact", alloc_exact, "compute exact shares for the report");
  allocate->add_flag("--complete", alloc_complete,
                     "hand out leftover items round-robin afterwards");
  allocate->add_option("--budget", alloc_budget, "state budget for exact shares");
  allocate->add_option("-o,--output", alloc_out, "output file (default: stdout)");

  // --- gen -----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string gen_family, gen_epsilon, gen_dist, gen_bids_path, gen_out;
  std::size_t gen_n = 2, gen_m = 2;
  std::uint64_t gen_seed = 0;
  gen->add_option("--family", gen_family,
                  "counterexample | example1 | stochastic-agents | stochastic-items | bids")
      ->required();
  gen->add_option("--n", gen_n, "agent count");
  gen->add_option("--m", gen_m, "item count");
  gen->add_option("--epsilon", gen_epsilon, "epsilon for the counterexample family");
  gen->add_option("--dist", gen_dist, "distribution, e.g. uniform:0,1 or point:1/2");
  gen->add_option("--bids", gen_bids_path, "bid CSV for the bids family");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("-o,--output", gen_out, "output file (default: stdout)");

  // --- experiment ----------------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "run a Monte Carlo campaign");
  std::string exp_config_path, exp_bids_path, exp_csv_out, exp_json_out;
  bool exp_timings = false;
  experiment->add_option("--config", exp_config_path, "experiment config JSON")->required();
  experiment->add_option("--bids", exp_bids_path, "bid CSV value source");
  experiment->add_option("-o,--output", exp_csv_out, "CSV output file (default: stdout)");
  experiment->add_option("--json", exp_json_out, "also write a JSON report here");
  experiment->add_flag("--timings", exp_timings, "include wall-clock times in outputs");

  // --- verify-stochastic ---------------------------------------------------
  auto* verify = app.add_subcommand("verify-stochastic",
                                    "Monte Carlo witness check for the stochastic models");
  std::string verify_model, verify_epsilon = "1/10", verify_out;
  std::size_t verify_n = 5, verify_m = 100, verify_trials = 20;
  std::uint64_t verify_seed = 0;
  verify->add_option("--model", verify_model, "I (stochastic agents) or II (stochastic items)")
      ->required();
  verify->add_option("--n", verify_n, "agent count");
  verify->add_option("--m", verify_m, "item count");
  verify->add_option("--epsilon", verify_epsilon, "tolerance");
  verify->add_option("--trials", verify_trials, "trial count");
  verify->add_option("--seed", verify_seed, "seed");
  verify->add_option("-o,--output", verify_out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) {
    wmms::Instance instance = load_instance(solve_instance_path);
    wmms::SolverBudget budget{solve_budget, std::nullopt};
    std::optional<std::uint32_t> heuristic;
    if (solve_heuristic > 0) heuristic = solve_heuristic;
    json out;
    if (solve_agent > 0) {
      out = solve_one(instance, static_cast<std::size_t>(solve_agent) - 1, budget,
                      heuristic, solve_seed);
    } else {
      out = json::array();
      for (std::size_t i = 0; i < instance.agent_count(); ++i)
        out.push_back(solve_one(instance, i, budget, heuristic, solve_seed));
    }
    write_output(out, solve_out);
    return 0;
  }

  if (allocate->parsed()) {
    wmms::Instance instance = load_instance(alloc_instance_path);
    std::optional<wmms::ShareVector> shares;
    if (!alloc_shares_path.empty()) {
      std::ifstream in(alloc_shares_path);
      if (!in)
        throw wmms::ValidationError("cannot open shares file '" + alloc_shares_path + "'");
      json j;
      in >> j;
      shares = wmms::shares_from_json(j, instance.agent_count(), instance.item_count());
    } else if (alloc_exact) {
      shares = wmms::exact_shares(instance, wmms::SolverBudget{alloc_budget, std::nullopt});
    }

    wmms::Allocation allocation = [&]() {
      if (alloc_alg == "roundrobin") return wmms::round_robin(instance);
      if (alloc_alg == "lp")
        return wmms::round_assignment(instance, wmms::build_and_solve_lp(instance));
      if (!shares)
        throw wmms::ValidationError("--alg " + alloc_alg +
                                    " needs shares (--exact or --shares FILE)");
      if (alloc_alg == "bagfill") {
        std::vector<wmms::Rat> thresholds;
        for (const auto& s : shares->values) thresholds.push_back(s / 2);
        return wmms::bag_filling(instance, thresholds);
      }
      if (alloc_alg == "restricted") return wmms::restricted_greedy(instance, *shares);
      throw wmms::ValidationError("unknown algorithm '" + alloc_alg + "'");
    }();

    if (alloc_complete && !allocation.complete())
      allocation = wmms::distribute_leftovers_round_robin(instance, allocation);

    json out;
    out["algorithm"] = alloc_alg;
    out["allocation"] = wmms::allocation_to_json(allocation);
    out["complete"] = allocation.complete();
    out["complete_fill"] = alloc_complete;
    if (shares) {
      out["shares"] = wmms::shares_to_json(*shares);
      out["report"] =
          wmms::guarantee_report_to_json(wmms::guarantee_report(instance, allocation,
                                                                shares->values));
    }
    if (alloc_alg == "lp") {
      json certs = json::array();
      for (const auto& c : wmms::rounding_certificates(instance, allocation)) {
        certs.push_back(json{{"proportional_share", wmms::rat_to_json(c.proportional_share)},
                             {"max_item", wmms::rat_to_json(c.max_item)},
                             {"received", wmms::rat_to_json(c.received)}});
      }
      out["certificates"] = std::move(certs);
    }
    write_output(out, alloc_out);
    return 0;
  }

  if (gen->parsed()) {
    wmms::Instance instance = [&]() {
      if (gen_family == "bids") {
        if (gen_bids_path.empty())
          throw wmms::ValidationError("bids family needs --bids FILE");
        return wmms::instance_from_bids(wmms::ingest_bids(gen_bids_path), gen_n, gen_m,
                                        gen_seed);
      }
      wmms::GeneratorSpec spec;
      spec.n = gen_n;
      spec.m = gen_m;
      spec.seed = gen_seed;
      if (!gen_dist.empty()) spec.distributions.push_back(wmms::parse_distribution(gen_dist));
      if (!gen_epsilon.empty()) spec.epsilon = wmms::parse_rational(gen_epsilon);
      if (gen_family == "counterexample")
        spec.family = wmms::GeneratorSpec::Family::counterexample;
      else if (gen_family == "example1")
        spec.family = wmms::GeneratorSpec::Family::example1;
      else if (gen_family == "stochastic-agents")
        spec.family = wmms::GeneratorSpec::Family::stochastic_agents;
      else if (gen_family == "stochastic-items")
        spec.family = wmms::GeneratorSpec::Family::stochastic_items;
      else
        throw wmms::ValidationError("unknown family '" + gen_family + "'");
      return wmms::make_instance(spec);
    }();
    write_output(wmms::instance_to_json(instance), gen_out);
    return 0;
  }

  if (experiment->parsed()) {
    std::ifstream in(exp_config_path);
    if (!in) throw wmms::ValidationError("cannot open config '" + exp_config_path + "'");
    json config_json;
    in >> config_json;
    wmms::ExperimentConfig config = wmms::experiment_config_from_json(config_json);

    wmms::ExperimentReport report;
    if (!exp_bids_path.empty()) {
      report = wmms::run_experiment(config, wmms::ingest_bids(exp_bids_path));
    } else if (config_json.contains("generator")) {
      const json& g = config_json.at("generator");
      wmms::GeneratorSpec spec;
      std::string family = g.value("family", std::string("stochastic-agents"));
      if (family == "stochastic-agents")
        spec.family = wmms::GeneratorSpec::Family::stochastic_agents;
      else if (family == "stochastic-items")
        spec.family = wmms::GeneratorSpec::Family::stochastic_items;
      else
        throw wmms::ValidationError("experiment generator family must be stochastic");
      if (g.contains("dist"))
        spec.distributions.push_back(wmms::parse_distribution(g.at("dist").get<std::string>()));
      report = wmms::run_experiment(config, spec);
    } else {
      throw wmms::ValidationError("experiment needs --bids FILE or a 'generator' config");
    }

    if (exp_csv_out.empty()) {
      wmms::write_report_csv(report, std::cout, exp_timings);
    } else {
      std::ofstream out(exp_csv_out);
      if (!out) throw wmms::ValidationError("cannot write to '" + exp_csv_out + "'");
      wmms::write_report_csv(report, out, exp_timings);
    }
    if (!exp_json_out.empty())
      write_output(wmms::experiment_report_to_json(report, exp_timings), exp_json_out);
    return 0;
  }

  if (verify->parsed()) {
    wmms::StochasticModel model;
    if (verify_model == "I" || verify_model == "agents")
      model = wmms::StochasticModel::agents;
    else if (verify_model == "II" || verify_model == "items")
      model = wmms::StochasticModel::items;
    else
      throw wmms::ValidationError("--model must be I or II");
    wmms::StochasticVerification result = wmms::verify_stochastic_model(
        model, verify_n, verify_m, wmms::parse_rational(verify_epsilon), verify_trials,
        verify_seed);
    json out;
    out["model"] = verify_model;
    out["n"] = verify_n;
    out["m"] = verify_m;
    out["epsilon"] = verify_epsilon;
    out["trials"] = result.trials;
    out["successes"] = result.successes;
    out["success_rate"] = wmms::to_decimal_string(result.success_rate, 4);
    out["success_rate_exact"] = wmms::rat_to_json(result.success_rate);
    char ci[64];
    std::snprintf(ci, sizeof(ci), "[%.4f, %.4f]", result.ci_low, result.ci_high);
    out["confidence_95"] = ci;
    write_output(out, verify_out);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const wmms::BudgetExhaustedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const wmms::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
