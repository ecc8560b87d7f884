#include "wmms/json_io.hpp"

using nlohmann::json;

namespace wmms {

Rat rat_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Rat(static_cast<unsigned long>(j.get<std::uint64_t>()));
  if (j.is_number_float())
    throw ValidationError(
        "binary floats are not accepted; encode numerics as strings (\"p/q\" or decimal)");
  throw ValidationError("expected a numeric field");
}

json rat_to_json(const Rat& q) { return to_fraction_string(q); }

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("instance JSON must be an object");
  for (const char* key : {"n", "m", "entitlements", "valuations"})
    if (!j.contains(key))
      throw ValidationError(std::string("instance JSON is missing '") + key + "'");

  std::size_t n = j.at("n").get<std::size_t>();
  std::size_t m = j.at("m").get<std::size_t>();
  const json& ents = j.at("entitlements");
  const json& vals = j.at("valuations");
  if (!ents.is_array() || ents.size() != n)
    throw ValidationError("'entitlements' must be an array of length n");
  if (!vals.is_array() || vals.size() != n)
    throw ValidationError("'valuations' must have one row per agent");

  std::vector<Rat> entitlements;
  entitlements.reserve(n);
  for (const auto& e : ents) entitlements.push_back(rat_from_json(e));

  std::vector<std::vector<Rat>> valuations(n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = vals.at(i);
    if (!row.is_array() || row.size() != m)
      throw ValidationError("valuation row " + std::to_string(i + 1) +
                            " must have m entries");
    valuations[i].reserve(m);
    for (const auto& v : row) valuations[i].push_back(rat_from_json(v));
  }
  return Instance::create(std::move(valuations), std::move(entitlements));
}

json instance_to_json(const Instance& instance) {
  json j;
  j["n"] = instance.agent_count();
  j["m"] = instance.item_count();
  json ents = json::array();
  for (std::size_t i = 0; i < instance.agent_count(); ++i)
    ents.push_back(rat_to_json(instance.entitlement(i)));
  j["entitlements"] = std::move(ents);
  json rows = json::array();
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < instance.item_count(); ++k)
      row.push_back(rat_to_json(instance.value(i, k)));
    rows.push_back(std::move(row));
  }
  j["valuations"] = std::move(rows);
  return j;
}

Allocation allocation_from_json(const json& j, std::size_t agent_count,
                                std::size_t item_count) {
  if (!j.is_array() || j.size() != agent_count)
    throw ValidationError("allocation JSON must be one array of item indices per agent");
  std::vector<std::vector<std::size_t>> bundles(agent_count);
  for (std::size_t i = 0; i < agent_count; ++i) {
    for (const auto& idx : j.at(i)) {
      std::size_t one_based = idx.get<std::size_t>();
      if (one_based == 0) throw ValidationError("item indices are 1-based");
      bundles[i].push_back(one_based - 1);
    }
  }
  return Allocation::of(agent_count, item_count, std::move(bundles));
}

json allocation_to_json(const Allocation& allocation) {
  json j = json::array();
  for (std::size_t i = 0; i < allocation.agent_count(); ++i) {
    json bundle = json::array();
    for (std::size_t item : allocation.bundle(i)) bundle.push_back(item + 1);
    j.push_back(std::move(bundle));
  }
  return j;
}

ShareVector shares_from_json(const json& j, std::size_t agent_count,
                             std::size_t item_count) {
  if (!j.is_object() || !j.contains("values"))
    throw ValidationError("shares JSON must be an object with a 'values' array");
  const json& values = j.at("values");
  if (!values.is_array() || values.size() != agent_count)
    throw ValidationError("shares 'values' must have one entry per agent");

  ShareVector shares;
  for (const auto& v : values) shares.values.push_back(rat_from_json(v));
  std::string method = j.value("method", std::string("exact"));
  if (method == "exact")
    shares.method = ShareMethod::exact;
  else if (method == "heuristic-lower-bound")
    shares.method = ShareMethod::heuristic_lower_bound;
  else
    throw ValidationError("unknown share method '" + method + "'");
  if (j.contains("witnesses")) {
    for (const auto& w : j.at("witnesses")) {
      if (w.is_null())
        shares.witnesses.emplace_back(std::nullopt);
      else
        shares.witnesses.emplace_back(allocation_from_json(w, agent_count, item_count));
    }
  }
  return shares;
}

json shares_to_json(const ShareVector& shares) {
  json j;
  json values = json::array();
  for (const auto& v : shares.values) values.push_back(rat_to_json(v));
  j["values"] = std::move(values);
  j["method"] =
      shares.method == ShareMethod::exact ? "exact" : "heuristic-lower-bound";
  if (!shares.witnesses.empty()) {
    json witnesses = json::array();
    for (const auto& w : shares.witnesses)
      witnesses.push_back(w ? allocation_to_json(*w) : json());
    j["witnesses"] = std::move(witnesses);
  }
  return j;
}

json guarantee_report_to_json(const GuaranteeReport& report) {
  json j;
  json agents = json::array();
  for (const auto& g : report.per_agent) {
    json a;
    a["received"] = rat_to_json(g.received);
    a["share"] = rat_to_json(g.share);
    a["ratio"] = g.ratio ? json(to_fraction_string(*g.ratio)) : json("inf");
    agents.push_back(std::move(a));
  }
  j["per_agent"] = std::move(agents);
  j["min_ratio"] = report.min_ratio ? json(to_fraction_string(*report.min_ratio)) : json("inf");
  return j;
}

json experiment_report_to_json(const ExperimentReport& report, bool include_wall_times) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["n"] = row.n;
    r["m"] = row.m;
    r["trials"] = row.trials;
    r["share_method"] = row.share_method;
    if (row.min_ratio) {
      r["min_ratio"] = to_decimal_string(*row.min_ratio);
      r["min_ratio_exact"] = to_fraction_string(*row.min_ratio);
    } else {
      r["min_ratio"] = row.infinite_trials > 0 ? "inf" : "nan";
    }
    r["infinite_trials"] = row.infinite_trials;
    r["failed_trials"] = row.failed_trials;
    r["lower_bound_only"] = row.lower_bound_only;
    r["wall_ms"] = include_wall_times ? row.wall_ms : 0;
    rows.push_back(std::move(r));
  }
  json details = json::array();
  for (const auto& d : report.details) {
    json t;
    t["m"] = d.m;
    t["trial"] = d.trial;
    switch (d.status) {
      case TrialStatus::ok:
        t["status"] = "ok";
        break;
      case TrialStatus::infinite_ratio:
        t["status"] = "infinite";
        break;
      case TrialStatus::budget_exhausted:
        t["status"] = "budget-exhausted";
        break;
      case TrialStatus::failed:
        t["status"] = "failed";
        break;
    }
    if (d.min_ratio) t["min_ratio"] = to_fraction_string(*d.min_ratio);
    if (d.ratio_is_lower_bound) t["lower_bound"] = true;
    if (!d.note.empty()) t["note"] = d.note;
    details.push_back(std::move(t));
  }
  return json{{"rows", std::move(rows)}, {"details", std::move(details)}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig config;
  if (!j.is_object()) throw ValidationError("experiment config must be a JSON object");
  config.n = j.at("n").get<std::size_t>();
  const json& ms = j.at("m_values");
  if (ms.is_array()) {
    for (const auto& m : ms) config.m_values.push_back(m.get<std::size_t>());
  } else if (ms.is_object()) {
    std::size_t from = ms.at("from").get<std::size_t>();
    std::size_t to = ms.at("to").get<std::size_t>();
    for (std::size_t m = from; m <= to; ++m) config.m_values.push_back(m);
  } else {
    throw ValidationError("'m_values' must be an array or {from, to}");
  }
  if (config.m_values.empty()) throw ValidationError("'m_values' must be non-empty");
  config.trials = j.value("trials", std::size_t{1});
  if (config.trials == 0) throw ValidationError("'trials' must be at least 1");
  config.seed = j.value("seed", std::uint64_t{0});
  std::string method = j.value("share_method", std::string("exact"));
  if (method == "exact")
    config.share_method = ShareMethod::exact;
  else if (method == "heuristic")
    config.share_method = ShareMethod::heuristic_lower_bound;
  else
    throw ValidationError("share_method must be 'exact' or 'heuristic'");
  config.heuristic_iterations = j.value("heuristic_iterations", 4u);
  std::string mode = j.value("mode", std::string("existence"));
  if (mode == "existence") {
    config.mode = RatioMode::existence_search;
  } else if (mode == "algorithm") {
    config.mode = RatioMode::algorithm;
    config.algorithm = j.value("algorithm", std::string("roundrobin"));
  } else {
    throw ValidationError("mode must be 'existence' or 'algorithm'");
  }
  config.budget_states = j.value("budget_states", config.budget_states);
  config.record_details = j.value("record_details", true);
  return config;
}

}  // namespace wmms
