#pragma once

#include <json.hpp>

#include "wmms/experiment.hpp"
#include "wmms/instance.hpp"
#include "wmms/solver.hpp"

namespace wmms {

// Wire formats. Numerics are exact: JSON strings "p/q" or decimal strings,
// plus plain JSON integers. Binary floats are rejected so no precision is
// lost on the way in. Item indices are 1-based on the wire.

// {"n": 2, "m": 5, "entitlements": [...], "valuations": [[...], ...]}
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& instance);

// [[1,2],[3,4,5]] — one array of item indices per agent.
Allocation allocation_from_json(const nlohmann::json& j, std::size_t agent_count,
                                std::size_t item_count);
nlohmann::json allocation_to_json(const Allocation& allocation);

// {"values": [...], "method": "exact"|"heuristic-lower-bound",
//  "witnesses": [...] (optional)}
ShareVector shares_from_json(const nlohmann::json& j, std::size_t agent_count,
                             std::size_t item_count);
nlohmann::json shares_to_json(const ShareVector& shares);

nlohmann::json guarantee_report_to_json(const GuaranteeReport& report);

nlohmann::json experiment_report_to_json(const ExperimentReport& report,
                                         bool include_wall_times = false);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

// Helpers shared by the converters and the CLI.
Rat rat_from_json(const nlohmann::json& j);
nlohmann::json rat_to_json(const Rat& q);  // canonical "p/q" / integer string

}  // namespace wmms
