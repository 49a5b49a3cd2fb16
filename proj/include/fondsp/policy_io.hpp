#pragma once

#include "fondsp/grounder.hpp"
#include "fondsp/policy.hpp"
#include "fondsp/safe_planner.hpp"

#include "json.hpp"
#include <string>

namespace fondsp {

// {"policy": [{"state": [atoms], "action": "(a ...)" | null, "successors": [i...]}]}
// Entries are the states reachable from the initial state (index 0);
// unmapped states carry a null action.
nlohmann::json policy_to_json(const Policy &policy, const GroundTask &task);

// Reads entries with a non-null action. Throws std::runtime_error on unknown
// atoms or actions.
Policy policy_from_json(const nlohmann::json &doc, const GroundTask &task);

// Policy graph: one node per reachable state, goal states double-circled.
std::string policy_to_dot(const Policy &policy, const GroundTask &task);

nlohmann::json trace_to_json(const SolveTrace &trace);

}  // namespace fondsp
