#pragma once

#include "fondsp/grounder.hpp"
#include "fondsp/policy.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fondsp {

enum class SolutionClass { not_a_solution, weak, strong_cyclic, strong_acyclic };

std::string_view to_string(SolutionClass c);

struct PolicyVerdict {
    SolutionClass solution_class = SolutionClass::not_a_solution;
    std::optional<State> witness;  // offending state when not strong
    std::string reason;
    std::size_t reachable_states = 0;

    // Strong-acyclic policies are strong cyclic solutions as well.
    bool is_strong() const {
        return solution_class == SolutionClass::strong_cyclic ||
               solution_class == SolutionClass::strong_acyclic;
    }
};

// Classifies `policy` by exploring every outcome of every mapped action from
// the initial state. Unmapped reachable states are terminal.
PolicyVerdict classify(const Policy &policy, const GroundTask &task);

struct OracleOptions {
    std::size_t max_states = 1U << 16;
};

struct OracleResult {
    bool exists = false;
    std::size_t reachable_states = 0;
    // Greatest set of state/action pairs that keep every outcome inside
    // states with a path to the goal; goal states are omitted.
    std::map<State, std::vector<ActionId>> maximal;
    // A strong cyclic policy drawn from `maximal`, restricted to states it
    // reaches from the initial state. Empty when !exists.
    Policy policy;
};

// Explicit-state strong-cyclic fixpoint. Throws ResourceError when more than
// max_states states are reachable.
OracleResult oracle_strong_cyclic(const GroundTask &task, const OracleOptions &options = {});

}  // namespace fondsp
