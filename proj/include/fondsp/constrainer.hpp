#pragma once

#include "fondsp/determinizer.hpp"

#include <span>
#include <vector>

namespace fondsp {

struct ConstrainedTask {
    ClassicalTask task;
    State state;
    std::vector<OutcomeRef> banned;
    std::vector<AtomId> disallowed;  // disallowed[i] marks banned[i]
};

// Copies `task` and `state` so that no plan from the returned state can start
// with a banned action: each banned action gets a fresh marker atom that is
// true in the state and forbidden by the action's precondition, and every
// action deletes all markers. Throws ContractError if a banned outcome has no
// action in `task`.
ConstrainedTask constrain(const ClassicalTask &task, const State &state,
                          std::span<const OutcomeRef> banned);

}  // namespace fondsp
