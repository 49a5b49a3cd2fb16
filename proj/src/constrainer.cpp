#include "fondsp/constrainer.hpp"

#include "fondsp/errors.hpp"

#include <algorithm>

namespace fondsp {

ConstrainedTask constrain(const ClassicalTask &task, const State &state,
                          std::span<const OutcomeRef> banned) {
    ConstrainedTask out{task, state, {}, {}};
    std::vector<OutcomeRef> unique(banned.begin(), banned.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    if (unique.empty())
        return out;

    for (const OutcomeRef &ref : unique) {
        auto it = std::find_if(out.task.actions.begin(), out.task.actions.end(),
                               [&](const ClassicalAction &a) { return a.origin == ref; });
        if (it == out.task.actions.end())
            throw ContractError("banned action is not part of the classical task");
        std::string name = classical_action_name(task, *it);
        auto marker = static_cast<AtomId>(out.task.num_atoms());
        out.task.extra_atoms.push_back("(disallowed_" + name.substr(1));
        it->pre_neg.push_back(marker);
        out.banned.push_back(ref);
        out.disallowed.push_back(marker);
    }
    out.state.resize(out.task.num_atoms());
    for (AtomId marker : out.disallowed)
        out.state.set(marker);
    for (auto &action : out.task.actions)
        action.effect.del.insert(action.effect.del.end(), out.disallowed.begin(), out.disallowed.end());
    out.task.banned.insert(out.task.banned.end(), out.banned.begin(), out.banned.end());
    return out;
}

}  // namespace fondsp
