#pragma once

#include "fondsp/grounder.hpp"

#include <string>
#include <vector>

namespace fondsp::testing {

// One ground action per schema; schema k has profile[k] outcomes, the i-th of
// which adds i+1 atoms (so literal counts are distinct and ascending).
inline GroundTask schema_profile_task(const std::vector<std::size_t> &profile) {
    GroundTask t;
    for (std::size_t i = 0; i < 8; ++i)
        t.intern("(q" + std::to_string(i) + ")");
    for (std::size_t k = 0; k < profile.size(); ++k) {
        Schema schema{"s" + std::to_string(k), {}};
        NdGroundAction a;
        a.id = static_cast<ActionId>(k);
        a.schema = k;
        a.name = "(s" + std::to_string(k) + ")";
        for (std::size_t i = 0; i < profile[k]; ++i) {
            GroundEffect e;
            for (std::size_t j = 0; j <= i && j < 8; ++j)
                e.add.push_back(static_cast<AtomId>(j));
            schema.effect_sizes.push_back(e.add.size() + e.del.size());
            a.effects.push_back(e);
        }
        t.schemas.push_back(schema);
        t.actions.push_back(std::move(a));
    }
    t.init = State(t.num_atoms());
    t.goal_pos = {7};
    return t;
}

}  // namespace fondsp::testing
