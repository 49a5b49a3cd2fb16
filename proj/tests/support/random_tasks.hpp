#pragma once

#include "fondsp/grounder.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace fondsp::testing {

struct RandomTaskParams {
    std::size_t max_atoms = 12;
    std::size_t max_actions = 20;
    std::size_t max_effects = 3;
    std::size_t max_schemas = 4;
};

inline std::vector<AtomId> sample_atoms(std::mt19937_64 &rng, std::size_t n, std::size_t count) {
    std::vector<AtomId> all(n);
    for (std::size_t i = 0; i < n; ++i)
        all[i] = static_cast<AtomId>(i);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(count, n));
    std::sort(all.begin(), all.end());
    return all;
}

// Ground FOND task drawn directly at the ground level. Every action of a
// schema has outcomes with that schema's literal counts.
inline GroundTask random_task(std::mt19937_64 &rng, const RandomTaskParams &params = {}) {
    auto uniform = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    GroundTask task;
    const std::size_t n = uniform(3, params.max_atoms);
    for (std::size_t i = 0; i < n; ++i)
        task.intern("(p" + std::to_string(i) + ")");

    const std::size_t num_schemas = uniform(1, params.max_schemas);
    for (std::size_t k = 0; k < num_schemas; ++k) {
        Schema schema{"op" + std::to_string(k), {}};
        const std::size_t m = uniform(1, params.max_effects);
        for (std::size_t i = 0; i < m; ++i)
            schema.effect_sizes.push_back(uniform(1, 3));
        task.schemas.push_back(schema);
    }

    const std::size_t num_actions = uniform(1, params.max_actions);
    for (std::size_t i = 0; i < num_actions; ++i) {
        NdGroundAction action;
        action.id = static_cast<ActionId>(i);
        action.schema = uniform(0, num_schemas - 1);
        action.name = "(" + task.schemas[action.schema].name + " a" + std::to_string(i) + ")";
        action.args = {"a" + std::to_string(i)};
        std::vector<AtomId> pre = sample_atoms(rng, n, uniform(0, 3));
        for (AtomId a : pre)
            (uniform(0, 3) == 0 ? action.pre_neg : action.pre_pos).push_back(a);
        for (std::size_t size : task.schemas[action.schema].effect_sizes) {
            GroundEffect effect;
            for (AtomId a : sample_atoms(rng, n, size))
                (uniform(0, 2) == 0 ? effect.del : effect.add).push_back(a);
            action.effects.push_back(std::move(effect));
        }
        task.actions.push_back(std::move(action));
    }

    task.init = State(n);
    for (std::size_t i = 0; i < n; ++i)
        if (uniform(0, 2) == 0)
            task.init.set(static_cast<AtomId>(i));
    std::vector<AtomId> goal = sample_atoms(rng, n, uniform(1, 3));
    for (AtomId a : goal)
        (uniform(0, 4) == 0 ? task.goal_neg : task.goal_pos).push_back(a);
    return task;
}

}  // namespace fondsp::testing
