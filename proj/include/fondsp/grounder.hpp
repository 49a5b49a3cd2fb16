#pragma once

#include "fondsp/pddl.hpp"
#include "fondsp/state.hpp"

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace fondsp {

struct GroundEffect {
    std::vector<AtomId> add;
    std::vector<AtomId> del;  // disjoint from add
    friend bool operator==(const GroundEffect &, const GroundEffect &) = default;
};

// Operator schema summary kept with the ground task. effect_sizes[i] is the
// literal count |e+| + |e-| of the schema's i-th outcome.
struct Schema {
    std::string name;
    std::vector<std::size_t> effect_sizes;
    std::size_t num_effects() const { return effect_sizes.size(); }
};

struct NdGroundAction {
    ActionId id = 0;
    std::string name;  // "(op c1 ... ck)"
    std::size_t schema = 0;
    std::vector<std::string> args;
    std::vector<AtomId> pre_pos;
    std::vector<AtomId> pre_neg;
    std::vector<GroundEffect> effects;  // effects[i] instantiates the schema's i-th outcome
};

struct GroundTask {
    std::vector<std::string> atoms;
    std::unordered_map<std::string, AtomId> atom_index;
    std::vector<Schema> schemas;
    std::vector<NdGroundAction> actions;
    State init;
    std::vector<AtomId> goal_pos;
    std::vector<AtomId> goal_neg;
    // Atoms of predicates no operator changes that hold initially. They are
    // compiled away from states but needed when re-emitting PDDL.
    std::vector<std::string> static_facts;

    std::size_t num_atoms() const { return atoms.size(); }
    AtomId intern(const std::string &atom);
    const NdGroundAction *find_action(const std::string &name) const;
    State make_state(std::initializer_list<std::string> true_atoms) const;
};

struct GroundOptions {
    std::size_t max_actions = 1'000'000;
    // Drop actions unreachable in the delete relaxation from the initial state.
    bool prune_unreachable = true;
};

GroundTask ground(const pddl::Domain &domain, const pddl::Problem &problem,
                  const GroundOptions &options = {});

bool is_applicable(const State &state, const NdGroundAction &action);
State apply_effect(const State &state, const GroundEffect &effect);

// All successors of an applicable action, one per outcome, duplicates merged
// (first occurrence kept). Throws ContractError when not applicable.
std::vector<State> apply(const State &state, const NdGroundAction &action);

bool is_goal(const GroundTask &task, const State &state);

std::string format_state(const GroundTask &task, const State &state);
// One atom or action per line; stable across runs.
std::string dump(const GroundTask &task);

}  // namespace fondsp
