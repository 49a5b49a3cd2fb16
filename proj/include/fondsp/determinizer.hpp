#pragma once

#include "fondsp/grounder.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace fondsp {

// Identifies one outcome of one ground non-deterministic action. Stable
// across every member of a determinization.
struct OutcomeRef {
    ActionId nd_action = 0;
    std::uint32_t effect = 0;
    friend bool operator==(const OutcomeRef &, const OutcomeRef &) = default;
    friend auto operator<=>(const OutcomeRef &, const OutcomeRef &) = default;
};

struct ClassicalAction {
    ActionId id = 0;
    OutcomeRef origin;
    std::vector<AtomId> pre_pos;
    std::vector<AtomId> pre_neg;
    GroundEffect effect;
};

// Single-effect task over the atoms of a base GroundTask, possibly extended
// with extra atoms (see constrain()).
struct ClassicalTask {
    const GroundTask *base = nullptr;
    std::vector<std::string> extra_atoms;
    std::vector<ClassicalAction> actions;
    std::vector<AtomId> goal_pos;
    std::vector<AtomId> goal_neg;
    bool all_outcome = false;
    std::vector<std::uint32_t> choice;  // per-schema outcome; empty for all-outcome
    std::vector<OutcomeRef> banned;     // set by constrain()

    std::size_t num_atoms() const { return base->num_atoms() + extra_atoms.size(); }
    const std::string &atom_name(AtomId a) const {
        return a < base->num_atoms() ? base->atoms[a] : extra_atoms[a - base->num_atoms()];
    }
    const NdGroundAction &nd_action(const ClassicalAction &a) const {
        return base->actions[a.origin.nd_action];
    }
    bool is_goal(const State &s) const {
        return s.contains_all(goal_pos) && s.contains_none(goal_neg);
    }
};

// Name of the classical operator an action instantiates: the schema name, or
// "<schema>__o<k>" for outcome k of a branching schema in the all-outcome member.
std::string classical_operator_name(const ClassicalTask &task, const ClassicalAction &action);
// "(<operator> c1 ... ck)"
std::string classical_action_name(const ClassicalTask &task, const ClassicalAction &action);

enum class Ordering { descending, ascending };

// How operator outcomes are ranked. effect_size sorts each schema's outcomes
// by literal count; effect_count ranks schemas by their number of outcomes.
enum class OrderingKey { effect_size, effect_count };

struct DeterminizeOptions {
    Ordering ordering = Ordering::descending;
    std::size_t cap = 64;
    bool ndp2 = false;  // all-outcome member only
    OrderingKey key = OrderingKey::effect_size;
};

// Ordered classical compilations of a FOND task: single-outcome members in
// ranking order, truncated at the cap, followed by the all-outcome member.
// Members are built on first access. Safe for concurrent member() calls.
class DeterminizationSet {
public:
    DeterminizationSet(const GroundTask &task, const DeterminizeOptions &options);

    std::size_t size() const { return num_single_ + 1; }
    std::size_t num_single_outcome() const { return num_single_; }
    // Product of outcome counts over schemas with two or more outcomes
    // (saturating at SIZE_MAX).
    std::size_t combinations() const { return combinations_; }
    bool is_all_outcome(std::size_t index) const { return index == num_single_; }

    // Per-schema chosen outcome for a single-outcome member. Throws
    // std::out_of_range past the last single-outcome member.
    std::vector<std::uint32_t> choice(std::size_t index) const;

    // Throws std::out_of_range when index >= size().
    const ClassicalTask &member(std::size_t index) const;

    const GroundTask &base() const { return *task_; }
    const DeterminizeOptions &options() const { return options_; }

private:
    ClassicalTask build(std::size_t index) const;

    const GroundTask *task_;
    DeterminizeOptions options_;
    std::vector<std::size_t> branching_;                  // schema ids, most significant first
    std::vector<std::vector<std::uint32_t>> preference_;  // per schema, outcome ids best-first
    std::size_t combinations_ = 1;
    std::size_t num_single_ = 0;
    mutable std::mutex mutex_;
    mutable std::vector<std::unique_ptr<ClassicalTask>> members_;
};

DeterminizationSet compile(const GroundTask &task, const DeterminizeOptions &options = {});

}  // namespace fondsp
