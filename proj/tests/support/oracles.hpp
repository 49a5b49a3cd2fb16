#pragma once

// Reference implementations used to check the library. They work on plain
// std::set<AtomId> states and share no code with the library's search.

#include "fondsp/classical_planner.hpp"
#include "fondsp/grounder.hpp"
#include "fondsp/policy.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace fondsp::testing {

using AtomSet = std::set<AtomId>;

inline AtomSet to_set(const State &s) {
    AtomSet out;
    for (std::size_t i = 0; i < s.num_atoms(); ++i)
        if (s.contains(static_cast<AtomId>(i)))
            out.insert(static_cast<AtomId>(i));
    return out;
}

inline State to_state(const AtomSet &atoms, std::size_t n) {
    State s(n);
    for (AtomId a : atoms)
        s.set(a);
    return s;
}

inline bool holds_all(const AtomSet &s, const std::vector<AtomId> &atoms) {
    for (AtomId a : atoms)
        if (!s.count(a))
            return false;
    return true;
}

inline bool holds_none(const AtomSet &s, const std::vector<AtomId> &atoms) {
    for (AtomId a : atoms)
        if (s.count(a))
            return false;
    return true;
}

inline bool naive_applicable(const AtomSet &s, const NdGroundAction &a) {
    return holds_all(s, a.pre_pos) && holds_none(s, a.pre_neg);
}

inline AtomSet naive_apply(const AtomSet &s, const GroundEffect &e) {
    AtomSet out = s;
    for (AtomId a : e.del)
        out.erase(a);
    for (AtomId a : e.add)
        out.insert(a);
    return out;
}

// gamma(s, a) as a set of successor sets.
inline std::set<AtomSet> naive_successors(const AtomSet &s, const NdGroundAction &a) {
    std::set<AtomSet> out;
    for (const GroundEffect &e : a.effects)
        out.insert(naive_apply(s, e));
    return out;
}

inline bool naive_goal(const GroundTask &task, const AtomSet &s) {
    return holds_all(s, task.goal_pos) && holds_none(s, task.goal_neg);
}

// Every state reachable from the initial state over all outcomes.
inline std::set<AtomSet> reachable_states(const GroundTask &task) {
    std::set<AtomSet> seen{to_set(task.init)};
    std::deque<AtomSet> queue{to_set(task.init)};
    while (!queue.empty()) {
        AtomSet s = queue.front();
        queue.pop_front();
        for (const auto &a : task.actions) {
            if (!naive_applicable(s, a))
                continue;
            for (const AtomSet &next : naive_successors(s, a))
                if (seen.insert(next).second)
                    queue.push_back(next);
        }
    }
    return seen;
}

// Strong-cyclic existence by the textbook double fixpoint: repeatedly drop
// state/action pairs with an outcome outside the surviving states, then keep
// only states that can still reach the goal through surviving pairs.
inline bool naive_strong_cyclic_exists(const GroundTask &task) {
    const std::set<AtomSet> states = reachable_states(task);
    std::set<AtomSet> good = states;
    for (;;) {
        std::map<AtomSet, std::vector<std::set<AtomSet>>> pairs;
        for (const AtomSet &s : good) {
            if (naive_goal(task, s))
                continue;
            for (const auto &a : task.actions) {
                if (!naive_applicable(s, a))
                    continue;
                auto succ = naive_successors(s, a);
                bool inside = true;
                for (const AtomSet &t : succ)
                    inside = inside && good.count(t);
                if (inside)
                    pairs[s].push_back(succ);
            }
        }
        std::set<AtomSet> reaches;
        for (const AtomSet &s : good)
            if (naive_goal(task, s))
                reaches.insert(s);
        for (bool grew = true; grew;) {
            grew = false;
            for (const auto &[s, options] : pairs) {
                if (reaches.count(s))
                    continue;
                for (const auto &succ : options) {
                    bool some = false;
                    for (const AtomSet &t : succ)
                        some = some || reaches.count(t);
                    if (some) {
                        reaches.insert(s);
                        grew = true;
                        break;
                    }
                }
            }
        }
        if (reaches == good)
            break;
        good = reaches;
    }
    return good.count(to_set(task.init)) > 0;
}

// Checks that every execution of `policy` from the initial state stays on
// applicable actions and can always still reach the goal.
inline bool naive_is_strong_cyclic(const Policy &policy, const GroundTask &task) {
    const std::size_t n = task.num_atoms();
    std::set<AtomSet> seen{to_set(task.init)};
    std::deque<AtomSet> queue{to_set(task.init)};
    std::map<AtomSet, std::set<AtomSet>> edges;
    while (!queue.empty()) {
        AtomSet s = queue.front();
        queue.pop_front();
        if (naive_goal(task, s))
            continue;
        auto action = policy.action(to_state(s, n));
        if (!action || !naive_applicable(s, task.actions[*action]))
            return false;
        edges[s] = naive_successors(s, task.actions[*action]);
        for (const AtomSet &t : edges[s])
            if (seen.insert(t).second)
                queue.push_back(t);
    }
    std::set<AtomSet> reaches;
    for (const AtomSet &s : seen)
        if (naive_goal(task, s))
            reaches.insert(s);
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto &[s, succ] : edges) {
            if (reaches.count(s))
                continue;
            for (const AtomSet &t : succ)
                if (reaches.count(t)) {
                    reaches.insert(s);
                    grew = true;
                    break;
                }
        }
    }
    return reaches.size() == seen.size();
}

// Shortest classical plan length by breadth-first search.
inline std::optional<std::size_t> bfs_plan_length(const ClassicalTask &task, const State &start) {
    std::map<AtomSet, std::size_t> depth{{to_set(start), 0}};
    std::deque<AtomSet> queue{to_set(start)};
    const std::size_t n = task.num_atoms();
    while (!queue.empty()) {
        AtomSet s = queue.front();
        queue.pop_front();
        if (task.is_goal(to_state(s, n)))
            return depth[s];
        for (const auto &a : task.actions) {
            if (!holds_all(s, a.pre_pos) || !holds_none(s, a.pre_neg))
                continue;
            AtomSet next = naive_apply(s, a.effect);
            if (depth.emplace(next, depth[s] + 1).second)
                queue.push_back(next);
        }
    }
    return std::nullopt;
}

// All applicable action sequences of length <= max_len from `start` that end
// in a goal state.
inline std::vector<std::vector<ActionId>> enumerate_plans(const ClassicalTask &task, const State &start,
                                                          std::size_t max_len) {
    std::vector<std::vector<ActionId>> plans;
    std::vector<ActionId> prefix;
    const std::size_t n = task.num_atoms();
    auto visit = [&](auto &self, const AtomSet &s) -> void {
        if (task.is_goal(to_state(s, n)))
            plans.push_back(prefix);
        if (prefix.size() == max_len)
            return;
        for (const auto &a : task.actions) {
            if (!holds_all(s, a.pre_pos) || !holds_none(s, a.pre_neg))
                continue;
            prefix.push_back(a.id);
            self(self, naive_apply(s, a.effect));
            prefix.pop_back();
        }
    };
    visit(visit, to_set(start));
    return plans;
}

}  // namespace fondsp::testing
