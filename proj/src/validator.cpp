#include "fondsp/validator.hpp"

#include "fondsp/errors.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace fondsp {

std::string_view to_string(SolutionClass c) {
    switch (c) {
    case SolutionClass::not_a_solution:
        return "not-a-solution";
    case SolutionClass::weak:
        return "weak";
    case SolutionClass::strong_cyclic:
        return "strong-cyclic";
    case SolutionClass::strong_acyclic:
        return "strong-acyclic";
    }
    return "?";
}

PolicyVerdict classify(const Policy &policy, const GroundTask &task) {
    PolicyVerdict verdict;
    // Explicit policy graph over reachable states.
    std::vector<State> states{task.init};
    std::unordered_map<State, std::size_t, StateHash> index{{task.init, 0}};
    std::vector<std::vector<std::size_t>> succ;
    for (std::size_t i = 0; i < states.size(); ++i) {
        succ.emplace_back();
        auto action = policy.action(states[i]);
        if (!action)
            continue;
        if (*action >= task.actions.size() || !is_applicable(states[i], task.actions[*action])) {
            verdict.witness = states[i];
            verdict.reason = "mapped action is not applicable";
            verdict.reachable_states = states.size();
            return verdict;
        }
        for (State &next : apply(states[i], task.actions[*action])) {
            auto [it, inserted] = index.emplace(next, states.size());
            if (inserted)
                states.push_back(std::move(next));
            succ[i].push_back(it->second);
        }
    }
    const std::size_t n = states.size();
    verdict.reachable_states = n;

    std::vector<std::vector<std::size_t>> pred(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : succ[i])
            pred[j].push_back(i);

    std::vector<std::size_t> goal_terminals;
    std::optional<std::size_t> bad_terminal;
    bool any_terminal = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (policy.contains(states[i]))
            continue;
        any_terminal = true;
        if (is_goal(task, states[i]))
            goal_terminals.push_back(i);
        else if (!bad_terminal)
            bad_terminal = i;
    }

    std::vector<char> reaches_goal(n, 0);
    std::vector<std::size_t> frontier = goal_terminals;
    for (std::size_t g : goal_terminals)
        reaches_goal[g] = 1;
    while (!frontier.empty()) {
        std::size_t v = frontier.back();
        frontier.pop_back();
        for (std::size_t p : pred[v])
            if (!reaches_goal[p]) {
                reaches_goal[p] = 1;
                frontier.push_back(p);
            }
    }

    if (!any_terminal) {
        verdict.witness = states[0];
        verdict.reason = "no terminal state: execution is trapped in a cycle";
        return verdict;
    }
    if (bad_terminal) {
        verdict.witness = states[*bad_terminal];
        if (reaches_goal[0]) {
            verdict.solution_class = SolutionClass::weak;
            verdict.reason = "some executions end in a non-goal state";
        } else {
            verdict.reason = "no execution reaches the goal";
        }
        return verdict;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!reaches_goal[i]) {
            verdict.witness = states[i];
            verdict.reason = "state cannot reach the goal (inescapable cycle)";
            return verdict;
        }
    }

    // Kahn's algorithm: acyclic iff every node can be removed.
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : succ[i])
            ++indegree[j];
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0)
            ready.push_back(i);
    std::size_t removed = 0;
    while (!ready.empty()) {
        std::size_t v = ready.back();
        ready.pop_back();
        ++removed;
        for (std::size_t j : succ[v])
            if (--indegree[j] == 0)
                ready.push_back(j);
    }
    verdict.solution_class =
        removed == n ? SolutionClass::strong_acyclic : SolutionClass::strong_cyclic;
    return verdict;
}

OracleResult oracle_strong_cyclic(const GroundTask &task, const OracleOptions &options) {
    OracleResult result;
    struct Edge {
        ActionId action;
        std::vector<std::size_t> outcomes;
    };
    std::vector<State> states{task.init};
    std::unordered_map<State, std::size_t, StateHash> index{{task.init, 0}};
    std::vector<std::vector<Edge>> edges;
    std::vector<char> goal;
    for (std::size_t i = 0; i < states.size(); ++i) {
        edges.emplace_back();
        goal.push_back(is_goal(task, states[i]) ? 1 : 0);
        if (goal[i])
            continue;
        for (const auto &action : task.actions) {
            if (!is_applicable(states[i], action))
                continue;
            Edge e{action.id, {}};
            for (State &next : apply(states[i], action)) {
                auto [it, inserted] = index.emplace(next, states.size());
                if (inserted) {
                    if (states.size() >= options.max_states)
                        throw ResourceError("oracle state bound of " +
                                            std::to_string(options.max_states) + " exceeded");
                    states.push_back(std::move(next));
                }
                e.outcomes.push_back(it->second);
            }
            edges[i].push_back(std::move(e));
        }
    }
    const std::size_t n = states.size();
    result.reachable_states = n;

    // Greatest fixpoint over candidate states; inner least fixpoint for
    // goal reachability through actions whose outcomes stay in the set.
    std::vector<char> alive(n, 1);
    auto safe = [&](const Edge &e) {
        return std::all_of(e.outcomes.begin(), e.outcomes.end(),
                           [&](std::size_t o) { return alive[o] != 0; });
    };
    std::vector<int> distance(n, -1);
    for (bool changed = true; changed;) {
        std::fill(distance.begin(), distance.end(), -1);
        std::vector<std::size_t> layer;
        for (std::size_t i = 0; i < n; ++i)
            if (alive[i] && goal[i]) {
                distance[i] = 0;
                layer.push_back(i);
            }
        for (int d = 1; !layer.empty(); ++d) {
            std::vector<std::size_t> next_layer;
            for (std::size_t i = 0; i < n; ++i) {
                if (!alive[i] || distance[i] >= 0)
                    continue;
                for (const Edge &e : edges[i]) {
                    if (!safe(e))
                        continue;
                    bool progresses = std::any_of(e.outcomes.begin(), e.outcomes.end(), [&](std::size_t o) {
                        return distance[o] >= 0 && distance[o] < d;
                    });
                    if (progresses) {
                        distance[i] = d;
                        next_layer.push_back(i);
                        break;
                    }
                }
            }
            layer = std::move(next_layer);
        }
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            if (alive[i] && distance[i] < 0) {
                alive[i] = 0;
                changed = true;
            }
    }

    result.exists = alive[0] != 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i] || goal[i])
            continue;
        auto &actions = result.maximal[states[i]];
        for (const Edge &e : edges[i])
            if (safe(e))
                actions.push_back(e.action);
    }
    if (!result.exists)
        return result;

    // Pick, per state, the first safe action that moves strictly closer to
    // the goal; keep only what the initial state reaches.
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        if (goal[i])
            continue;
        for (const Edge &e : edges[i]) {
            if (!safe(e))
                continue;
            bool progresses = std::any_of(e.outcomes.begin(), e.outcomes.end(), [&](std::size_t o) {
                return distance[o] < distance[i];
            });
            if (!progresses)
                continue;
            result.policy.set(states[i], e.action);
            for (std::size_t o : e.outcomes)
                if (!seen[o]) {
                    seen[o] = 1;
                    queue.push_back(o);
                }
            break;
        }
    }
    return result;
}

}  // namespace fondsp
