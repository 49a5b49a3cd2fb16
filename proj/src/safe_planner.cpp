#include "fondsp/safe_planner.hpp"

#include "fondsp/constrainer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace fondsp {

std::string_view to_string(SolveStatus status) {
    switch (status) {
    case SolveStatus::solved:
        return "solved";
    case SolveStatus::no_solution:
        return "proven-no-solution";
    case SolveStatus::budget_exhausted:
        return "budget-exhausted";
    }
    return "?";
}

std::vector<State> execute(const Policy &policy, const GroundTask &task, const State &state) {
    if (policy.empty() || !policy.contains(state))
        return {state};
    std::vector<State> terminals;
    StateSet terminal_set;
    StateSet visited;
    std::deque<State> queue{state};
    while (!queue.empty()) {
        State s = std::move(queue.front());
        queue.pop_front();
        if (!visited.insert(s).second)
            continue;
        const NdGroundAction &action = task.actions[*policy.action(s)];
        for (State &next : apply(s, action)) {
            if (visited.contains(next))
                continue;
            if (policy.contains(next))
                queue.push_back(std::move(next));
            else if (terminal_set.insert(next).second)
                terminals.push_back(std::move(next));
        }
    }
    return terminals;
}

void merge_image(Policy &policy, const PolicyImage &image) {
    for (const ImageStep &step : image.steps)
        policy.set(step.state, step.action.nd_action);
}

namespace {

bool out_of_time(std::chrono::steady_clock::time_point deadline) {
    return std::chrono::steady_clock::now() >= deadline;
}

// Outcome refs from `banned` that have an action in `member`.
std::vector<OutcomeRef> present_in(const ClassicalTask &member, const std::set<OutcomeRef> &banned) {
    std::vector<OutcomeRef> out;
    for (const OutcomeRef &ref : banned) {
        if (member.all_outcome) {
            out.push_back(ref);
            continue;
        }
        const NdGroundAction &nd = member.base->actions[ref.nd_action];
        if (member.choice[nd.schema] == ref.effect)
            out.push_back(ref);
    }
    return out;
}

// Every policy state reachable from `start` must reach a terminal state.
bool has_inescapable_cycle(const Policy &policy, const GroundTask &task, const State &start) {
    if (!policy.contains(start))
        return false;
    std::unordered_map<State, std::vector<State>, StateHash> predecessors;
    StateSet reachable{start};
    std::vector<State> stack{start};
    std::vector<State> terminals;
    while (!stack.empty()) {
        State s = std::move(stack.back());
        stack.pop_back();
        for (State &next : apply(s, task.actions[*policy.action(s)])) {
            predecessors[next].push_back(s);
            if (!reachable.insert(next).second)
                continue;
            if (policy.contains(next))
                stack.push_back(next);
            else
                terminals.push_back(next);
        }
    }
    if (terminals.empty())
        return true;
    StateSet escapes(terminals.begin(), terminals.end());
    std::vector<State> frontier = terminals;
    while (!frontier.empty()) {
        State s = std::move(frontier.back());
        frontier.pop_back();
        for (const State &p : predecessors[s])
            if (escapes.insert(p).second)
                frontier.push_back(p);
    }
    return std::any_of(reachable.begin(), reachable.end(),
                       [&](const State &s) { return !escapes.contains(s); });
}

}  // namespace

MspResult make_safe_plan(const GroundTask &task, const DeterminizationSet &delta,
                         const State &start, const StateSet &deadends,
                         const SolveOptions &options, SolveTrace &trace,
                         std::chrono::steady_clock::time_point deadline) {
    MspResult result;
    PolicyImage &image = result.image;
    StateSet image_states;
    std::unordered_map<State, std::set<OutcomeRef>, StateHash> banned;
    StateSet unsolvable = deadends;
    State s = start;

    for (std::size_t rounds = 0;; ++rounds) {
        if (out_of_time(deadline) || rounds >= options.max_iterations) {
            result.status = MspStatus::budget_exhausted;
            return result;
        }
        bool replan = false;
        bool exhausted = false;
        for (std::size_t m = 0; m < delta.size() && !replan; ++m) {
            const ClassicalTask &member = delta.member(m);
            auto ban_here = banned.find(s);
            std::vector<OutcomeRef> ban_list;
            if (ban_here != banned.end())
                ban_list = present_in(member, ban_here->second);
            ConstrainedTask constrained = constrain(member, s, ban_list);
            SearchBudget budget = options.planner_budget;
            auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                deadline - std::chrono::steady_clock::now());
            budget.wall_clock = std::max(std::chrono::milliseconds(1), std::min(budget.wall_clock, remaining));
            SearchResult planned = race(options.strategies, constrained.task, constrained.state, budget);
            ++trace.planner_calls;
            if (planned.status == SearchStatus::budget_exhausted) {
                exhausted = true;
                continue;
            }
            if (planned.status == SearchStatus::unsolvable)
                continue;

            bool broken = false;
            for (ActionId id : planned.plan) {
                const OutcomeRef ref = constrained.task.actions[id].origin;
                const NdGroundAction &nd = task.actions[ref.nd_action];
                State next = apply_effect(s, nd.effects[ref.effect]);
                bool cycle = next == s || image_states.contains(next);
                bool into_deadend = false;
                if (!cycle) {
                    for (const State &outcome : apply(s, nd))
                        if (unsolvable.contains(outcome)) {
                            into_deadend = true;
                            break;
                        }
                }
                if (cycle || into_deadend) {
                    banned[s].insert(ref);
                    ++trace.msp_bans;
                    broken = true;
                    break;
                }
                image.steps.push_back({s, ref});
                image_states.insert(s);
                s = std::move(next);
            }
            if (!broken) {
                image.end = s;
                result.status = MspStatus::image;
                return result;
            }
            replan = true;
        }
        if (replan)
            continue;
        // No member yields a plan at s.
        if (exhausted) {
            result.status = MspStatus::budget_exhausted;
            return result;
        }
        if (image.steps.empty()) {
            result.status = MspStatus::failure;
            return result;
        }
        unsolvable.insert(s);
        ImageStep last = std::move(image.steps.back());
        image.steps.pop_back();
        image_states.erase(last.state);
        banned[last.state].insert(last.action);
        s = std::move(last.state);
        ++trace.msp_backtracks;
    }
}

SolveResult solve(const GroundTask &task, const DeterminizationSet &delta,
                  const SolveOptions &options) {
    const auto started = std::chrono::steady_clock::now();
    const auto deadline = started + options.time_limit;
    SolveResult result;
    StateSet deadends;
    Policy &policy = result.policy;
    auto finish = [&](SolveStatus status) {
        result.status = status;
        result.trace.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        result.deadends.assign(deadends.begin(), deadends.end());
        std::sort(result.deadends.begin(), result.deadends.end());
        return std::move(result);
    };

    for (;;) {
        std::vector<State> terminals = execute(policy, task, task.init);
        auto open = std::find_if(terminals.begin(), terminals.end(),
                                 [&](const State &t) { return !is_goal(task, t); });
        if (open == terminals.end())
            return finish(SolveStatus::solved);
        if (out_of_time(deadline) || result.trace.iterations >= options.max_iterations)
            return finish(SolveStatus::budget_exhausted);
        ++result.trace.iterations;
        const State s = *open;

        MspResult msp = make_safe_plan(task, delta, s, deadends, options, result.trace, deadline);
        if (msp.status == MspStatus::budget_exhausted)
            return finish(SolveStatus::budget_exhausted);
        if (msp.status == MspStatus::image) {
            if (options.on_image)
                options.on_image(msp.image, s, deadends);
            merge_image(policy, msp.image);
        } else {
            if (s == task.init)
                return finish(SolveStatus::no_solution);
            deadends.insert(s);
            ++result.trace.deadends_found;
            std::vector<State> doomed;
            for (const auto &[state, action] : policy) {
                const auto outcomes = apply(state, task.actions[action]);
                if (std::find(outcomes.begin(), outcomes.end(), s) != outcomes.end())
                    doomed.push_back(state);
            }
            for (const State &d : doomed)
                policy.erase(d);
        }
        if (options.check_invariants && has_inescapable_cycle(policy, task, task.init))
            ++result.trace.lemma2_violations;
    }
}

}  // namespace fondsp
