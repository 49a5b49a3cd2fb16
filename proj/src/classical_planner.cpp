#include "fondsp/classical_planner.hpp"

#include "fondsp/errors.hpp"
#include "fondsp/external_planner.hpp"

#include <algorithm>
#include <condition_variable>
#include <mutex>
#include <queue>
#include <thread>
#include <tuple>
#include <unordered_map>

namespace fondsp {

std::string_view to_string(SearchStatus status) {
    switch (status) {
    case SearchStatus::plan_found:
        return "plan-found";
    case SearchStatus::unsolvable:
        return "unsolvable";
    case SearchStatus::budget_exhausted:
        return "budget-exhausted";
    }
    return "?";
}

std::string Strategy::name() const {
    switch (kind) {
    case StrategyKind::astar_hmax:
        return "astar";
    case StrategyKind::gbfs_hadd:
        return "gbfs";
    case StrategyKind::external:
        return "external";
    }
    return "?";
}

std::vector<Strategy> parse_strategies(std::string_view spec) {
    std::vector<Strategy> out;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string_view item = spec.substr(pos, comma == std::string_view::npos ? spec.npos : comma - pos);
        if (item == "astar")
            out.push_back({StrategyKind::astar_hmax});
        else if (item == "gbfs")
            out.push_back({StrategyKind::gbfs_hadd});
        else
            throw std::invalid_argument("unknown strategy '" + std::string(item) +
                                        "' (expected astar or gbfs)");
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

bool is_applicable(const State &state, const ClassicalAction &action) {
    return state.contains_all(action.pre_pos) && state.contains_none(action.pre_neg);
}

State apply(const State &state, const ClassicalAction &action) {
    return apply_effect(state, action.effect);
}

bool is_valid_plan(const ClassicalTask &task, const State &state, std::span<const ActionId> plan) {
    State current = state;
    for (ActionId id : plan) {
        if (id >= task.actions.size() || !is_applicable(current, task.actions[id]))
            return false;
        current = apply(current, task.actions[id]);
    }
    return task.is_goal(current);
}

RelaxedHeuristic::RelaxedHeuristic(const ClassicalTask &task, bool additive)
    : task_(task), additive_(additive), triggered_by_(task.num_atoms()) {
    for (const auto &a : task.actions) {
        if (a.pre_pos.empty())
            unconditional_.push_back(a.id);
        for (AtomId p : a.pre_pos)
            triggered_by_[p].push_back(a.id);
    }
}

int RelaxedHeuristic::operator()(const State &state) const {
    const std::size_t n = task_.num_atoms();
    std::vector<int> cost(n, kDeadEnd);
    std::vector<int> pending(task_.actions.size());
    std::vector<int> support(task_.actions.size(), 0);
    for (const auto &a : task_.actions)
        pending[a.id] = static_cast<int>(a.pre_pos.size());

    using Entry = std::pair<int, AtomId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    auto reach = [&](AtomId atom, int c) {
        if (c < cost[atom]) {
            cost[atom] = c;
            queue.emplace(c, atom);
        }
    };
    auto fire = [&](ActionId id) {
        for (AtomId add : task_.actions[id].effect.add)
            reach(add, support[id] + 1);
    };
    for (std::size_t i = 0; i < n; ++i)
        if (state.contains(static_cast<AtomId>(i)))
            reach(static_cast<AtomId>(i), 0);
    for (ActionId id : unconditional_)
        fire(id);

    std::size_t goals_left = task_.goal_pos.size();
    std::vector<char> is_goal_atom(n, 0);
    for (AtomId g : task_.goal_pos)
        is_goal_atom[g] = 1;

    while (!queue.empty() && goals_left > 0) {
        auto [c, atom] = queue.top();
        queue.pop();
        if (c > cost[atom])
            continue;
        if (is_goal_atom[atom]) {
            is_goal_atom[atom] = 0;
            --goals_left;
        }
        for (ActionId id : triggered_by_[atom]) {
            support[id] = additive_ ? support[id] + c : std::max(support[id], c);
            if (--pending[id] == 0)
                fire(id);
        }
    }
    int h = 0;
    for (AtomId g : task_.goal_pos) {
        if (cost[g] == kDeadEnd)
            return kDeadEnd;
        h = additive_ ? h + cost[g] : std::max(h, cost[g]);
    }
    return h;
}

namespace {

struct SearchNode {
    State state;
    std::size_t parent;
    ActionId action;
    int g;
    bool closed = false;
};

constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

class BestFirstSearch {
public:
    BestFirstSearch(const ClassicalTask &task, const SearchBudget &budget, std::stop_token stop,
                    bool astar)
        : task_(task), budget_(budget), stop_(std::move(stop)), astar_(astar),
          heuristic_(task, /*additive=*/!astar),
          deadline_(std::chrono::steady_clock::now() + budget.wall_clock) {}

    SearchResult run(const State &start) {
        SearchResult result;
        result.strategy = astar_ ? "astar" : "gbfs";
        int h0 = heuristic_(start);
        if (h0 == RelaxedHeuristic::kDeadEnd) {
            result.status = SearchStatus::unsolvable;
            return result;
        }
        nodes_.push_back({start, kNoParent, 0, 0});
        index_.emplace(start, 0);
        push(0, h0);

        while (!open_.empty()) {
            if (out_of_budget(result.expansions)) {
                result.status = SearchStatus::budget_exhausted;
                return result;
            }
            auto [key, order, id] = open_.top();
            open_.pop();
            if (nodes_[id].closed)
                continue;
            nodes_[id].closed = true;
            ++result.expansions;
            if (task_.is_goal(nodes_[id].state)) {
                result.status = SearchStatus::plan_found;
                result.plan = extract(id);
                return result;
            }
            expand(id);
        }
        result.status = SearchStatus::unsolvable;
        return result;
    }

private:
    bool out_of_budget(std::size_t expansions) const {
        if (stop_.stop_requested() || expansions >= budget_.max_expansions)
            return true;
        return (expansions & 63) == 0 && std::chrono::steady_clock::now() >= deadline_;
    }

    void push(std::size_t id, int h) {
        int key = astar_ ? nodes_[id].g + h : h;
        open_.emplace(key, counter_++, id);
    }

    void expand(std::size_t id) {
        for (const auto &action : task_.actions) {
            if (!is_applicable(nodes_[id].state, action))
                continue;
            State next = apply(nodes_[id].state, action);
            int g = nodes_[id].g + 1;
            auto it = index_.find(next);
            if (it != index_.end()) {
                SearchNode &known = nodes_[it->second];
                // GBFS keeps the first path; A* reopens on a cheaper one.
                if (!astar_ || g >= known.g)
                    continue;
                known.g = g;
                known.parent = id;
                known.action = action.id;
                known.closed = false;
                push(it->second, heuristic_(known.state));
                continue;
            }
            int h = heuristic_(next);
            std::size_t child = nodes_.size();
            nodes_.push_back({std::move(next), id, action.id, g});
            index_.emplace(nodes_[child].state, child);
            if (h == RelaxedHeuristic::kDeadEnd) {
                nodes_[child].closed = true;
                continue;
            }
            push(child, h);
        }
    }

    std::vector<ActionId> extract(std::size_t id) const {
        std::vector<ActionId> plan;
        while (nodes_[id].parent != kNoParent) {
            plan.push_back(nodes_[id].action);
            id = nodes_[id].parent;
        }
        std::reverse(plan.begin(), plan.end());
        return plan;
    }

    const ClassicalTask &task_;
    SearchBudget budget_;
    std::stop_token stop_;
    bool astar_;
    RelaxedHeuristic heuristic_;
    std::chrono::steady_clock::time_point deadline_;
    std::vector<SearchNode> nodes_;
    std::unordered_map<State, std::size_t, StateHash> index_;
    using OpenEntry = std::tuple<int, std::uint64_t, std::size_t>;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open_;
    std::uint64_t counter_ = 0;
};

}  // namespace

SearchResult solve_astar(const ClassicalTask &task, const State &state, const SearchBudget &budget,
                         std::stop_token stop) {
    return BestFirstSearch(task, budget, std::move(stop), true).run(state);
}

SearchResult solve_gbfs(const ClassicalTask &task, const State &state, const SearchBudget &budget,
                        std::stop_token stop) {
    return BestFirstSearch(task, budget, std::move(stop), false).run(state);
}

SearchResult run_strategy(const Strategy &strategy, const ClassicalTask &task, const State &state,
                          const SearchBudget &budget, std::stop_token stop) {
    const SearchBudget &effective = strategy.budget ? *strategy.budget : budget;
    switch (strategy.kind) {
    case StrategyKind::astar_hmax:
        return solve_astar(task, state, effective, std::move(stop));
    case StrategyKind::gbfs_hadd:
        return solve_gbfs(task, state, effective, std::move(stop));
    case StrategyKind::external:
        if (!strategy.external)
            throw ContractError("external strategy without a configured planner");
        return strategy.external->solve(task, state, effective, std::move(stop));
    }
    throw ContractError("unknown strategy");
}

SearchResult race(std::span<const Strategy> strategies, const ClassicalTask &task,
                  const State &state, const SearchBudget &budget) {
    if (strategies.empty())
        throw ContractError("race needs at least one strategy");
    if (strategies.size() == 1)
        return run_strategy(strategies.front(), task, state, budget);

    std::mutex mutex;
    std::condition_variable done;
    std::optional<SearchResult> winner;
    std::size_t finished = 0;
    std::stop_source cancel;
    {
        std::vector<std::jthread> workers;
        workers.reserve(strategies.size());
        for (const Strategy &strategy : strategies) {
            workers.emplace_back([&, &strategy = strategy] {
                SearchResult r = run_strategy(strategy, task, state, budget, cancel.get_token());
                std::lock_guard lock(mutex);
                ++finished;
                if (!winner && r.status != SearchStatus::budget_exhausted) {
                    winner = std::move(r);
                    cancel.request_stop();
                }
                done.notify_all();
            });
        }
        std::unique_lock lock(mutex);
        done.wait(lock, [&] { return winner.has_value() || finished == strategies.size(); });
        cancel.request_stop();
    }
    if (winner)
        return std::move(*winner);
    SearchResult exhausted;
    exhausted.status = SearchStatus::budget_exhausted;
    exhausted.strategy = "race";
    return exhausted;
}

}  // namespace fondsp
