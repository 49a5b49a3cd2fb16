#pragma once

#include "fondsp/determinizer.hpp"

#include <chrono>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

namespace fondsp {

class ExternalPlanner;

struct SearchBudget {
    std::chrono::milliseconds wall_clock{60'000};
    std::size_t max_expansions = 50'000'000;
};

enum class SearchStatus { plan_found, unsolvable, budget_exhausted };

std::string_view to_string(SearchStatus status);

struct SearchResult {
    SearchStatus status = SearchStatus::budget_exhausted;
    std::vector<ActionId> plan;  // classical action ids of the searched task
    std::size_t expansions = 0;
    std::string strategy;
};

enum class StrategyKind { astar_hmax, gbfs_hadd, external };

struct Strategy {
    Strategy() = default;
    Strategy(StrategyKind kind, std::optional<SearchBudget> budget = std::nullopt,
             const ExternalPlanner *external = nullptr)
        : kind(kind), budget(budget), external(external) {}

    StrategyKind kind = StrategyKind::astar_hmax;
    // Overrides the budget passed to race() for this strategy only.
    std::optional<SearchBudget> budget;
    const ExternalPlanner *external = nullptr;

    std::string name() const;
};

// Parses a comma-separated list such as "astar,gbfs".
std::vector<Strategy> parse_strategies(std::string_view spec);

// Delete-relaxation estimates over positive preconditions and goals.
// Returns kDeadEnd when the relaxed goal is unreachable.
class RelaxedHeuristic {
public:
    static constexpr int kDeadEnd = std::numeric_limits<int>::max();

    RelaxedHeuristic(const ClassicalTask &task, bool additive);
    int operator()(const State &state) const;

private:
    const ClassicalTask &task_;
    bool additive_;
    std::vector<std::vector<ActionId>> triggered_by_;
    std::vector<ActionId> unconditional_;
};

// A* with h_max; plans are shortest. Exhausting the open list proves the task
// unsolvable from `state`.
SearchResult solve_astar(const ClassicalTask &task, const State &state, const SearchBudget &budget,
                         std::stop_token stop = {});

// Greedy best-first search with h_add and full duplicate detection.
SearchResult solve_gbfs(const ClassicalTask &task, const State &state, const SearchBudget &budget,
                        std::stop_token stop = {});

SearchResult run_strategy(const Strategy &strategy, const ClassicalTask &task, const State &state,
                          const SearchBudget &budget, std::stop_token stop = {});

// Runs all strategies concurrently. The first plan or unsolvability proof
// wins and the others are cancelled; budget_exhausted only if all run out.
SearchResult race(std::span<const Strategy> strategies, const ClassicalTask &task,
                  const State &state, const SearchBudget &budget);

bool is_applicable(const State &state, const ClassicalAction &action);
State apply(const State &state, const ClassicalAction &action);

// True if `plan` is applicable from `state` and ends in a goal state.
bool is_valid_plan(const ClassicalTask &task, const State &state, std::span<const ActionId> plan);

}  // namespace fondsp
