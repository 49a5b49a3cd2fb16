#pragma once

#include "fondsp/classical_planner.hpp"
#include "fondsp/determinizer.hpp"
#include "fondsp/policy.hpp"

#include <chrono>
#include <functional>
#include <unordered_set>
#include <vector>

namespace fondsp {

using StateSet = std::unordered_set<State, StateHash>;

struct ImageStep {
    State state;
    OutcomeRef action;  // classical action; action.nd_action is the FOND action
};

// Acyclic policy image: steps[i+1].state is the chosen outcome of steps[i],
// and `end` (the outcome of the last step, or the start state when empty)
// satisfies the goal.
struct PolicyImage {
    std::vector<ImageStep> steps;
    State end;
};

struct SolveTrace {
    std::size_t iterations = 0;
    std::size_t planner_calls = 0;
    std::size_t deadends_found = 0;
    std::size_t msp_backtracks = 0;
    std::size_t msp_bans = 0;
    std::size_t lemma2_violations = 0;
    double wall_seconds = 0.0;
};

struct SolveOptions {
    std::vector<Strategy> strategies{Strategy{StrategyKind::astar_hmax}};
    SearchBudget planner_budget{};
    std::chrono::milliseconds time_limit{60'000};
    std::size_t max_iterations = 1'000'000;
    // Re-check after every main-loop pass that each policy state reachable
    // from the initial state can still reach a terminal state.
    bool check_invariants = false;
    // Called with every image returned by make_safe_plan, the state it
    // starts from and the deadend set it had to avoid.
    std::function<void(const PolicyImage &, const State &, const StateSet &)> on_image;
};

// Terminal states of executing `policy` from `state`. Policy states not
// mapped (including `state` itself) are terminal.
std::vector<State> execute(const Policy &policy, const GroundTask &task, const State &state);

// Overwrites `policy` with the image's pairs, substituting each classical
// action by its non-deterministic origin.
void merge_image(Policy &policy, const PolicyImage &image);

enum class MspStatus { image, failure, budget_exhausted };

struct MspResult {
    MspStatus status = MspStatus::failure;
    PolicyImage image;
};

// Acyclic policy image from `start` to the goal that never produces a state
// in `deadends`, found by replanning over the determinization members.
MspResult make_safe_plan(const GroundTask &task, const DeterminizationSet &delta,
                         const State &start, const StateSet &deadends,
                         const SolveOptions &options, SolveTrace &trace,
                         std::chrono::steady_clock::time_point deadline);

enum class SolveStatus { solved, no_solution, budget_exhausted };

std::string_view to_string(SolveStatus status);

struct SolveResult {
    SolveStatus status = SolveStatus::no_solution;
    Policy policy;
    SolveTrace trace;
    std::vector<State> deadends;
};

SolveResult solve(const GroundTask &task, const DeterminizationSet &delta,
                  const SolveOptions &options = {});

}  // namespace fondsp
