#pragma once

#include "fondsp/classical_planner.hpp"
#include "fondsp/pddl.hpp"

#include <string>

namespace fondsp {

// Runs a black-box classical planner as `<command> <domain.pddl> <problem.pddl>`.
// The command prints one "(name arg ...)" action per line and exits with 0
// (plan found), 10 (proven unsolvable) or anything else (unknown). Plans that
// do not replay on the task are treated as unknown.
class ExternalPlanner {
public:
    ExternalPlanner(std::string command, const pddl::Domain &domain, const pddl::Problem &problem);

    SearchResult solve(const ClassicalTask &task, const State &state, const SearchBudget &budget,
                       std::stop_token stop = {}) const;

    // Lifted classical domain for one determinization member. Banned actions
    // are encoded with disallowed_<operator> predicates.
    std::string domain_pddl(const ClassicalTask &task) const;
    std::string problem_pddl(const ClassicalTask &task, const State &state) const;

    // Maps plan text onto action ids of `task`; nullopt on unknown actions.
    static std::optional<std::vector<ActionId>> parse_plan(const ClassicalTask &task,
                                                           std::string_view text);

    const std::string &command() const { return command_; }

private:
    std::string command_;
    const pddl::Domain *domain_;
    const pddl::Problem *problem_;
};

}  // namespace fondsp
