#include "doctest.h"

#include "fondsp/constrainer.hpp"
#include "fondsp/external_planner.hpp"
#include "fondsp/safe_planner.hpp"
#include "fondsp/validator.hpp"
#include "support/corpus.hpp"

#include <filesystem>
#include <fstream>

#ifndef FONDSP_SPFOND_BIN
#error "FONDSP_SPFOND_BIN must name the spfond executable"
#endif

using namespace fondsp;
using namespace fondsp::testing;

namespace {

const std::string kClassical = std::string(FONDSP_SPFOND_BIN) + " classical";

std::string script(const std::string &name, const std::string &body) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << "#!/bin/sh\n" << body;
    std::filesystem::permissions(path, std::filesystem::perms::owner_all);
    return path.string();
}

}  // namespace

TEST_CASE("emitted classical PDDL re-parses and encodes bans") {
    LoadedTask road = load("tireworld", "p02.pddl");
    DeterminizationSet delta = compile(road.task);
    ExternalPlanner planner(kClassical, *road.domain, *road.problem);
    const ClassicalTask &all = delta.member(delta.size() - 1);
    std::vector<OutcomeRef> bans{all.actions[0].origin};
    ConstrainedTask c = constrain(all, road.task.init, bans);
    std::string domain_text = planner.domain_pddl(c.task);
    std::string problem_text = planner.problem_pddl(c.task, c.state);
    CHECK(domain_text.find("disallowed_") != std::string::npos);
    CHECK(domain_text.find("move-car__o1") != std::string::npos);
    pddl::Domain d = pddl::parse_domain(domain_text);
    pddl::Problem p = pddl::parse_problem(problem_text, d);
    for (const auto &op : d.operators)
        CHECK(op.effects.size() == 1);
    CHECK_FALSE(p.init.empty());
}

TEST_CASE("external planner plans replay on the task") {
    LoadedTask road = load("tireworld", "p02.pddl");
    DeterminizationSet delta = compile(road.task);
    ExternalPlanner planner(kClassical, *road.domain, *road.problem);
    for (std::size_t m = 0; m < delta.size(); ++m) {
        const ClassicalTask &member = delta.member(m);
        SearchResult ours = solve_astar(member, road.task.init, {});
        SearchResult theirs = planner.solve(member, road.task.init, {});
        CAPTURE(m);
        CHECK(theirs.status == ours.status);
        if (theirs.status == SearchStatus::plan_found) {
            CHECK(is_valid_plan(member, road.task.init, theirs.plan));
            CHECK(theirs.plan.size() == ours.plan.size());
        }
    }
}

TEST_CASE("SP with only the external strategy solves x/y") {
    LoadedTask xy = load("xy", "p01.pddl");
    DeterminizationSet delta = compile(xy.task);
    ExternalPlanner planner(kClassical, *xy.domain, *xy.problem);
    SolveOptions options;
    options.strategies = {Strategy{StrategyKind::external, std::nullopt, &planner}};
    SolveResult r = solve(xy.task, delta, options);
    REQUIRE(r.status == SolveStatus::solved);
    CHECK(r.policy.size() == 3);
    CHECK(classify(r.policy, xy.task).is_strong());
}

TEST_CASE("external exit codes and bad plans") {
    LoadedTask xy = load("xy", "p01.pddl");
    DeterminizationSet delta = compile(xy.task);
    const ClassicalTask &all = delta.member(delta.size() - 1);
    auto run = [&](const std::string &cmd, SearchBudget budget = {}) {
        return ExternalPlanner(cmd, *xy.domain, *xy.problem).solve(all, xy.task.init, budget).status;
    };
    CHECK(run(script("fondsp-unsolv.sh", "exit 10\n")) == SearchStatus::unsolvable);
    CHECK(run(script("fondsp-crash.sh", "exit 3\n")) == SearchStatus::budget_exhausted);
    CHECK(run(script("fondsp-junk.sh", "echo '(fly away)'\nexit 0\n")) == SearchStatus::budget_exhausted);
    CHECK(run(script("fondsp-short.sh", "echo '(a__o0)'\nexit 0\n")) == SearchStatus::budget_exhausted);
    CHECK(run(script("fondsp-good.sh", "echo '(a__o0)'\necho '(A__O1)'\nexit 0\n")) == SearchStatus::plan_found);
    SearchBudget quick;
    quick.wall_clock = std::chrono::milliseconds(200);
    auto start = std::chrono::steady_clock::now();
    CHECK(run(script("fondsp-slow.sh", "sleep 30\n"), quick) == SearchStatus::budget_exhausted);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
}

TEST_CASE("plan text parsing") {
    LoadedTask xy = load("xy", "p01.pddl");
    DeterminizationSet delta = compile(xy.task);
    const ClassicalTask &all = delta.member(delta.size() - 1);
    auto plan = ExternalPlanner::parse_plan(all, "; cost 2\n(a__o1)\n\n(a__o0)\n");
    REQUIRE(plan);
    CHECK(plan->size() == 2);
    CHECK_FALSE(ExternalPlanner::parse_plan(all, "(b)\n"));
}
