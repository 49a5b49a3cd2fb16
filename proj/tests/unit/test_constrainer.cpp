#include "doctest.h"

#include "fondsp/classical_planner.hpp"
#include "fondsp/constrainer.hpp"
#include "fondsp/errors.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/random_tasks.hpp"
#include "support/toy.hpp"

#include <algorithm>
#include <set>

using namespace fondsp;
using namespace fondsp::testing;

namespace {

OutcomeRef outcome_of(const GroundTask &t, const std::string &action, std::uint32_t effect) {
    const NdGroundAction *nd = t.find_action(action);
    REQUIRE(nd);
    return {nd->id, effect};
}

ActionId classical_id(const ClassicalTask &task, OutcomeRef ref) {
    for (const auto &a : task.actions)
        if (a.origin == ref)
            return a.id;
    FAIL("outcome not in task");
    return 0;
}

}  // namespace

TEST_CASE("empty ban list leaves the task unchanged") {
    LoadedTask bw = load("blocksworld-det", "p01.pddl");
    DeterminizationSet delta = compile(bw.task);
    const ClassicalTask &member = delta.member(0);
    ConstrainedTask c = constrain(member, bw.task.init, {});
    CHECK(c.task.extra_atoms.empty());
    CHECK(c.state == bw.task.init);
    REQUIRE(c.task.actions.size() == member.actions.size());
    for (std::size_t i = 0; i < member.actions.size(); ++i) {
        CHECK(c.task.actions[i].pre_neg == member.actions[i].pre_neg);
        CHECK(c.task.actions[i].effect == member.actions[i].effect);
    }
}

TEST_CASE("banning pick-up a adds one marker") {
    LoadedTask bw = load("blocksworld-det", "p01.pddl");
    DeterminizationSet delta = compile(bw.task);
    const ClassicalTask &member = delta.member(0);
    OutcomeRef pick = outcome_of(bw.task, "(pick-up a)", 0);
    std::vector<OutcomeRef> bans{pick, pick};
    ConstrainedTask c = constrain(member, bw.task.init, bans);
    REQUIRE(c.task.extra_atoms.size() == 1);
    CHECK(c.task.extra_atoms[0] == "(disallowed_pick-up a)");
    REQUIRE(c.disallowed.size() == 1);
    AtomId marker = c.disallowed[0];
    CHECK(c.state.contains(marker));
    for (const auto &a : c.task.actions) {
        CHECK(std::count(a.effect.del.begin(), a.effect.del.end(), marker) == 1);
        bool is_pick = a.origin == pick;
        CHECK((std::count(a.pre_neg.begin(), a.pre_neg.end(), marker) == 1) == is_pick);
    }
    CHECK_FALSE(is_applicable(c.state, c.task.actions[classical_id(c.task, pick)]));
}

TEST_CASE("banning an outcome absent from the task is a contract violation") {
    GroundTask t = ground_text(kToyDomain, kToyProblem);
    DeterminizationSet delta = compile(t);
    const ClassicalTask &member = delta.member(0);
    OutcomeRef a_other{t.find_action("(a)")->id, 1 - member.choice[t.find_action("(a)")->schema]};
    std::vector<OutcomeRef> bans{a_other};
    CHECK_THROWS_AS(constrain(member, t.init, bans), ContractError);
}

TEST_CASE("toy task: constrained plans are the original plans not starting with a ban") {
    GroundTask t = ground_text(kToyDomain, kToyProblem);
    REQUIRE(t.num_atoms() == 6);
    DeterminizationSet delta = compile(t);
    for (std::size_t m = 0; m < delta.size(); ++m) {
        const ClassicalTask &member = delta.member(m);
        CAPTURE(m);
        std::vector<OutcomeRef> bans;
        for (const auto &a : member.actions)
            if (t.actions[a.origin.nd_action].name == "(a)" || t.actions[a.origin.nd_action].name == "(e)")
                bans.push_back(a.origin);
        ConstrainedTask c = constrain(member, t.init, bans);
        std::set<ActionId> banned_ids;
        for (const OutcomeRef &ref : bans)
            banned_ids.insert(classical_id(member, ref));

        auto original = enumerate_plans(member, t.init, 4);
        auto constrained = enumerate_plans(c.task, c.state, 4);
        std::set<std::vector<ActionId>> expected;
        for (const auto &plan : original)
            if (plan.empty() || !banned_ids.count(plan.front()))
                expected.insert(plan);
        std::set<std::vector<ActionId>> got(constrained.begin(), constrained.end());
        CHECK(got == expected);

        bool later_use = false;
        for (const auto &plan : got) {
            REQUIRE_FALSE(plan.empty());
            CHECK_FALSE(banned_ids.count(plan.front()));
            for (std::size_t i = 1; i < plan.size(); ++i)
                later_use = later_use || banned_ids.count(plan[i]);
        }
        CHECK(later_use);
    }
}

TEST_CASE("planner plans on constrained random tasks never start with a ban") {
    std::mt19937_64 rng(31);
    const std::vector<Strategy> strategies{Strategy{StrategyKind::astar_hmax}, Strategy{StrategyKind::gbfs_hadd}};
    for (int round = 0; round < 150; ++round) {
        GroundTask t = random_task(rng);
        DeterminizationSet delta = compile(t);
        const ClassicalTask &member = delta.member(delta.size() - 1);
        std::vector<OutcomeRef> bans;
        std::set<ActionId> banned_ids;
        for (const auto &a : member.actions)
            if (rng() % 3 == 0) {
                bans.push_back(a.origin);
                banned_ids.insert(a.id);
            }
        ConstrainedTask c = constrain(member, t.init, bans);
        for (const Strategy &s : strategies) {
            SearchResult r = run_strategy(s, c.task, c.state, {});
            REQUIRE(r.status != SearchStatus::budget_exhausted);
            if (r.status != SearchStatus::plan_found)
                continue;
            CHECK(is_valid_plan(c.task, c.state, r.plan));
            CHECK(is_valid_plan(member, t.init, r.plan));
            if (!r.plan.empty())
                CHECK_FALSE(banned_ids.count(r.plan.front()));
        }
        // Solvability matches the original task without banned first steps.
        bool expected = t.init.contains_all(member.goal_pos) && t.init.contains_none(member.goal_neg);
        for (const auto &a : member.actions)
            if (!banned_ids.count(a.id) && is_applicable(t.init, a))
                expected = expected || bfs_plan_length(member, apply(t.init, a)).has_value();
        CHECK(bfs_plan_length(c.task, c.state).has_value() == expected);
    }
}
