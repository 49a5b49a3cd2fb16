#include "doctest.h"

#include "fondsp/errors.hpp"
#include "fondsp/grounder.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/random_tasks.hpp"

#include <algorithm>
#include <set>

using namespace fondsp;
using namespace fondsp::testing;

TEST_CASE("x/y grounds to two atoms and one action with two outcomes") {
    GroundTask t = ground_text(kXyDomain, kXyProblem);
    CHECK(t.num_atoms() == 2);
    REQUIRE(t.actions.size() == 1);
    CHECK(t.actions[0].name == "(a)");
    CHECK(t.actions[0].effects.size() == 2);
    CHECK(t.schemas.at(0).effect_sizes == std::vector<std::size_t>{1, 1});
}

TEST_CASE("x/y successor function") {
    GroundTask t = ground_text(kXyDomain, kXyProblem);
    const auto &a = t.actions[0];
    auto from_empty = apply(t.make_state({}), a);
    CHECK(from_empty.size() == 2);
    CHECK(std::count(from_empty.begin(), from_empty.end(), t.make_state({"(x)"})) == 1);
    CHECK(std::count(from_empty.begin(), from_empty.end(), t.make_state({"(y)"})) == 1);
    auto from_x = apply(t.make_state({"(x)"}), a);
    CHECK(from_x.size() == 2);
    CHECK(std::count(from_x.begin(), from_x.end(), t.make_state({"(x)", "(y)"})) == 1);
    CHECK(is_goal(t, t.make_state({"(x)", "(y)"})));
    CHECK_FALSE(is_goal(t, t.make_state({"(x)"})));
}

TEST_CASE("deterministic domains ground to single-outcome actions") {
    LoadedTask bw = load("blocksworld-det", "p01.pddl");
    REQUIRE_FALSE(bw.task.actions.empty());
    for (const auto &a : bw.task.actions) {
        CHECK(a.effects.size() == 1);
        if (is_applicable(bw.task.init, a))
            CHECK(apply(bw.task.init, a).size() == 1);
    }
}

TEST_CASE("tiny tireworld grounds to the hand-counted actions") {
    // Roads l1->l2->l3 are static, the spare is at l2 only: move-car(l1,l2),
    // move-car(l2,l3), loadtire(l2) and changetire survive.
    LoadedTask tw = load("tireworld", "p01.pddl");
    std::set<std::string> names;
    for (const auto &a : tw.task.actions)
        names.insert(a.name);
    CHECK(names == std::set<std::string>{"(move-car l1 l2)", "(move-car l2 l3)", "(loadtire l2)", "(changetire)"});
    const NdGroundAction *move = tw.task.find_action("(move-car l1 l2)");
    REQUIRE(move);
    CHECK(move->effects.size() == 2);
    CHECK(tw.task.find_action("(road l1 l2)") == nullptr);
    // Static road facts never appear as state atoms.
    CHECK(tw.task.atom_index.count("(road l1 l2)") == 0);
}

TEST_CASE("inequality preconditions prune self-stacking") {
    LoadedTask bw = load("blocksworld", "p01.pddl");
    for (const auto &a : bw.task.actions)
        if (a.args.size() == 2)
            CHECK(a.args[0] != a.args[1]);
}

TEST_CASE("applying an inapplicable action is a contract violation") {
    LoadedTask tw = load("tireworld", "p01.pddl");
    const NdGroundAction *change = tw.task.find_action("(changetire)");
    REQUIRE(change);
    CHECK_FALSE(is_applicable(tw.task.init, *change));
    CHECK_THROWS_AS(apply(tw.task.init, *change), ContractError);
}

TEST_CASE("grounding beyond the action cap raises a resource error") {
    GroundOptions options;
    options.max_actions = 1;
    CHECK_THROWS_AS(load("tireworld", "p01.pddl", options), ResourceError);
}

TEST_CASE("reachability pruning only drops actions that never apply") {
    for (const char *dir : {"tireworld", "blocksworld", "islands", "triangle-tireworld"}) {
        for (const char *problem : {"p01.pddl", "p02.pddl"}) {
            if (std::string(dir) == "triangle-tireworld" && std::string(problem) == "p02.pddl")
                continue;
            CAPTURE(dir);
            CAPTURE(problem);
            GroundOptions keep_all;
            keep_all.prune_unreachable = false;
            LoadedTask full = load(dir, problem, keep_all);
            LoadedTask pruned = load(dir, problem);
            std::set<std::string> kept;
            for (const auto &a : pruned.task.actions)
                kept.insert(a.name);
            CHECK(kept.size() <= full.task.actions.size());
            const auto reachable = reachable_states(full.task);
            for (const auto &a : full.task.actions) {
                if (kept.count(a.name))
                    continue;
                for (const AtomSet &s : reachable)
                    CHECK_FALSE(naive_applicable(s, a));
            }
        }
    }
}

TEST_CASE("successor function agrees with the set-based reference") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 200; ++round) {
        GroundTask t = random_task(rng);
        for (const AtomSet &s : reachable_states(t)) {
            State state = to_state(s, t.num_atoms());
            for (const auto &a : t.actions) {
                REQUIRE(is_applicable(state, a) == naive_applicable(s, a));
                if (!naive_applicable(s, a))
                    continue;
                std::set<AtomSet> got;
                for (const State &next : apply(state, a))
                    got.insert(to_set(next));
                CHECK(got == naive_successors(s, a));
            }
        }
    }
}

TEST_CASE("dump lists atoms and actions") {
    GroundTask t = ground_text(kXyDomain, kXyProblem);
    std::string text = dump(t);
    CHECK(text.find("(x)") != std::string::npos);
    CHECK(text.find("(a)") != std::string::npos);
}
