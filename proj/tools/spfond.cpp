// Command-line front end: solve, validate, bench, ground, determinize.

#include "fondsp/bench.hpp"
#include "fondsp/classical_planner.hpp"
#include "fondsp/determinizer.hpp"
#include "fondsp/errors.hpp"
#include "fondsp/external_planner.hpp"
#include "fondsp/grounder.hpp"
#include "fondsp/pddl.hpp"
#include "fondsp/policy_io.hpp"
#include "fondsp/safe_planner.hpp"
#include "fondsp/validator.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace fondsp;

constexpr int kExitSolved = 0;
constexpr int kExitNoSolution = 10;
constexpr int kExitBudget = 20;
constexpr int kExitUsage = 2;
constexpr int kExitError = 1;

struct PlannerFlags {
    std::string ordering = "desc";
    std::string ordering_key = "size";
    std::size_t cap = 64;
    bool ndp2 = false;
    double budget_seconds = 60.0;
    std::string strategies = "astar,gbfs";
    std::string external;
    bool check_invariants = false;

    void add_to(CLI::App &cmd) {
        cmd.add_option("--ordering", ordering, "Single-outcome ranking: desc or asc")
            ->check(CLI::IsMember({"desc", "asc"}));
        cmd.add_option("--ordering-key", ordering_key)
            ->check(CLI::IsMember({"size", "count"}))
            ->group("");
        cmd.add_option("--cap", cap, "Maximum number of single-outcome domains");
        cmd.add_flag("--ndp2", ndp2, "All-outcome determinization only");
        cmd.add_option("--budget", budget_seconds, "Time limit per problem in seconds");
        cmd.add_option("--strategies", strategies, "Comma-separated embedded planners (astar,gbfs)");
        cmd.add_option("--external-planner", external,
                       "Command run as CMD DOMAIN PROBLEM; raced with the embedded planners");
        cmd.add_flag("--check-invariants", check_invariants,
                     "Check for inescapable policy cycles after every iteration");
    }

    DeterminizeOptions determinize() const {
        DeterminizeOptions o;
        o.ordering = ordering == "asc" ? Ordering::ascending : Ordering::descending;
        o.key = ordering_key == "count" ? OrderingKey::effect_count : OrderingKey::effect_size;
        o.cap = cap;
        o.ndp2 = ndp2;
        return o;
    }

    SolveOptions solve() const {
        SolveOptions o;
        o.strategies = parse_strategies(strategies);
        o.time_limit = std::chrono::milliseconds(static_cast<long long>(budget_seconds * 1000));
        o.planner_budget.wall_clock = o.time_limit;
        o.check_invariants = check_invariants;
        return o;
    }
};

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
}

int run_solve(const std::string &domain_file, const std::string &problem_file,
              const PlannerFlags &flags, const std::string &policy_out, const std::string &trace_out) {
    pddl::Domain domain = pddl::load_domain(domain_file);
    pddl::Problem problem = pddl::load_problem(problem_file, domain);
    GroundTask task = ground(domain, problem);
    DeterminizationSet delta(task, flags.determinize());
    SolveOptions options = flags.solve();
    std::optional<ExternalPlanner> external;
    if (!flags.external.empty()) {
        external.emplace(flags.external, domain, problem);
        options.strategies.push_back({StrategyKind::external, std::nullopt, &*external});
    }
    SolveResult result = solve(task, delta, options);

    std::cout << "status: " << to_string(result.status) << "\n"
              << "policy size: " << result.policy.size() << "\n"
              << "trace: " << trace_to_json(result.trace).dump() << "\n";
    if (result.status == SolveStatus::solved) {
        PolicyVerdict verdict = classify(result.policy, task);
        std::cout << "validator: " << to_string(verdict.solution_class) << "\n";
        for (const auto &[state, action] : result.policy.sorted_entries())
            std::cout << "  " << format_state(task, state) << " -> " << task.actions[action].name << "\n";
    }
    if (!policy_out.empty()) {
        bool dot = policy_out.size() >= 4 && policy_out.ends_with(".dot");
        write_file(policy_out, dot ? policy_to_dot(result.policy, task)
                                   : policy_to_json(result.policy, task).dump(2) + "\n");
    }
    if (!trace_out.empty())
        write_file(trace_out, trace_to_json(result.trace).dump(2) + "\n");

    switch (result.status) {
    case SolveStatus::solved:
        return kExitSolved;
    case SolveStatus::no_solution:
        return kExitNoSolution;
    case SolveStatus::budget_exhausted:
        return kExitBudget;
    }
    return kExitError;
}

int run_validate(const std::string &domain_file, const std::string &problem_file,
                 const std::string &policy_file) {
    pddl::Domain domain = pddl::load_domain(domain_file);
    pddl::Problem problem = pddl::load_problem(problem_file, domain);
    GroundTask task = ground(domain, problem);
    std::ifstream in(policy_file);
    if (!in)
        throw std::runtime_error("cannot open " + policy_file);
    Policy policy = policy_from_json(nlohmann::json::parse(in), task);
    PolicyVerdict verdict = classify(policy, task);
    nlohmann::json out{{"class", std::string(to_string(verdict.solution_class))},
                       {"reachable_states", verdict.reachable_states},
                       {"reason", verdict.reason}};
    if (verdict.witness) {
        nlohmann::json atoms = nlohmann::json::array();
        for (AtomId a : verdict.witness->atoms())
            atoms.push_back(task.atoms[a]);
        out["witness"] = atoms;
    }
    std::cout << out.dump(2) << "\n";
    return verdict.is_strong() ? 0 : kExitError;
}

int run_bench(const std::string &manifest, const PlannerFlags &flags, std::size_t jobs,
              const std::string &csv_out, const std::string &json_out) {
    BenchConfig config;
    config.determinize = flags.determinize();
    config.solve = flags.solve();
    config.jobs = jobs;
    config.external_planner = flags.external;
    SuiteReport report = run_suite(load_manifest(manifest), config);
    for (const auto &r : report.records) {
        std::cout << r.domain << '/' << r.problem << ": " << to_string(r.status)
                  << " policy=" << r.policy_size << " calls=" << r.trace.planner_calls
                  << " time=" << r.trace.wall_seconds << "s";
        if (!r.error.empty())
            std::cout << " error=" << r.error;
        std::cout << "\n";
    }
    std::cout << "\n" << report.summary_table();
    if (!csv_out.empty())
        write_file(csv_out, report.cactus_csv());
    if (!json_out.empty())
        write_file(json_out, report.to_json().dump(2) + "\n");
    return 0;
}

int run_ground(const std::string &domain_file, const std::string &problem_file, bool dump_task) {
    pddl::Domain domain = pddl::load_domain(domain_file);
    pddl::Problem problem = pddl::load_problem(problem_file, domain);
    GroundTask task = ground(domain, problem);
    if (dump_task)
        std::cout << dump(task);
    else
        std::cout << task.num_atoms() << " atoms, " << task.actions.size() << " actions\n";
    return 0;
}

int run_determinize(const std::string &domain_file, const std::string &problem_file,
                    const PlannerFlags &flags, bool list) {
    pddl::Domain domain = pddl::load_domain(domain_file);
    pddl::Problem problem = pddl::load_problem(problem_file, domain);
    GroundTask task = ground(domain, problem);
    DeterminizationSet delta(task, flags.determinize());
    std::cout << delta.size() << " classical domains (" << delta.num_single_outcome()
              << " single-outcome of " << delta.combinations() << " combinations + all-outcome)\n";
    if (!list)
        return 0;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        const ClassicalTask &member = delta.member(i);
        std::cout << i << ": ";
        if (member.all_outcome) {
            std::cout << "all-outcome";
        } else {
            bool first = true;
            for (std::size_t s = 0; s < task.schemas.size(); ++s) {
                if (task.schemas[s].num_effects() < 2)
                    continue;
                std::cout << (first ? "" : " ") << task.schemas[s].name << "=o" << member.choice[s];
                first = false;
            }
        }
        std::cout << " (" << member.actions.size() << " actions)\n";
    }
    return 0;
}

// Classical planner entry point matching the external-planner protocol.
int run_classical(const std::string &domain_file, const std::string &problem_file) {
    pddl::Domain domain = pddl::load_domain(domain_file);
    pddl::Problem problem = pddl::load_problem(problem_file, domain);
    for (const auto &op : domain.operators)
        if (op.effects.size() != 1)
            throw std::runtime_error("operator " + op.name + " is non-deterministic");
    GroundTask task = ground(domain, problem);
    DeterminizationSet delta(task, {});
    const ClassicalTask &classical = delta.member(0);
    SearchResult r = solve_astar(classical, task.init, SearchBudget{});
    if (r.status == SearchStatus::unsolvable)
        return kExitNoSolution;
    if (r.status != SearchStatus::plan_found)
        return kExitBudget;
    for (ActionId id : r.plan)
        std::cout << classical_action_name(classical, classical.actions[id]) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Strong cyclic FOND planning by single-outcome determinization and replanning"};
    app.require_subcommand(1);

    std::string domain_file, problem_file, policy_file, manifest, policy_out, trace_out, csv_out,
        json_out;
    PlannerFlags flags;
    bool dump_task = false;
    bool list = false;
    std::size_t jobs = 1;

    auto *solve_cmd = app.add_subcommand("solve", "Compute a strong cyclic policy");
    solve_cmd->add_option("domain", domain_file)->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("problem", problem_file)->required()->check(CLI::ExistingFile);
    flags.add_to(*solve_cmd);
    solve_cmd->add_option("--policy-out", policy_out, "Write the policy as .json or .dot");
    solve_cmd->add_option("--trace-out", trace_out, "Write solver counters as JSON");

    auto *validate_cmd = app.add_subcommand("validate", "Classify a policy JSON file");
    validate_cmd->add_option("domain", domain_file)->required()->check(CLI::ExistingFile);
    validate_cmd->add_option("problem", problem_file)->required()->check(CLI::ExistingFile);
    validate_cmd->add_option("policy", policy_file)->required()->check(CLI::ExistingFile);

    auto *bench_cmd = app.add_subcommand("bench", "Run a manifest of problems");
    bench_cmd->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
    flags.add_to(*bench_cmd);
    bench_cmd->add_option("--jobs", jobs, "Problems solved in parallel");
    bench_cmd->add_option("--csv", csv_out, "Write cactus data (seconds,solved)");
    bench_cmd->add_option("--json", json_out, "Write per-problem records");

    auto *ground_cmd = app.add_subcommand("ground", "Ground a problem");
    ground_cmd->add_option("domain", domain_file)->required()->check(CLI::ExistingFile);
    ground_cmd->add_option("problem", problem_file)->required()->check(CLI::ExistingFile);
    ground_cmd->add_flag("--dump", dump_task, "Print every atom and action");

    auto *det_cmd = app.add_subcommand("determinize", "Show the ordered classical compilations");
    det_cmd->add_option("domain", domain_file)->required()->check(CLI::ExistingFile);
    det_cmd->add_option("problem", problem_file)->required()->check(CLI::ExistingFile);
    flags.add_to(*det_cmd);
    det_cmd->add_flag("--list", list, "List every member");

    auto *classical_cmd = app.add_subcommand("classical", "Solve a deterministic PDDL problem");
    classical_cmd->group("");
    classical_cmd->add_option("domain", domain_file)->required()->check(CLI::ExistingFile);
    classical_cmd->add_option("problem", problem_file)->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*solve_cmd)
            return run_solve(domain_file, problem_file, flags, policy_out, trace_out);
        if (*validate_cmd)
            return run_validate(domain_file, problem_file, policy_file);
        if (*bench_cmd)
            return run_bench(manifest, flags, jobs, csv_out, json_out);
        if (*ground_cmd)
            return run_ground(domain_file, problem_file, dump_task);
        if (*det_cmd)
            return run_determinize(domain_file, problem_file, flags, list);
        if (*classical_cmd)
            return run_classical(domain_file, problem_file);
    } catch (const ContractError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
