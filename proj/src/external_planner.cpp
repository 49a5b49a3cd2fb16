#include "fondsp/external_planner.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <csignal>
#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

namespace fondsp {

namespace fs = std::filesystem;

namespace {

std::string shell_quote(const std::string &s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

std::string normalize_line(std::string_view line) {
    std::string out;
    bool space = false;
    for (char c : line) {
        if (c == ';')
            break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = true;
            continue;
        }
        if (space && !out.empty() && out.back() != '(' && c != ')')
            out += ' ';
        space = false;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

struct TempDir {
    fs::path path;
    TempDir() {
        std::string templ = (fs::temp_directory_path() / "fondsp-XXXXXX").string();
        if (!mkdtemp(templ.data()))
            throw std::runtime_error("cannot create temporary directory");
        path = templ;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

// Objects that appear as arguments of banned actions.
std::set<std::string> marker_objects(const ClassicalTask &task) {
    std::set<std::string> out;
    for (const OutcomeRef &ref : task.banned)
        for (const auto &arg : task.base->actions[ref.nd_action].args)
            out.insert(arg);
    return out;
}

}  // namespace

ExternalPlanner::ExternalPlanner(std::string command, const pddl::Domain &domain,
                                 const pddl::Problem &problem)
    : command_(std::move(command)), domain_(&domain), problem_(&problem) {}

std::string ExternalPlanner::domain_pddl(const ClassicalTask &task) const {
    const pddl::Domain &d = *domain_;
    // Banned ground actions grouped by operator name.
    std::map<std::string, std::vector<const ClassicalAction *>> banned_by_op;
    for (const OutcomeRef &ref : task.banned) {
        auto it = std::find_if(task.actions.begin(), task.actions.end(),
                               [&](const ClassicalAction &a) { return a.origin == ref; });
        if (it != task.actions.end())
            banned_by_op[classical_operator_name(task, *it)].push_back(&*it);
    }

    std::ostringstream os;
    os << "(define (domain " << d.name << "-classical)\n"
       << "  (:requirements :strips :typing :negative-preconditions :equality)\n";
    if (!d.types.empty()) {
        os << "  (:types";
        for (const auto &t : d.types)
            os << ' ' << t.name << " - " << t.parent;
        os << ")\n";
    }
    std::vector<pddl::TypedName> constants = d.constants;
    for (const auto &o : problem_->objects)
        if (marker_objects(task).contains(o.name))
            constants.push_back(o);
    if (!constants.empty()) {
        os << "  (:constants";
        for (const auto &c : constants)
            os << ' ' << c.name << " - " << c.type;
        os << ")\n";
    }
    os << "  (:predicates";
    for (const auto &p : d.predicates) {
        os << "\n    (" << p.name;
        for (const auto &param : p.params)
            os << ' ' << param.name << " - " << param.type;
        os << ')';
    }
    auto schema_of = [&](const std::string &op_name) -> const pddl::NdOperator & {
        std::string base = op_name.substr(0, op_name.find("__o"));
        return *d.find_operator(base);
    };
    for (const auto &[op_name, actions] : banned_by_op) {
        os << "\n    (disallowed_" << op_name;
        for (const auto &param : schema_of(op_name).params)
            os << ' ' << param.name << " - " << param.type;
        os << ')';
    }
    os << ")\n";

    std::vector<std::string> clear_markers;
    for (const auto &[op_name, actions] : banned_by_op)
        for (const ClassicalAction *a : actions)
            clear_markers.push_back("(not (disallowed_" + classical_action_name(task, *a).substr(1) + ")");

    for (std::size_t s = 0; s < d.operators.size(); ++s) {
        const pddl::NdOperator &op = d.operators[s];
        std::vector<std::pair<std::string, std::size_t>> variants;
        if (task.all_outcome) {
            for (std::size_t k = 0; k < op.effects.size(); ++k)
                variants.emplace_back(op.effects.size() < 2 ? op.name : op.name + "__o" + std::to_string(k), k);
        } else {
            variants.emplace_back(op.name, task.choice.at(s));
        }
        for (const auto &[name, k] : variants) {
            os << "  (:action " << name << "\n    :parameters (";
            for (std::size_t i = 0; i < op.params.size(); ++i)
                os << (i ? " " : "") << op.params[i].name << " - " << op.params[i].type;
            os << ")\n    :precondition (and";
            for (const auto &l : op.precondition)
                os << ' ' << pddl::to_string(l);
            for (const auto &eq : op.equalities) {
                std::string e = "(= " + eq.lhs + " " + eq.rhs + ")";
                os << ' ' << (eq.negated ? "(not " + e + ")" : e);
            }
            if (banned_by_op.contains(name)) {
                os << " (not (disallowed_" << name;
                for (const auto &p : op.params)
                    os << ' ' << p.name;
                os << "))";
            }
            os << ")\n    :effect (and";
            for (const auto &l : op.effects[k].literals)
                os << ' ' << pddl::to_string(l);
            for (const auto &m : clear_markers)
                os << ' ' << m;
            os << "))\n";
        }
    }
    os << ")\n";
    return os.str();
}

std::string ExternalPlanner::problem_pddl(const ClassicalTask &task, const State &state) const {
    const pddl::Problem &p = *problem_;
    std::ostringstream os;
    os << "(define (problem " << p.name << "-classical)\n  (:domain " << domain_->name
       << "-classical)\n  (:objects";
    // Objects named by ground markers are declared as domain constants.
    const std::set<std::string> promoted = marker_objects(task);
    for (const auto &o : p.objects)
        if (!promoted.contains(o.name))
            os << ' ' << o.name << " - " << o.type;
    os << ")\n  (:init";
    std::set<std::string> facts(task.base->static_facts.begin(), task.base->static_facts.end());
    for (AtomId a : state.atoms())
        facts.insert(task.atom_name(a));
    for (const auto &f : facts)
        os << "\n    " << f;
    os << ")\n  (:goal (and";
    for (AtomId g : task.goal_pos)
        os << ' ' << task.atom_name(g);
    for (AtomId g : task.goal_neg)
        os << " (not " << task.atom_name(g) << ')';
    os << ")))\n";
    return os.str();
}

std::optional<std::vector<ActionId>> ExternalPlanner::parse_plan(const ClassicalTask &task,
                                                                  std::string_view text) {
    std::map<std::string, ActionId> by_name;
    for (const auto &a : task.actions)
        by_name.emplace(classical_action_name(task, a), a.id);
    std::vector<ActionId> plan;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::string n = normalize_line(line);
        if (n.empty())
            continue;
        if (n.front() != '(')
            n = "(" + n + ")";
        auto it = by_name.find(n);
        if (it == by_name.end())
            return std::nullopt;
        plan.push_back(it->second);
    }
    return plan;
}

SearchResult ExternalPlanner::solve(const ClassicalTask &task, const State &state,
                                    const SearchBudget &budget, std::stop_token stop) const {
    SearchResult result;
    result.strategy = "external";
    result.status = SearchStatus::budget_exhausted;

    TempDir dir;
    fs::path domain_file = dir.path / "domain.pddl";
    fs::path problem_file = dir.path / "problem.pddl";
    fs::path plan_file = dir.path / "plan.txt";
    std::ofstream(domain_file) << domain_pddl(task);
    std::ofstream(problem_file) << problem_pddl(task, state);
    std::string cmd = command_ + " " + shell_quote(domain_file.string()) + " " +
                      shell_quote(problem_file.string());

    pid_t pid = fork();
    if (pid < 0)
        return result;
    if (pid == 0) {
        setpgid(0, 0);
        int out = open(plan_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        int null = open("/dev/null", O_WRONLY);
        if (out >= 0)
            dup2(out, STDOUT_FILENO);
        if (null >= 0)
            dup2(null, STDERR_FILENO);
        execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char *>(nullptr));
        _exit(127);
    }
    auto deadline = std::chrono::steady_clock::now() + budget.wall_clock;
    int status = 0;
    for (;;) {
        pid_t r = waitpid(pid, &status, WNOHANG);
        if (r == pid)
            break;
        if (r < 0)
            return result;
        if (stop.stop_requested() || std::chrono::steady_clock::now() >= deadline) {
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            return result;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    if (!WIFEXITED(status))
        return result;
    int code = WEXITSTATUS(status);
    if (code == 10) {
        result.status = SearchStatus::unsolvable;
        return result;
    }
    if (code != 0)
        return result;
    std::ifstream in(plan_file);
    std::stringstream text;
    text << in.rdbuf();
    auto plan = parse_plan(task, text.str());
    if (!plan || !is_valid_plan(task, state, *plan))
        return result;
    result.status = SearchStatus::plan_found;
    result.plan = std::move(*plan);
    return result;
}

}  // namespace fondsp
