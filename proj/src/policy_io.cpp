#include "fondsp/policy_io.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace fondsp {

namespace {

struct PolicyGraph {
    std::vector<State> states;
    std::vector<std::vector<std::size_t>> successors;
};

PolicyGraph reachable_graph(const Policy &policy, const GroundTask &task) {
    PolicyGraph g;
    std::unordered_map<State, std::size_t, StateHash> index{{task.init, 0}};
    g.states.push_back(task.init);
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        g.successors.emplace_back();
        auto action = policy.action(g.states[i]);
        if (!action || !is_applicable(g.states[i], task.actions[*action]))
            continue;
        for (State &next : apply(g.states[i], task.actions[*action])) {
            auto [it, inserted] = index.emplace(next, g.states.size());
            if (inserted)
                g.states.push_back(std::move(next));
            g.successors[i].push_back(it->second);
        }
    }
    return g;
}

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

nlohmann::json policy_to_json(const Policy &policy, const GroundTask &task) {
    PolicyGraph g = reachable_graph(policy, task);
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        nlohmann::json atoms = nlohmann::json::array();
        for (AtomId a : g.states[i].atoms())
            atoms.push_back(task.atoms[a]);
        auto action = policy.action(g.states[i]);
        entries.push_back({{"state", atoms},
                           {"action", action ? nlohmann::json(task.actions[*action].name) : nlohmann::json()},
                           {"successors", g.successors[i]}});
    }
    return {{"policy", entries}};
}

Policy policy_from_json(const nlohmann::json &doc, const GroundTask &task) {
    Policy policy;
    for (const auto &entry : doc.at("policy")) {
        if (entry.at("action").is_null())
            continue;
        State s(task.num_atoms());
        for (const auto &atom : entry.at("state")) {
            auto it = task.atom_index.find(atom.get<std::string>());
            if (it == task.atom_index.end())
                throw std::runtime_error("unknown atom in policy: " + atom.get<std::string>());
            s.set(it->second);
        }
        std::string name = entry.at("action").get<std::string>();
        const NdGroundAction *action = task.find_action(name);
        if (!action)
            throw std::runtime_error("unknown action in policy: " + name);
        policy.set(s, action->id);
    }
    return policy;
}

std::string policy_to_dot(const Policy &policy, const GroundTask &task) {
    PolicyGraph g = reachable_graph(policy, task);
    std::ostringstream os;
    os << "digraph policy {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n"
       << "  init [shape=point];\n  init -> s0;\n";
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        std::string label;
        for (AtomId a : g.states[i].atoms())
            label += (label.empty() ? "" : "\\n") + escape(task.atoms[a]);
        os << "  s" << i << " [label=\"" << label << "\"";
        if (is_goal(task, g.states[i]))
            os << ", shape=doublecircle, color=green";
        else if (!policy.contains(g.states[i]))
            os << ", color=red";
        os << "];\n";
    }
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        auto action = policy.action(g.states[i]);
        if (!action)
            continue;
        for (std::size_t j : g.successors[i])
            os << "  s" << i << " -> s" << j << " [label=\"" << escape(task.actions[*action].name)
               << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

nlohmann::json trace_to_json(const SolveTrace &trace) {
    return {{"iterations", trace.iterations},
            {"planner_calls", trace.planner_calls},
            {"deadends_found", trace.deadends_found},
            {"msp_backtracks", trace.msp_backtracks},
            {"msp_bans", trace.msp_bans},
            {"lemma2_violations", trace.lemma2_violations},
            {"wall_seconds", trace.wall_seconds}};
}

}  // namespace fondsp
