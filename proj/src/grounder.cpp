#include "fondsp/grounder.hpp"

#include "fondsp/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

namespace fondsp {

AtomId GroundTask::intern(const std::string &atom) {
    auto [it, inserted] = atom_index.emplace(atom, static_cast<AtomId>(atoms.size()));
    if (inserted) {
        atoms.push_back(atom);
        init.resize(atoms.size());
    }
    return it->second;
}

const NdGroundAction *GroundTask::find_action(const std::string &name) const {
    for (const auto &a : actions)
        if (a.name == name)
            return &a;
    return nullptr;
}

State GroundTask::make_state(std::initializer_list<std::string> true_atoms) const {
    State s(num_atoms());
    for (const auto &a : true_atoms) {
        auto it = atom_index.find(a);
        if (it == atom_index.end())
            throw ContractError("unknown atom " + a);
        s.set(it->second);
    }
    return s;
}

namespace {

using pddl::Atom;
using pddl::Literal;

std::string ground_text(const std::string &pred, const std::vector<std::string> &args) {
    std::string s = "(" + pred;
    for (const auto &a : args)
        s += " " + a;
    return s + ")";
}

// Instantiated operator before atoms are interned.
struct Candidate {
    std::size_t op;
    std::vector<std::string> args;
    std::vector<std::string> pre_pos;
    std::vector<std::string> pre_neg;
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> effects;
};

class Grounder {
public:
    Grounder(const pddl::Domain &domain, const pddl::Problem &problem, const GroundOptions &options)
        : domain_(domain), problem_(problem), options_(options) {
        for (const auto &op : domain.operators)
            for (const auto &eff : op.effects)
                for (const auto &lit : eff.literals)
                    fluent_predicates_.insert(lit.atom.predicate);
        for (const auto &atom : problem.init) {
            std::string text = ground_text(atom.predicate, atom.args);
            if (fluent_predicates_.contains(atom.predicate))
                init_fluents_.push_back(text);
            else
                static_true_.insert(text);
        }
        objects_ = problem.all_objects();
    }

    GroundTask run() {
        for (std::size_t i = 0; i < domain_.operators.size(); ++i)
            instantiate(i);

        std::vector<const Candidate *> reachable = relaxed_reachable();

        GroundTask task;
        for (const auto &op : domain_.operators) {
            Schema schema{op.name, {}};
            for (const auto &eff : op.effects)
                schema.effect_sizes.push_back(eff.size());
            task.schemas.push_back(std::move(schema));
        }
        std::vector<std::string> sorted_init = init_fluents_;
        std::sort(sorted_init.begin(), sorted_init.end());
        for (const auto &a : sorted_init)
            task.intern(a);
        for (const Candidate *c : reachable) {
            NdGroundAction action;
            action.id = static_cast<ActionId>(task.actions.size());
            action.name = ground_text(domain_.operators[c->op].name, c->args);
            action.schema = c->op;
            action.args = c->args;
            action.pre_pos = intern_all(task, c->pre_pos);
            action.pre_neg = intern_all(task, c->pre_neg);
            for (const auto &[add, del] : c->effects) {
                GroundEffect eff;
                eff.add = intern_all(task, add);
                eff.del = intern_all(task, del);
                // (s - e-) U e+ : an atom both deleted and added ends up true.
                std::erase_if(eff.del, [&](AtomId a) {
                    return std::find(eff.add.begin(), eff.add.end(), a) != eff.add.end();
                });
                action.effects.push_back(std::move(eff));
            }
            task.actions.push_back(std::move(action));
        }
        std::vector<std::pair<std::string, bool>> static_initial;
        for (const auto &lit : problem_.goal) {
            std::string text = ground_text(lit.atom.predicate, lit.atom.args);
            if (!fluent_predicates_.contains(lit.atom.predicate)) {
                bool holds = static_true_.contains(text);
                if (holds != lit.negated)
                    continue;
                // Unsatisfiable static goal: keep it as a frozen atom.
                static_initial.emplace_back(text, holds);
            }
            AtomId id = task.intern(text);
            (lit.negated ? task.goal_neg : task.goal_pos).push_back(id);
        }
        for (const auto &a : init_fluents_)
            task.init.set(task.atom_index.at(a));
        for (const auto &[text, holds] : static_initial)
            if (holds)
                task.init.set(task.atom_index.at(text));
        normalize(task.goal_pos);
        normalize(task.goal_neg);
        task.static_facts.assign(static_true_.begin(), static_true_.end());
        return task;
    }

private:
    static void normalize(std::vector<AtomId> &ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }

    static std::vector<AtomId> intern_all(GroundTask &task, const std::vector<std::string> &atoms) {
        std::vector<AtomId> ids;
        ids.reserve(atoms.size());
        for (const auto &a : atoms)
            ids.push_back(task.intern(a));
        normalize(ids);
        return ids;
    }

    std::string substitute(const std::string &term,
                           const std::vector<pddl::TypedName> &params,
                           const std::vector<std::string> &binding) const {
        if (term.empty() || term.front() != '?')
            return term;
        for (std::size_t i = 0; i < params.size(); ++i)
            if (params[i].name == term)
                return binding[i];
        return term;
    }

    // Number of leading parameters that must be bound before `terms` is ground.
    std::size_t binding_depth(const std::vector<std::string> &terms,
                              const std::vector<pddl::TypedName> &params) const {
        std::size_t depth = 0;
        for (const auto &t : terms) {
            if (t.empty() || t.front() != '?')
                continue;
            for (std::size_t i = 0; i < params.size(); ++i)
                if (params[i].name == t)
                    depth = std::max(depth, i + 1);
        }
        return depth;
    }

    // Checks the static literals and equalities that become ground exactly
    // when the first `bound` parameters are assigned.
    bool statics_hold(const pddl::NdOperator &op, const std::vector<std::string> &binding,
                      std::size_t bound) const {
        for (const auto &lit : op.precondition) {
            if (fluent_predicates_.contains(lit.atom.predicate) ||
                binding_depth(lit.atom.args, op.params) != bound)
                continue;
            std::vector<std::string> args;
            for (const auto &t : lit.atom.args)
                args.push_back(substitute(t, op.params, binding));
            bool holds = static_true_.contains(ground_text(lit.atom.predicate, args));
            if (holds == lit.negated)
                return false;
        }
        for (const auto &eq : op.equalities) {
            if (binding_depth({eq.lhs, eq.rhs}, op.params) != bound)
                continue;
            bool same = substitute(eq.lhs, op.params, binding) == substitute(eq.rhs, op.params, binding);
            if (same == eq.negated)
                return false;
        }
        return true;
    }

    void instantiate(std::size_t op_index) {
        const pddl::NdOperator &op = domain_.operators[op_index];
        std::vector<std::vector<std::string>> domains;
        for (const auto &p : op.params) {
            std::vector<std::string> values;
            for (const auto &o : objects_)
                if (domain_.is_subtype(o.type, p.type))
                    values.push_back(o.name);
            domains.push_back(std::move(values));
        }
        std::vector<std::string> binding(op.params.size());
        if (!statics_hold(op, binding, 0))
            return;
        extend(op_index, domains, binding, 0);
    }

    void extend(std::size_t op_index, const std::vector<std::vector<std::string>> &domains,
                std::vector<std::string> &binding, std::size_t depth) {
        const pddl::NdOperator &op = domain_.operators[op_index];
        if (depth == op.params.size()) {
            emit(op_index, binding);
            return;
        }
        for (const auto &value : domains[depth]) {
            binding[depth] = value;
            if (statics_hold(op, binding, depth + 1))
                extend(op_index, domains, binding, depth + 1);
        }
    }

    void emit(std::size_t op_index, const std::vector<std::string> &binding) {
        const pddl::NdOperator &op = domain_.operators[op_index];
        Candidate c;
        c.op = op_index;
        c.args = binding;
        auto ground_atom = [&](const Atom &a) {
            std::vector<std::string> args;
            for (const auto &t : a.args)
                args.push_back(substitute(t, op.params, binding));
            return ground_text(a.predicate, args);
        };
        for (const auto &lit : op.precondition) {
            if (!fluent_predicates_.contains(lit.atom.predicate))
                continue;
            (lit.negated ? c.pre_neg : c.pre_pos).push_back(ground_atom(lit.atom));
        }
        for (const auto &p : c.pre_pos)
            if (std::find(c.pre_neg.begin(), c.pre_neg.end(), p) != c.pre_neg.end())
                return;
        for (const auto &eff : op.effects) {
            std::vector<std::string> add, del;
            for (const auto &lit : eff.literals)
                (lit.negated ? del : add).push_back(ground_atom(lit.atom));
            c.effects.emplace_back(std::move(add), std::move(del));
        }
        if (candidates_.size() >= options_.max_actions)
            throw ResourceError("grounding exceeds the action cap of " +
                                std::to_string(options_.max_actions));
        candidates_.push_back(std::move(c));
    }

    // Delete-free fixpoint over all outcomes; negative preconditions ignored.
    std::vector<const Candidate *> relaxed_reachable() const {
        std::unordered_set<std::string> reached(init_fluents_.begin(), init_fluents_.end());
        std::vector<bool> fired(candidates_.size(), false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < candidates_.size(); ++i) {
                if (fired[i])
                    continue;
                const Candidate &c = candidates_[i];
                bool ok = std::all_of(c.pre_pos.begin(), c.pre_pos.end(),
                                      [&](const std::string &a) { return reached.contains(a); });
                if (!ok)
                    continue;
                fired[i] = true;
                changed = true;
                for (const auto &eff : c.effects)
                    reached.insert(eff.first.begin(), eff.first.end());
            }
        }
        std::vector<const Candidate *> out;
        for (std::size_t i = 0; i < candidates_.size(); ++i)
            if (fired[i] || !options_.prune_unreachable)
                out.push_back(&candidates_[i]);
        return out;
    }

    const pddl::Domain &domain_;
    const pddl::Problem &problem_;
    GroundOptions options_;
    std::vector<pddl::TypedName> objects_;
    std::set<std::string> fluent_predicates_;
    std::set<std::string> static_true_;
    std::vector<std::string> init_fluents_;
    std::vector<Candidate> candidates_;
};

}  // namespace

GroundTask ground(const pddl::Domain &domain, const pddl::Problem &problem,
                  const GroundOptions &options) {
    return Grounder(domain, problem, options).run();
}

bool is_applicable(const State &state, const NdGroundAction &action) {
    return state.contains_all(action.pre_pos) && state.contains_none(action.pre_neg);
}

State apply_effect(const State &state, const GroundEffect &effect) {
    State next = state;
    for (AtomId a : effect.del)
        next.reset(a);
    for (AtomId a : effect.add)
        next.set(a);
    return next;
}

std::vector<State> apply(const State &state, const NdGroundAction &action) {
    if (!is_applicable(state, action))
        throw ContractError("action " + action.name + " is not applicable");
    std::vector<State> out;
    out.reserve(action.effects.size());
    for (const auto &eff : action.effects) {
        State next = apply_effect(state, eff);
        if (std::find(out.begin(), out.end(), next) == out.end())
            out.push_back(std::move(next));
    }
    return out;
}

bool is_goal(const GroundTask &task, const State &state) {
    return state.contains_all(task.goal_pos) && state.contains_none(task.goal_neg);
}

std::string format_state(const GroundTask &task, const State &state) {
    std::string s = "{";
    bool first = true;
    for (AtomId a : state.atoms()) {
        if (a >= task.num_atoms())
            continue;
        s += (first ? "" : " ") + task.atoms[a];
        first = false;
    }
    return s + "}";
}

std::string dump(const GroundTask &task) {
    std::ostringstream os;
    os << "atoms " << task.num_atoms() << "\n";
    for (std::size_t i = 0; i < task.num_atoms(); ++i)
        os << "atom " << i << ' ' << task.atoms[i] << "\n";
    os << "init " << format_state(task, task.init) << "\n";
    os << "goal";
    for (AtomId a : task.goal_pos)
        os << ' ' << task.atoms[a];
    for (AtomId a : task.goal_neg)
        os << " (not " << task.atoms[a] << ')';
    os << "\nactions " << task.actions.size() << "\n";
    auto list = [&](const std::vector<AtomId> &ids) {
        std::string s;
        for (AtomId a : ids)
            s += (s.empty() ? "" : " ") + task.atoms[a];
        return "[" + s + "]";
    };
    for (const auto &a : task.actions) {
        os << "action " << a.id << ' ' << a.name << " pre+" << list(a.pre_pos) << " pre-"
           << list(a.pre_neg);
        for (std::size_t i = 0; i < a.effects.size(); ++i)
            os << " eff" << i << " add" << list(a.effects[i].add) << " del"
               << list(a.effects[i].del);
        os << "\n";
    }
    return os.str();
}

}  // namespace fondsp
