#include "fondsp/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fondsp::pddl {

namespace {

std::string position_suffix(int line, int column) {
    if (line <= 0)
        return "";
    return " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
}

}  // namespace

ParseError::ParseError(const std::string &msg, int line, int column)
    : std::runtime_error(msg + position_suffix(line, column)), line_(line), column_(column) {}

UnsupportedFeature::UnsupportedFeature(const std::string &feature, int line, int column)
    : ParseError("unsupported PDDL feature: " + feature, line, column), feature_(feature) {}

namespace {

struct SExpr {
    bool is_list = false;
    std::string token;
    std::vector<SExpr> items;
    int line = 0;
    int column = 0;

    bool is_token(std::string_view t) const { return !is_list && token == t; }
    bool head_is(std::string_view t) const {
        return is_list && !items.empty() && items.front().is_token(t);
    }
};

[[noreturn]] void fail(const SExpr &at, const std::string &msg) {
    throw ParseError(msg, at.line, at.column);
}

[[noreturn]] void unsupported(const SExpr &at, const std::string &feature) {
    throw UnsupportedFeature(feature, at.line, at.column);
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    SExpr read_document() {
        skip_space();
        if (pos_ >= text_.size())
            throw ParseError("empty input", line_, column_);
        SExpr root = read();
        skip_space();
        if (pos_ < text_.size())
            throw ParseError("trailing content after top-level expression", line_, column_);
        return root;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip_space();
        if (pos_ >= text_.size())
            throw ParseError("unexpected end of input, missing ')'", line_, column_);
        SExpr e;
        e.line = line_;
        e.column = column_;
        char c = text_[pos_];
        if (c == ')')
            throw ParseError("unexpected ')'", line_, column_);
        if (c == '(') {
            advance();
            e.is_list = true;
            for (;;) {
                skip_space();
                if (pos_ >= text_.size())
                    throw ParseError("unexpected end of input, missing ')' for list opened", e.line,
                                     e.column);
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        while (pos_ < text_.size()) {
            c = text_[pos_];
            if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c)))
                break;
            e.token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            advance();
        }
        return e;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

const std::set<std::string, std::less<>> kSupportedRequirements = {
    ":strips", ":typing", ":equality", ":negative-preconditions", ":non-deterministic"};

bool is_variable(const std::string &s) { return !s.empty() && s.front() == '?'; }

const std::string &expect_token(const SExpr &e, const char *what) {
    if (e.is_list || e.token.empty())
        fail(e, std::string("expected ") + what);
    return e.token;
}

// Parses "a b - t c - u d" into typed names; untyped trailing names get "object".
std::vector<TypedName> parse_typed_list(const SExpr &list, std::size_t first) {
    std::vector<TypedName> out;
    std::vector<std::string> pending;
    for (std::size_t i = first; i < list.items.size(); ++i) {
        const SExpr &item = list.items[i];
        if (item.is_token("-")) {
            if (i + 1 >= list.items.size())
                fail(item, "type name expected after '-'");
            const SExpr &type = list.items[++i];
            if (type.head_is("either"))
                unsupported(type, "either types");
            const std::string &t = expect_token(type, "type name");
            if (pending.empty())
                fail(item, "'-' without preceding names");
            for (auto &n : pending)
                out.push_back({std::move(n), t});
            pending.clear();
        } else {
            pending.push_back(expect_token(item, "name"));
        }
    }
    for (auto &n : pending)
        out.push_back({std::move(n), "object"});
    return out;
}

void canonicalize(EffectSet &effect, const SExpr &at) {
    std::sort(effect.literals.begin(), effect.literals.end());
    effect.literals.erase(std::unique(effect.literals.begin(), effect.literals.end()),
                          effect.literals.end());
    for (std::size_t i = 0; i + 1 < effect.literals.size(); ++i) {
        for (std::size_t j = i + 1; j < effect.literals.size(); ++j) {
            if (effect.literals[i].atom == effect.literals[j].atom)
                fail(at, "inconsistent effect: " + to_string(effect.literals[i].atom) +
                             " is both added and deleted");
        }
    }
}

class DomainParser {
public:
    Domain parse(const SExpr &root) {
        if (!root.head_is("define"))
            fail(root, "expected (define ...)");
        if (root.items.size() < 2 || !root.items[1].head_is("domain") ||
            root.items[1].items.size() != 2)
            fail(root, "expected (domain <name>)");
        domain_.name = expect_token(root.items[1].items[1], "domain name");

        for (std::size_t i = 2; i < root.items.size(); ++i) {
            const SExpr &section = root.items[i];
            if (!section.is_list || section.items.empty() || section.items[0].is_list)
                fail(section, "expected a domain section");
            const std::string &key = section.items[0].token;
            if (key == ":requirements")
                parse_requirements(section);
            else if (key == ":types")
                parse_types(section);
            else if (key == ":constants")
                parse_constants(section);
            else if (key == ":predicates")
                parse_predicates(section);
            else if (key == ":action")
                domain_.operators.push_back(parse_action(section));
            else if (key == ":functions")
                unsupported(section, "numeric fluents (:functions)");
            else if (key == ":derived")
                unsupported(section, "derived predicates (:derived)");
            else if (key == ":durative-action")
                unsupported(section, "durative actions");
            else
                fail(section, "unknown domain section " + key);
        }
        return std::move(domain_);
    }

private:
    void parse_requirements(const SExpr &section) {
        for (std::size_t i = 1; i < section.items.size(); ++i) {
            const std::string &r = expect_token(section.items[i], "requirement");
            if (!kSupportedRequirements.contains(r))
                unsupported(section.items[i], "requirement " + r);
            domain_.requirements.push_back(r);
        }
    }

    bool type_known(const std::string &t) const {
        if (t == "object")
            return true;
        return std::any_of(domain_.types.begin(), domain_.types.end(),
                           [&](const TypeDecl &d) { return d.name == t; });
    }

    void check_type(const SExpr &at, const std::string &t) const {
        if (!type_known(t))
            fail(at, "undeclared type " + t);
    }

    void parse_types(const SExpr &section) {
        auto typed = parse_typed_list(section, 1);
        for (const auto &tn : typed) {
            if (tn.name == "object")
                continue;
            domain_.types.push_back({tn.name, tn.type});
        }
        for (const auto &d : domain_.types)
            check_type(section, d.parent);
    }

    void parse_constants(const SExpr &section) {
        for (auto &tn : parse_typed_list(section, 1)) {
            check_type(section, tn.type);
            domain_.constants.push_back(std::move(tn));
        }
    }

    void parse_predicates(const SExpr &section) {
        for (std::size_t i = 1; i < section.items.size(); ++i) {
            const SExpr &p = section.items[i];
            if (!p.is_list || p.items.empty())
                fail(p, "expected predicate declaration");
            Predicate pred;
            pred.name = expect_token(p.items[0], "predicate name");
            pred.params = parse_typed_list(p, 1);
            for (const auto &param : pred.params)
                check_type(p, param.type);
            if (domain_.find_predicate(pred.name))
                fail(p, "duplicate predicate " + pred.name);
            domain_.predicates.push_back(std::move(pred));
        }
    }

    Atom parse_atom(const SExpr &e, const NdOperator &op) const {
        if (!e.is_list || e.items.empty())
            fail(e, "expected atom");
        Atom atom;
        atom.predicate = expect_token(e.items[0], "predicate name");
        const Predicate *pred = domain_.find_predicate(atom.predicate);
        if (!pred)
            fail(e, "undeclared predicate " + atom.predicate);
        if (pred->params.size() + 1 != e.items.size())
            fail(e, "wrong number of arguments for " + atom.predicate);
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            atom.args.push_back(expect_token(e.items[i], "term"));
            check_term(e.items[i], atom.args.back(), op);
        }
        return atom;
    }

    void check_term(const SExpr &at, const std::string &term, const NdOperator &op) const {
        if (is_variable(term)) {
            bool declared = std::any_of(op.params.begin(), op.params.end(),
                                        [&](const TypedName &p) { return p.name == term; });
            if (!declared)
                fail(at, "variable " + term + " not in parameters of " + op.name);
        } else {
            bool declared =
                std::any_of(domain_.constants.begin(), domain_.constants.end(),
                            [&](const TypedName &c) { return c.name == term; });
            if (!declared)
                fail(at, "undeclared constant " + term);
        }
    }

    void reject_compound(const SExpr &e, bool in_effect) const {
        if (!e.is_list || e.items.empty() || e.items[0].is_list)
            return;
        const std::string &h = e.items[0].token;
        if (h == "or")
            unsupported(e, "disjunctive precondition (or)");
        if (h == "imply")
            unsupported(e, "implication (imply)");
        if (h == "exists")
            unsupported(e, "existential quantifier (exists)");
        if (h == "forall")
            unsupported(e, in_effect ? "quantified effect (forall)" : "universal quantifier (forall)");
        if (h == "when")
            unsupported(e, "conditional effect (when)");
        if (h == "increase" || h == "decrease" || h == "assign")
            unsupported(e, "numeric effect (" + h + ")");
        if (h == "probabilistic")
            unsupported(e, "probabilistic effect");
    }

    void parse_condition(const SExpr &e, NdOperator &op) const {
        if (e.is_list && e.items.empty())
            return;
        reject_compound(e, false);
        if (e.head_is("and")) {
            for (std::size_t i = 1; i < e.items.size(); ++i)
                parse_condition(e.items[i], op);
            return;
        }
        bool negated = false;
        const SExpr *inner = &e;
        if (e.head_is("not")) {
            if (e.items.size() != 2)
                fail(e, "(not ...) takes exactly one argument");
            negated = true;
            inner = &e.items[1];
            reject_compound(*inner, false);
            if (inner->head_is("and") || inner->head_is("not"))
                unsupported(*inner, "negation of compound condition");
        }
        if (inner->head_is("=")) {
            if (inner->items.size() != 3)
                fail(*inner, "(= a b) takes two terms");
            Equality eq{expect_token(inner->items[1], "term"), expect_token(inner->items[2], "term"),
                        negated};
            check_term(inner->items[1], eq.lhs, op);
            check_term(inner->items[2], eq.rhs, op);
            op.equalities.push_back(std::move(eq));
            return;
        }
        op.precondition.push_back({parse_atom(*inner, op), negated});
    }

    // and/not/atom only; no oneof.
    void parse_simple_effect(const SExpr &e, const NdOperator &op, EffectSet &out) const {
        if (e.is_list && e.items.empty())
            return;
        reject_compound(e, true);
        if (e.head_is("oneof"))
            unsupported(e, "nested oneof");
        if (e.head_is("and")) {
            for (std::size_t i = 1; i < e.items.size(); ++i)
                parse_simple_effect(e.items[i], op, out);
            return;
        }
        if (e.head_is("not")) {
            if (e.items.size() != 2)
                fail(e, "(not ...) takes exactly one argument");
            reject_compound(e.items[1], true);
            if (e.items[1].head_is("="))
                fail(e.items[1], "equality is not allowed in effects");
            out.literals.push_back({parse_atom(e.items[1], op), true});
            return;
        }
        if (e.head_is("="))
            fail(e, "equality is not allowed in effects");
        out.literals.push_back({parse_atom(e, op), false});
    }

    std::vector<EffectSet> parse_oneof(const SExpr &e, const NdOperator &op,
                                       const EffectSet &common) const {
        if (e.items.size() < 2)
            fail(e, "(oneof ...) needs at least one outcome");
        std::vector<EffectSet> out;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            EffectSet eff = common;
            parse_simple_effect(e.items[i], op, eff);
            out.push_back(std::move(eff));
        }
        return out;
    }

    std::vector<EffectSet> parse_effect(const SExpr &e, const NdOperator &op) const {
        if (e.head_is("oneof"))
            return parse_oneof(e, op, {});
        if (e.head_is("and")) {
            const SExpr *oneof = nullptr;
            EffectSet common;
            for (std::size_t i = 1; i < e.items.size(); ++i) {
                const SExpr &c = e.items[i];
                if (c.head_is("oneof")) {
                    if (oneof)
                        unsupported(c, "multiple oneof in one effect");
                    oneof = &c;
                } else {
                    parse_simple_effect(c, op, common);
                }
            }
            if (oneof)
                return parse_oneof(*oneof, op, common);
            return {std::move(common)};
        }
        EffectSet single;
        parse_simple_effect(e, op, single);
        return {std::move(single)};
    }

    NdOperator parse_action(const SExpr &section) {
        if (section.items.size() < 2)
            fail(section, "action name expected");
        NdOperator op;
        op.name = expect_token(section.items[1], "action name");
        if (domain_.find_operator(op.name))
            fail(section, "duplicate action " + op.name);
        const SExpr *effect = nullptr;
        const SExpr *precondition = nullptr;
        for (std::size_t i = 2; i < section.items.size(); i += 2) {
            const std::string &key = expect_token(section.items[i], "action keyword");
            if (i + 1 >= section.items.size())
                fail(section.items[i], "value expected after " + key);
            const SExpr &value = section.items[i + 1];
            if (key == ":parameters") {
                if (!value.is_list)
                    fail(value, "parameter list expected");
                op.params = parse_typed_list(value, 0);
                for (const auto &p : op.params) {
                    if (!is_variable(p.name))
                        fail(value, "parameter " + p.name + " must start with '?'");
                    check_type(value, p.type);
                }
            } else if (key == ":precondition") {
                precondition = &value;
            } else if (key == ":effect") {
                effect = &value;
            } else {
                fail(section.items[i], "unknown action keyword " + key);
            }
        }
        if (precondition)
            parse_condition(*precondition, op);
        std::vector<EffectSet> effects =
            effect ? parse_effect(*effect, op) : std::vector<EffectSet>{EffectSet{}};
        const SExpr &anchor = effect ? *effect : section;
        for (auto &eff : effects) {
            canonicalize(eff, anchor);
            if (std::find(op.effects.begin(), op.effects.end(), eff) == op.effects.end())
                op.effects.push_back(std::move(eff));
        }
        return op;
    }

    Domain domain_;
};

class ProblemParser {
public:
    explicit ProblemParser(const Domain &domain) : domain_(domain) {}

    Problem parse(const SExpr &root) {
        if (!root.head_is("define"))
            fail(root, "expected (define ...)");
        if (root.items.size() < 2 || !root.items[1].head_is("problem") ||
            root.items[1].items.size() != 2)
            fail(root, "expected (problem <name>)");
        problem_.name = expect_token(root.items[1].items[1], "problem name");
        problem_.constants = domain_.constants;
        for (const auto &c : domain_.constants)
            types_[c.name] = c.type;

        for (std::size_t i = 2; i < root.items.size(); ++i) {
            const SExpr &section = root.items[i];
            if (!section.is_list || section.items.empty() || section.items[0].is_list)
                fail(section, "expected a problem section");
            const std::string &key = section.items[0].token;
            if (key == ":domain") {
                if (section.items.size() != 2)
                    fail(section, "(:domain <name>) expected");
                problem_.domain_name = expect_token(section.items[1], "domain name");
                if (problem_.domain_name != domain_.name)
                    fail(section, "problem is for domain " + problem_.domain_name +
                                      ", not " + domain_.name);
            } else if (key == ":requirements") {
                continue;
            } else if (key == ":objects") {
                for (auto &tn : parse_typed_list(section, 1)) {
                    if (tn.type != "object" &&
                        std::none_of(domain_.types.begin(), domain_.types.end(),
                                     [&](const TypeDecl &d) { return d.name == tn.type; }))
                        fail(section, "undeclared type " + tn.type);
                    auto [it, inserted] = types_.emplace(tn.name, tn.type);
                    if (!inserted) {
                        if (it->second != tn.type)
                            fail(section, "object " + tn.name + " declared with two types");
                        continue;
                    }
                    problem_.objects.push_back(std::move(tn));
                }
            } else if (key == ":init") {
                for (std::size_t j = 1; j < section.items.size(); ++j) {
                    const SExpr &a = section.items[j];
                    if (a.head_is("not"))
                        fail(a, "negative literals are not allowed in :init");
                    if (a.head_is("="))
                        unsupported(a, "numeric fluents in :init");
                    problem_.init.push_back(parse_ground_atom(a));
                }
            } else if (key == ":goal") {
                if (section.items.size() != 2)
                    fail(section, "(:goal <condition>) expected");
                parse_goal(section.items[1]);
            } else if (key == ":metric") {
                unsupported(section, "action costs (:metric)");
            } else {
                fail(section, "unknown problem section " + key);
            }
        }
        if (problem_.domain_name.empty())
            problem_.domain_name = domain_.name;
        std::sort(problem_.init.begin(), problem_.init.end());
        problem_.init.erase(std::unique(problem_.init.begin(), problem_.init.end()),
                            problem_.init.end());
        return std::move(problem_);
    }

private:
    Atom parse_ground_atom(const SExpr &e) const {
        if (!e.is_list || e.items.empty())
            fail(e, "expected ground atom");
        Atom atom;
        atom.predicate = expect_token(e.items[0], "predicate name");
        const Predicate *pred = domain_.find_predicate(atom.predicate);
        if (!pred)
            fail(e, "undeclared predicate " + atom.predicate);
        if (pred->params.size() + 1 != e.items.size())
            fail(e, "wrong number of arguments for " + atom.predicate);
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            const std::string &obj = expect_token(e.items[i], "object");
            auto it = types_.find(obj);
            if (it == types_.end())
                fail(e.items[i], "undeclared object " + obj);
            const std::string &want = pred->params[i - 1].type;
            if (!domain_.is_subtype(it->second, want))
                fail(e.items[i], "type mismatch: " + obj + " is " + it->second + ", " +
                                     atom.predicate + " expects " + want);
            atom.args.push_back(obj);
        }
        return atom;
    }

    void parse_goal(const SExpr &e) {
        if (e.is_list && e.items.empty())
            return;
        if (e.head_is("and")) {
            for (std::size_t i = 1; i < e.items.size(); ++i)
                parse_goal(e.items[i]);
            return;
        }
        if (e.head_is("or") || e.head_is("exists") || e.head_is("forall") || e.head_is("imply"))
            unsupported(e, "non-conjunctive goal (" + e.items[0].token + ")");
        if (e.head_is("not")) {
            if (e.items.size() != 2)
                fail(e, "(not ...) takes exactly one argument");
            problem_.goal.push_back({parse_ground_atom(e.items[1]), true});
            return;
        }
        problem_.goal.push_back({parse_ground_atom(e), false});
    }

    const Domain &domain_;
    Problem problem_;
    std::unordered_map<std::string, std::string> types_;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_typed(std::ostream &os, const std::vector<TypedName> &names) {
    for (const auto &n : names)
        os << ' ' << n.name << " - " << n.type;
}

void print_literals(std::ostream &os, const std::vector<Literal> &lits) {
    os << "(and";
    for (const auto &l : lits)
        os << ' ' << to_string(l);
    os << ')';
}

}  // namespace

const Predicate *Domain::find_predicate(std::string_view name) const {
    for (const auto &p : predicates)
        if (p.name == name)
            return &p;
    return nullptr;
}

const NdOperator *Domain::find_operator(std::string_view name) const {
    for (const auto &o : operators)
        if (o.name == name)
            return &o;
    return nullptr;
}

bool Domain::is_subtype(std::string_view type, std::string_view ancestor) const {
    if (ancestor == "object")
        return true;
    std::string_view current = type;
    for (std::size_t guard = 0; guard <= types.size(); ++guard) {
        if (current == ancestor)
            return true;
        auto it = std::find_if(types.begin(), types.end(),
                               [&](const TypeDecl &d) { return d.name == current; });
        if (it == types.end())
            return false;
        current = it->parent;
    }
    return false;
}

std::vector<TypedName> Problem::all_objects() const {
    std::vector<TypedName> out = constants;
    out.insert(out.end(), objects.begin(), objects.end());
    return out;
}

Domain parse_domain(std::string_view text) {
    Reader reader(text);
    return DomainParser{}.parse(reader.read_document());
}

Problem parse_problem(std::string_view text, const Domain &domain) {
    Reader reader(text);
    return ProblemParser{domain}.parse(reader.read_document());
}

Domain load_domain(const std::string &path) { return parse_domain(read_file(path)); }

Problem load_problem(const std::string &path, const Domain &domain) {
    return parse_problem(read_file(path), domain);
}

std::string to_string(const Atom &atom) {
    std::string s = "(" + atom.predicate;
    for (const auto &a : atom.args)
        s += " " + a;
    return s + ")";
}

std::string to_string(const Literal &literal) {
    return literal.negated ? "(not " + to_string(literal.atom) + ")" : to_string(literal.atom);
}

std::string to_pddl(const Domain &domain) {
    std::ostringstream os;
    os << "(define (domain " << domain.name << ")\n";
    if (!domain.requirements.empty()) {
        os << "  (:requirements";
        for (const auto &r : domain.requirements)
            os << ' ' << r;
        os << ")\n";
    }
    if (!domain.types.empty()) {
        os << "  (:types";
        for (const auto &t : domain.types)
            os << ' ' << t.name << " - " << t.parent;
        os << ")\n";
    }
    if (!domain.constants.empty()) {
        os << "  (:constants";
        print_typed(os, domain.constants);
        os << ")\n";
    }
    os << "  (:predicates";
    for (const auto &p : domain.predicates) {
        os << "\n    (" << p.name;
        print_typed(os, p.params);
        os << ')';
    }
    os << ")\n";
    for (const auto &op : domain.operators) {
        os << "  (:action " << op.name << "\n    :parameters (";
        for (std::size_t i = 0; i < op.params.size(); ++i)
            os << (i ? " " : "") << op.params[i].name << " - " << op.params[i].type;
        os << ")\n    :precondition (and";
        for (const auto &l : op.precondition)
            os << ' ' << to_string(l);
        for (const auto &eq : op.equalities) {
            std::string e = "(= " + eq.lhs + " " + eq.rhs + ")";
            os << ' ' << (eq.negated ? "(not " + e + ")" : e);
        }
        os << ")\n    :effect ";
        if (op.effects.size() == 1) {
            print_literals(os, op.effects.front().literals);
        } else {
            os << "(oneof";
            for (const auto &eff : op.effects) {
                os << "\n      ";
                print_literals(os, eff.literals);
            }
            os << ')';
        }
        os << ")\n";
    }
    os << ")\n";
    return os.str();
}

std::string to_pddl(const Problem &problem) {
    std::ostringstream os;
    os << "(define (problem " << problem.name << ")\n  (:domain " << problem.domain_name << ")\n";
    os << "  (:objects";
    print_typed(os, problem.objects);
    os << ")\n  (:init";
    for (const auto &a : problem.init)
        os << "\n    " << to_string(a);
    os << ")\n  (:goal ";
    print_literals(os, problem.goal);
    os << "))\n";
    return os.str();
}

}  // namespace fondsp::pddl
