#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fondsp::pddl {

// Raised for malformed input. Carries the 1-based position of the offending
// token when one is known (line == 0 otherwise).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &msg, int line = 0, int column = 0);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Raised for PDDL features outside the supported dialect. feature() names the
// construct, e.g. "conditional effect (when)".
class UnsupportedFeature : public ParseError {
public:
    UnsupportedFeature(const std::string &feature, int line, int column);
    const std::string &feature() const { return feature_; }

private:
    std::string feature_;
};

struct TypedName {
    std::string name;
    std::string type = "object";
    friend bool operator==(const TypedName &, const TypedName &) = default;
};

// An atom whose arguments are variables (leading '?') or constants.
struct Atom {
    std::string predicate;
    std::vector<std::string> args;
    friend bool operator==(const Atom &, const Atom &) = default;
    friend auto operator<=>(const Atom &, const Atom &) = default;
};

struct Literal {
    Atom atom;
    bool negated = false;
    friend bool operator==(const Literal &, const Literal &) = default;
    friend auto operator<=>(const Literal &, const Literal &) = default;
};

// Equality test between two terms; only allowed in preconditions.
struct Equality {
    std::string lhs;
    std::string rhs;
    bool negated = false;
    friend bool operator==(const Equality &, const Equality &) = default;
};

struct Predicate {
    std::string name;
    std::vector<TypedName> params;
    friend bool operator==(const Predicate &, const Predicate &) = default;
};

// One outcome of a non-deterministic operator, kept in canonical (sorted,
// duplicate-free) order.
struct EffectSet {
    std::vector<Literal> literals;
    std::size_t size() const { return literals.size(); }
    friend bool operator==(const EffectSet &, const EffectSet &) = default;
};

struct NdOperator {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Literal> precondition;
    std::vector<Equality> equalities;
    std::vector<EffectSet> effects;  // never empty; pairwise distinct
    friend bool operator==(const NdOperator &, const NdOperator &) = default;
};

struct TypeDecl {
    std::string name;
    std::string parent;
    friend bool operator==(const TypeDecl &, const TypeDecl &) = default;
};

struct Domain {
    std::string name;
    std::vector<std::string> requirements;
    std::vector<TypeDecl> types;  // excludes the implicit root "object"
    std::vector<TypedName> constants;
    std::vector<Predicate> predicates;
    std::vector<NdOperator> operators;

    const Predicate *find_predicate(std::string_view name) const;
    const NdOperator *find_operator(std::string_view name) const;
    // True if `type` equals `ancestor` or derives from it.
    bool is_subtype(std::string_view type, std::string_view ancestor) const;

    friend bool operator==(const Domain &, const Domain &) = default;
};

struct Problem {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;    // declared in :objects
    std::vector<TypedName> constants;  // copied from the domain
    std::vector<Atom> init;
    std::vector<Literal> goal;

    // Domain constants followed by problem objects.
    std::vector<TypedName> all_objects() const;

    friend bool operator==(const Problem &, const Problem &) = default;
};

Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text, const Domain &domain);

Domain load_domain(const std::string &path);
Problem load_problem(const std::string &path, const Domain &domain);

std::string to_pddl(const Domain &domain);
std::string to_pddl(const Problem &problem);
std::string to_string(const Atom &atom);
std::string to_string(const Literal &literal);

}  // namespace fondsp::pddl
