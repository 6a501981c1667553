#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace coalp {

/// A variable identity. `index` 0 is a source-program variable; higher
/// indices are produced by standardising apart and print as "name_k".
struct Var {
    std::string name;
    unsigned index = 0;

    friend bool operator==(const Var&, const Var&) = default;
    friend auto operator<=>(const Var& a, const Var& b) {
        if (auto c = a.name <=> b.name; c != 0) return c;
        return a.index <=> b.index;
    }
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// First-order term: either a variable or a compound f(t1,...,tn).
/// Constants are compounds of arity 0. Immutable and freely shared.
class Term {
public:
    static TermPtr variable(Var v);
    static TermPtr compound(std::string functor, std::vector<TermPtr> args = {});

    bool is_variable() const { return is_var_; }
    const Var& var() const { return var_; }
    const std::string& functor() const { return functor_; }
    const std::vector<TermPtr>& args() const { return args_; }
    std::size_t arity() const { return args_.size(); }

private:
    bool is_var_ = false;
    Var var_;
    std::string functor_;
    std::vector<TermPtr> args_;
};

/// Atomic formula P(t1,...,tn).
struct Atom {
    std::string predicate;
    std::vector<TermPtr> args;
};

/// Clause head :- body. An empty body is a unit clause (fact).
struct Clause {
    Atom head;
    std::vector<Atom> body;
};

/// Goal ?- a1,...,an. The derivation layers use single-atom goals; the
/// empty goal is the success marker.
struct Goal {
    std::vector<Atom> atoms;
};

/// Finite map variable -> term, kept normalized: no identity bindings and
/// the range is fully resolved against the map itself (idempotent).
class Substitution {
public:
    Substitution() = default;
    explicit Substitution(std::map<Var, TermPtr> bindings);

    const std::map<Var, TermPtr>& bindings() const { return bindings_; }
    bool empty() const { return bindings_.empty(); }
    /// Binding count; this is the "length" used for solution ranking.
    std::size_t size() const { return bindings_.size(); }
    const TermPtr* lookup(const Var& v) const;

    friend bool operator==(const Substitution&, const Substitution&) = default;

private:
    std::map<Var, TermPtr> bindings_;
};

// Deterministic total order used for all tie-breaking across the engine:
// variables before compounds; variables by (name, index); compounds by
// functor name, then arity, then arguments lexicographically.
int compare(const TermPtr& a, const TermPtr& b);
int compare(const Atom& a, const Atom& b);
bool term_less(const TermPtr& a, const TermPtr& b);
bool atom_less(const Atom& a, const Atom& b);

bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const Atom& a, const Atom& b);

bool is_ground(const TermPtr& t);
bool is_ground(const Atom& a);
bool is_ground(const Clause& c);

void collect_vars(const TermPtr& t, std::set<Var>& out);
void collect_vars(const Atom& a, std::set<Var>& out);
void collect_vars(const Clause& c, std::set<Var>& out);
std::set<Var> vars_of(const Atom& a);
std::set<Var> vars_of(const Clause& c);

TermPtr apply(const Substitution& s, const TermPtr& t);
Atom apply(const Substitution& s, const Atom& a);
Goal apply(const Substitution& s, const Goal& g);
Clause apply(const Substitution& s, const Clause& c);

/// compose(s1, s2): apply(compose(s1,s2), t) == apply(s2, apply(s1, t)).
/// Precondition: variables occurring in the range of s2 are not bound by
/// s1.  Derivation chains satisfy this by construction (variables
/// introduced at a later step are fresh, so earlier substitutions never
/// bind them); outside that class the normalized result resolves s2's
/// range through s1 and the post-condition does not hold.
Substitution compose(const Substitution& s1, const Substitution& s2);

/// Restrict to the given variables (used for answer substitutions).
Substitution restrict_to(const Substitution& s, const std::set<Var>& keep);

/// Most general unifier of two atoms, normalized idempotent; absent if the
/// atoms do not unify. The occurs check defaults to on.
std::optional<Substitution> unify(const Atom& a, const Atom& b, bool occurs_check = true);
std::optional<Substitution> unify_terms(const TermPtr& a, const TermPtr& b, bool occurs_check = true);

/// Term matcher: theta with domain within vars(pattern) and
/// pattern*theta == target. The target is never instantiated.
/// Precondition: pattern and target share no variables (call sites
/// standardise the pattern apart first); with shared variables the
/// required binding map need not be an idempotent substitution.
std::optional<Substitution> term_match(const Atom& pattern, const Atom& target);
std::optional<Substitution> term_match_terms(const TermPtr& pattern, const TermPtr& target);

/// Rename the clause so its variables are disjoint from `taken`.
/// Deterministic: each variable (name, i) moves to the smallest free index
/// above both i and any taken index of the same name.
Clause standardise_apart(const Clause& c, const std::set<Var>& taken);

/// Strict reading: vars(body) is a proper subset of vars(head).
bool is_regular_strict(const Clause& c);
/// Weak reading: vars(body) is a subset of vars(head).
bool is_regular_weak(const Clause& c);

std::string to_string(const Var& v);
std::string to_string(const TermPtr& t);
std::string to_string(const Atom& a);
std::string to_string(const Clause& c);
std::string to_string(const Goal& g);
std::string to_string(const Substitution& s);

}  // namespace coalp
