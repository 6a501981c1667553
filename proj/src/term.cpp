#include "coalp/term.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace coalp {

TermPtr Term::variable(Var v) {
    auto t = std::make_shared<Term>();
    t->is_var_ = true;
    t->var_ = std::move(v);
    return t;
}

TermPtr Term::compound(std::string functor, std::vector<TermPtr> args) {
    auto t = std::make_shared<Term>();
    t->is_var_ = false;
    t->functor_ = std::move(functor);
    t->args_ = std::move(args);
    return t;
}

int compare(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return 0;
    if (a->is_variable() != b->is_variable()) return a->is_variable() ? -1 : 1;
    if (a->is_variable()) {
        auto c = a->var() <=> b->var();
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    if (int c = a->functor().compare(b->functor()); c != 0) return c < 0 ? -1 : 1;
    if (a->arity() != b->arity()) return a->arity() < b->arity() ? -1 : 1;
    for (std::size_t i = 0; i < a->arity(); ++i)
        if (int c = compare(a->args()[i], b->args()[i]); c != 0) return c;
    return 0;
}

int compare(const Atom& a, const Atom& b) {
    if (int c = a.predicate.compare(b.predicate); c != 0) return c < 0 ? -1 : 1;
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (int c = compare(a.args[i], b.args[i]); c != 0) return c;
    return 0;
}

bool term_less(const TermPtr& a, const TermPtr& b) { return compare(a, b) < 0; }
bool atom_less(const Atom& a, const Atom& b) { return compare(a, b) < 0; }
bool equal(const TermPtr& a, const TermPtr& b) { return compare(a, b) == 0; }
bool equal(const Atom& a, const Atom& b) { return compare(a, b) == 0; }

bool is_ground(const TermPtr& t) {
    if (t->is_variable()) return false;
    for (const auto& a : t->args())
        if (!is_ground(a)) return false;
    return true;
}

bool is_ground(const Atom& a) {
    for (const auto& t : a.args)
        if (!is_ground(t)) return false;
    return true;
}

bool is_ground(const Clause& c) {
    if (!is_ground(c.head)) return false;
    for (const auto& a : c.body)
        if (!is_ground(a)) return false;
    return true;
}

void collect_vars(const TermPtr& t, std::set<Var>& out) {
    if (t->is_variable()) {
        out.insert(t->var());
        return;
    }
    for (const auto& a : t->args()) collect_vars(a, out);
}

void collect_vars(const Atom& a, std::set<Var>& out) {
    for (const auto& t : a.args) collect_vars(t, out);
}

void collect_vars(const Clause& c, std::set<Var>& out) {
    collect_vars(c.head, out);
    for (const auto& a : c.body) collect_vars(a, out);
}

std::set<Var> vars_of(const Atom& a) {
    std::set<Var> out;
    collect_vars(a, out);
    return out;
}

std::set<Var> vars_of(const Clause& c) {
    std::set<Var> out;
    collect_vars(c, out);
    return out;
}

namespace {

// Raw application against a plain binding map (no normalization assumed).
TermPtr apply_raw(const std::map<Var, TermPtr>& m, const TermPtr& t) {
    if (t->is_variable()) {
        auto it = m.find(t->var());
        return it == m.end() ? t : it->second;
    }
    if (t->args().empty()) return t;
    std::vector<TermPtr> args;
    args.reserve(t->arity());
    bool changed = false;
    for (const auto& a : t->args()) {
        auto na = apply_raw(m, a);
        changed = changed || na.get() != a.get();
        args.push_back(std::move(na));
    }
    if (!changed) return t;
    return Term::compound(t->functor(), std::move(args));
}

bool occurs(const Var& v, const TermPtr& t) {
    if (t->is_variable()) return t->var() == v;
    for (const auto& a : t->args())
        if (occurs(v, a)) return true;
    return false;
}

// Resolve a binding map into normalized (idempotent) form. Without the
// occurs check a cyclic map is possible; iteration is capped and the map
// left as-is in that case.
std::map<Var, TermPtr> normalize_map(std::map<Var, TermPtr> m) {
    // An acyclic map settles within |m| rounds; anything still changing
    // after that is cyclic and must not be iterated further (the terms
    // would grow without bound).
    const std::size_t max_rounds = m.size() + 1;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        bool changed = false;
        for (auto& [v, t] : m) {
            auto nt = apply_raw(m, t);
            if (nt.get() != t.get() && compare(nt, t) != 0) {
                t = std::move(nt);
                changed = true;
            }
        }
        if (!changed) break;
    }
    for (auto it = m.begin(); it != m.end();) {
        if (it->second->is_variable() && it->second->var() == it->first)
            it = m.erase(it);
        else
            ++it;
    }
    return m;
}

}  // namespace

Substitution::Substitution(std::map<Var, TermPtr> bindings)
    : bindings_(normalize_map(std::move(bindings))) {}

const TermPtr* Substitution::lookup(const Var& v) const {
    auto it = bindings_.find(v);
    return it == bindings_.end() ? nullptr : &it->second;
}

TermPtr apply(const Substitution& s, const TermPtr& t) {
    if (s.empty()) return t;
    return apply_raw(s.bindings(), t);
}

Atom apply(const Substitution& s, const Atom& a) {
    if (s.empty()) return a;
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(apply_raw(s.bindings(), t));
    return out;
}

Goal apply(const Substitution& s, const Goal& g) {
    Goal out;
    out.atoms.reserve(g.atoms.size());
    for (const auto& a : g.atoms) out.atoms.push_back(apply(s, a));
    return out;
}

Clause apply(const Substitution& s, const Clause& c) {
    Clause out;
    out.head = apply(s, c.head);
    out.body.reserve(c.body.size());
    for (const auto& a : c.body) out.body.push_back(apply(s, a));
    return out;
}

Substitution compose(const Substitution& s1, const Substitution& s2) {
    std::map<Var, TermPtr> m;
    for (const auto& [v, t] : s1.bindings()) m[v] = apply(s2, t);
    for (const auto& [v, t] : s2.bindings())
        if (!m.count(v)) m[v] = t;
    return Substitution(std::move(m));
}

Substitution restrict_to(const Substitution& s, const std::set<Var>& keep) {
    std::map<Var, TermPtr> m;
    for (const auto& [v, t] : s.bindings())
        if (keep.count(v)) m[v] = t;
    return Substitution(std::move(m));
}

namespace {

TermPtr walk(const std::map<Var, TermPtr>& m, TermPtr t) {
    while (t->is_variable()) {
        auto it = m.find(t->var());
        if (it == m.end()) break;
        t = it->second;
    }
    return t;
}

bool occurs_walked(const std::map<Var, TermPtr>& m, const Var& v, const TermPtr& t0) {
    auto t = walk(m, t0);
    if (t->is_variable()) return t->var() == v;
    for (const auto& a : t->args())
        if (occurs_walked(m, v, a)) return true;
    return false;
}

bool unify_rec(std::map<Var, TermPtr>& m, TermPtr a, TermPtr b, bool occurs_check) {
    a = walk(m, a);
    b = walk(m, b);
    if (a->is_variable()) {
        if (b->is_variable() && a->var() == b->var()) return true;
        if (occurs_check && occurs_walked(m, a->var(), b)) return false;
        m[a->var()] = b;
        return true;
    }
    if (b->is_variable()) {
        if (occurs_check && occurs_walked(m, b->var(), a)) return false;
        m[b->var()] = a;
        return true;
    }
    if (a->functor() != b->functor() || a->arity() != b->arity()) return false;
    for (std::size_t i = 0; i < a->arity(); ++i)
        if (!unify_rec(m, a->args()[i], b->args()[i], occurs_check)) return false;
    return true;
}

}  // namespace

std::optional<Substitution> unify(const Atom& a, const Atom& b, bool occurs_check) {
    if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
    std::map<Var, TermPtr> m;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!unify_rec(m, a.args[i], b.args[i], occurs_check)) return std::nullopt;
    return Substitution(std::move(m));
}

std::optional<Substitution> unify_terms(const TermPtr& a, const TermPtr& b, bool occurs_check) {
    std::map<Var, TermPtr> m;
    if (!unify_rec(m, a, b, occurs_check)) return std::nullopt;
    return Substitution(std::move(m));
}

namespace {

bool match_rec(std::map<Var, TermPtr>& m, const TermPtr& pat, const TermPtr& tgt) {
    if (pat->is_variable()) {
        auto it = m.find(pat->var());
        if (it != m.end()) return equal(it->second, tgt);
        m[pat->var()] = tgt;
        return true;
    }
    if (tgt->is_variable()) return false;
    if (pat->functor() != tgt->functor() || pat->arity() != tgt->arity()) return false;
    for (std::size_t i = 0; i < pat->arity(); ++i)
        if (!match_rec(m, pat->args()[i], tgt->args()[i])) return false;
    return true;
}

}  // namespace

std::optional<Substitution> term_match(const Atom& pattern, const Atom& target) {
    if (pattern.predicate != target.predicate || pattern.args.size() != target.args.size())
        return std::nullopt;
    std::map<Var, TermPtr> m;
    for (std::size_t i = 0; i < pattern.args.size(); ++i)
        if (!match_rec(m, pattern.args[i], target.args[i])) return std::nullopt;
    for (auto it = m.begin(); it != m.end();) {
        if (it->second->is_variable() && it->second->var() == it->first)
            it = m.erase(it);
        else
            ++it;
    }
    return Substitution(std::move(m));
}

std::optional<Substitution> term_match_terms(const TermPtr& pattern, const TermPtr& target) {
    std::map<Var, TermPtr> m;
    if (!match_rec(m, pattern, target)) return std::nullopt;
    return Substitution(std::move(m));
}

Clause standardise_apart(const Clause& c, const std::set<Var>& taken) {
    std::set<Var> cvars = vars_of(c);
    std::map<Var, TermPtr> renaming;
    std::set<Var> used = taken;
    for (const Var& v : cvars) {
        // Highest taken/used index for this name, so the fresh index is
        // strictly above everything already visible.
        unsigned hi = v.index;
        for (auto it = used.lower_bound(Var{v.name, 0});
             it != used.end() && it->name == v.name; ++it)
            hi = std::max(hi, it->index);
        Var fresh{v.name, hi + 1};
        while (used.count(fresh)) ++fresh.index;
        used.insert(fresh);
        renaming[v] = Term::variable(fresh);
    }
    Clause out;
    out.head = Atom{c.head.predicate, {}};
    out.head.args.reserve(c.head.args.size());
    for (const auto& t : c.head.args) out.head.args.push_back(apply_raw(renaming, t));
    out.body.reserve(c.body.size());
    for (const auto& a : c.body) {
        Atom b{a.predicate, {}};
        b.args.reserve(a.args.size());
        for (const auto& t : a.args) b.args.push_back(apply_raw(renaming, t));
        out.body.push_back(std::move(b));
    }
    return out;
}

bool is_regular_strict(const Clause& c) {
    std::set<Var> head = vars_of(c.head);
    std::set<Var> body;
    for (const auto& a : c.body) collect_vars(a, body);
    return std::includes(head.begin(), head.end(), body.begin(), body.end()) &&
           body.size() < head.size();
}

bool is_regular_weak(const Clause& c) {
    std::set<Var> head = vars_of(c.head);
    std::set<Var> body;
    for (const auto& a : c.body) collect_vars(a, body);
    return std::includes(head.begin(), head.end(), body.begin(), body.end());
}

std::string to_string(const Var& v) {
    if (v.index == 0) return v.name;
    return v.name + "_" + std::to_string(v.index);
}

std::string to_string(const TermPtr& t) {
    if (t->is_variable()) return to_string(t->var());
    std::string s = t->functor();
    if (!t->args().empty()) {
        s += "(";
        for (std::size_t i = 0; i < t->arity(); ++i) {
            if (i) s += ",";
            s += to_string(t->args()[i]);
        }
        s += ")";
    }
    return s;
}

std::string to_string(const Atom& a) {
    std::string s = a.predicate;
    if (!a.args.empty()) {
        s += "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i) s += ",";
            s += to_string(a.args[i]);
        }
        s += ")";
    }
    return s;
}

std::string to_string(const Clause& c) {
    std::string s = to_string(c.head);
    if (!c.body.empty()) {
        s += " :- ";
        for (std::size_t i = 0; i < c.body.size(); ++i) {
            if (i) s += ", ";
            s += to_string(c.body[i]);
        }
    }
    return s + ".";
}

std::string to_string(const Goal& g) {
    std::string s = "?- ";
    for (std::size_t i = 0; i < g.atoms.size(); ++i) {
        if (i) s += ", ";
        s += to_string(g.atoms[i]);
    }
    return s + ".";
}

std::string to_string(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : s.bindings()) {
        if (!first) out += ", ";
        first = false;
        out += to_string(v) + "/" + to_string(t);
    }
    return out + "}";
}

}  // namespace coalp
