#include "coalp/cotree.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <thread>

namespace coalp {

namespace {

void collect_tree_vars(const AndNode& n, std::set<Var>& out) {
    collect_vars(n.atom, out);
    for (const auto& o : n.or_children)
        for (const auto& c : o.and_children) collect_tree_vars(c, out);
}

// Does this ref's template head match / unify with the atom? Renaming the
// head apart from the atom is enough here: both answers are invariant
// under the concrete choice of fresh names.
const Clause& clause_of(const TemplateStore& store, TemplateRef r) {
    return store.program.clauses[r.clause_index];
}

bool ref_matches(const TemplateStore& store, TemplateRef r, const Atom& a) {
    Clause renamed = standardise_apart(Clause{clause_of(store, r).head, {}}, vars_of(a));
    return term_match(renamed.head, a).has_value();
}

bool ref_unifiable(const TemplateStore& store, TemplateRef r, const Atom& a, bool occurs_check) {
    Clause renamed = standardise_apart(Clause{clause_of(store, r).head, {}}, vars_of(a));
    return unify(renamed.head, a, occurs_check).has_value();
}

// Open list for a freshly copied body node: the template refs that are
// still unifiable with the substituted atom.
std::vector<TemplateRef> unifiable_filter(const TemplateStore& store,
                                          const std::vector<TemplateRef>& refs, const Atom& a,
                                          bool occurs_check) {
    std::vector<TemplateRef> out;
    for (const auto& r : refs)
        if (ref_unifiable(store, r, a, occurs_check)) out.push_back(r);
    return out;
}

struct FirableNode {
    AndNode* node;
    std::size_t depth;
};

// Drop non-unifiable refs everywhere and collect the nodes (BFS order,
// with depth) holding at least one matching ref.
void scan(AndNode& root, const TemplateStore& store, bool occurs_check,
          std::vector<FirableNode>& firable) {
    std::deque<std::pair<AndNode*, std::size_t>> bfs{{&root, 0}};
    while (!bfs.empty()) {
        auto [node, depth] = bfs.front();
        bfs.pop_front();
        if (!node->open_list.empty()) {
            std::erase_if(node->open_list, [&](TemplateRef r) {
                return !ref_unifiable(store, r, node->atom, occurs_check);
            });
            for (const auto& r : node->open_list) {
                if (ref_matches(store, r, node->atom)) {
                    firable.push_back({node, depth});
                    break;
                }
            }
        }
        for (auto& o : node->or_children)
            for (auto& c : o.and_children) bfs.emplace_back(&c, depth + 1);
    }
}

struct NodePlan {
    AndNode* node;
    std::vector<std::size_t> fired_positions;  // indices into open_list
    std::vector<OrNode> additions;
};

}  // namespace

std::set<Var> tree_vars(const CoTree& t) {
    std::set<Var> out;
    collect_tree_vars(t.root, out);
    collect_vars(t.goal, out);
    return out;
}

void expand_cotree(CoTree& t, const TemplateStore& store, const EngineOptions& opts,
                   const std::set<Var>& extra_taken) {
    std::set<Var> taken = tree_vars(t);
    taken.insert(extra_taken.begin(), extra_taken.end());
    std::size_t and_nodes = count_and_nodes(t.root);

    while (!t.truncated) {
        std::vector<FirableNode> firable;
        scan(t.root, store, opts.occurs_check, firable);
        if (firable.empty()) break;

        // Process only the shallowest firable wave: a node's plan is
        // applied before any descendant is touched, so node addresses
        // stay stable while the wave runs.
        std::size_t dmin = firable.front().depth;
        for (const auto& f : firable) dmin = std::min(dmin, f.depth);

        std::vector<NodePlan> plans;
        for (const auto& f : firable) {
            if (f.depth != dmin) continue;
            NodePlan plan{f.node, {}, {}};
            for (std::size_t i = 0; i < f.node->open_list.size(); ++i) {
                TemplateRef r = f.node->open_list[i];
                if (!ref_matches(store, r, f.node->atom)) continue;
                Clause std_clause = standardise_apart(clause_of(store, r), taken);
                for (const Var& v : vars_of(std_clause)) taken.insert(v);
                auto theta = term_match(std_clause.head, f.node->atom);
                if (!theta) continue;  // cannot happen; keep the ref open if it does
                if (and_nodes + std_clause.body.size() > opts.budget.max_nodes) {
                    t.truncated = true;
                    break;
                }
                and_nodes += std_clause.body.size();
                const AndNode& tmpl = store.templates[r.clause_index];
                OrNode add;
                add.and_children.reserve(std_clause.body.size());
                for (std::size_t b = 0; b < std_clause.body.size(); ++b) {
                    AndNode child;
                    child.atom = apply(*theta, std_clause.body[b]);
                    child.open_list =
                        unifiable_filter(store, tmpl.or_children[0].and_children[b].open_list,
                                         child.atom, opts.occurs_check);
                    add.and_children.push_back(std::move(child));
                }
                plan.fired_positions.push_back(i);
                plan.additions.push_back(std::move(add));
            }
            if (!plan.fired_positions.empty()) plans.push_back(std::move(plan));
            if (t.truncated) break;
        }

        auto apply_plan = [](NodePlan& p) {
            for (auto& add : p.additions) p.node->or_children.push_back(std::move(add));
            for (auto it = p.fired_positions.rbegin(); it != p.fired_positions.rend(); ++it)
                p.node->open_list.erase(p.node->open_list.begin() +
                                        static_cast<std::ptrdiff_t>(*it));
        };

        if (opts.expansion_threads > 1 && plans.size() >= 4) {
            unsigned nthreads =
                std::min<unsigned>(opts.expansion_threads, static_cast<unsigned>(plans.size()));
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> workers;
            workers.reserve(nthreads);
            for (unsigned w = 0; w < nthreads; ++w)
                workers.emplace_back([&] {
                    for (;;) {
                        std::size_t i = next.fetch_add(1);
                        if (i >= plans.size()) return;
                        apply_plan(plans[i]);
                    }
                });
            for (auto& w : workers) w.join();
        } else {
            for (auto& p : plans) apply_plan(p);
        }
    }
}

CoTree build_cotree(const TemplateStore& store, const Atom& goal, const EngineOptions& opts) {
    CoTree t;
    t.goal = goal;
    t.root.atom = goal;
    t.root.open_list = roots_unifying(store, goal, RefMode::first_order);
    expand_cotree(t, store, opts);
    return t;
}

std::vector<OpenNode> find_open_nodes(const CoTree& t, const TemplateStore& store,
                                      const std::set<Var>& extra_taken, bool occurs_check) {
    std::set<Var> taken = tree_vars(t);
    taken.insert(extra_taken.begin(), extra_taken.end());

    std::vector<OpenNode> result;
    std::deque<std::pair<const AndNode*, std::size_t>> bfs{{&t.root, 0}};
    while (!bfs.empty()) {
        auto [node, depth] = bfs.front();
        bfs.pop_front();
        if (!node->open_list.empty()) {
            OpenNode info{node, depth, {}, {}};
            for (const auto& r : node->open_list) {
                if (ref_matches(store, r, node->atom)) continue;  // firable, not open
                // The same `taken` set for every ref: identical clauses
                // yield byte-identical mgus, making deduplication exact.
                Clause std_clause = standardise_apart(clause_of(store, r), taken);
                auto theta = unify(std_clause.head, node->atom, occurs_check);
                if (!theta) continue;
                info.ref_mgus.emplace_back(r, *theta);
            }
            for (const auto& [r, theta] : info.ref_mgus) {
                bool dup = false;
                for (const auto& seen : info.distinct_mgus)
                    if (seen == theta) { dup = true; break; }
                if (!dup) info.distinct_mgus.push_back(theta);
            }
            if (!info.distinct_mgus.empty()) result.push_back(std::move(info));
        }
        for (const auto& o : node->or_children)
            for (const auto& c : o.and_children) bfs.emplace_back(&c, depth + 1);
    }
    return result;
}

namespace {

void apply_to_tree(AndNode& n, const Substitution& s) {
    n.atom = apply(s, n.atom);
    for (auto& o : n.or_children)
        for (auto& c : o.and_children) apply_to_tree(c, s);
}

std::set<Var> chain_vars(const DerivationState& st) {
    std::set<Var> out;
    collect_vars(st.tree.goal, out);
    for (const auto& s : st.chain)
        for (const auto& [v, term] : s.bindings()) {
            out.insert(v);
            collect_vars(term, out);
        }
    return out;
}

}  // namespace

std::vector<DerivationState> derive_step(DerivationState state, const TemplateStore& store,
                                         const EngineOptions& opts) {
    std::set<Var> extra = chain_vars(state);
    auto opens = find_open_nodes(state.tree, store, extra, opts.occurs_check);
    if (opens.empty()) return {};
    const auto& mgus = opens.front().distinct_mgus;

    std::vector<DerivationState> successors;
    successors.reserve(mgus.size());
    for (std::size_t i = 0; i < mgus.size(); ++i) {
        const Substitution& theta = mgus[i];
        DerivationState s = (i + 1 < mgus.size()) ? state : std::move(state);
        apply_to_tree(s.tree.root, theta);
        s.tree.goal = apply(theta, s.tree.goal);
        s.chain.push_back(theta);
        s.step_count += 1;
        s.total_sub_length += theta.size();
        std::set<Var> succ_extra = chain_vars(s);
        expand_cotree(s.tree, store, opts, succ_extra);
        successors.push_back(std::move(s));
    }
    return successors;
}

namespace {

// After this pass a node is successful iff its `proved` flag is set: every
// fully successful or-branch collapses bottom-up into the flag.
void prune_success(AndNode& n) {
    for (auto& o : n.or_children)
        for (auto& c : o.and_children) prune_success(c);
    std::erase_if(n.or_children, [&](const OrNode& o) {
        for (const auto& c : o.and_children)
            if (!c.proved) return false;
        n.proved = true;
        return true;
    });
}

bool subtree_has_open(const AndNode& n) {
    if (!n.open_list.empty()) return true;
    for (const auto& o : n.or_children)
        for (const auto& c : o.and_children)
            if (subtree_has_open(c)) return true;
    return false;
}

// A node is provably non-succeeding when it is not proved, has no open
// refs, and every remaining or-branch contains a non-succeeding child.
// Branches with such a child are removed, but only when the branch holds
// no open node (so the open-node mgu set is untouched).
bool prune_dead(AndNode& n) {
    for (auto& o : n.or_children)
        for (auto& c : o.and_children) prune_dead(c);
    std::erase_if(n.or_children, [&](const OrNode& o) {
        bool has_dead = false;
        for (const auto& c : o.and_children)
            if (!c.proved && c.open_list.empty() && c.or_children.empty()) has_dead = true;
        if (!has_dead) return false;
        for (const auto& c : o.and_children)
            if (subtree_has_open(c)) return false;
        return true;
    });
    return !n.proved && n.open_list.empty() && n.or_children.empty();
}

// Chains of single or-nodes over closed and-nodes are shortened: a child
// with no open refs, not proved, and exactly one or-child holding exactly
// one grandchild is replaced by that grandchild.
void compact(AndNode& n) {
    for (auto& o : n.or_children) {
        for (auto& c : o.and_children) {
            while (!c.proved && c.open_list.empty() && c.or_children.size() == 1 &&
                   c.or_children[0].and_children.size() == 1) {
                AndNode grand = std::move(c.or_children[0].and_children[0]);
                c = std::move(grand);
            }
            compact(c);
        }
    }
}

}  // namespace

void prune_and_compact(CoTree& t) {
    prune_success(t.root);
    prune_dead(t.root);
    compact(t.root);
}

std::optional<AndNode> has_success_subtree(const CoTree& t) {
    auto w = success_witness(t.root);
    if (!w) return std::nullopt;
    return std::move(w->second);
}

}  // namespace coalp
