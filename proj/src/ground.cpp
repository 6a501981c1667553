#include "coalp/ground.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace coalp {

namespace {

void require_ground_program(const Program& p) {
    for (const auto& c : p.clauses)
        if (!is_ground(c))
            throw ModeError("ground mode requires a ground program; offending clause: " +
                            to_string(c));
}

// Runtime open list of a freshly copied ground-mode node: the template
// refs that survive the equality filter.
std::vector<TemplateRef> ground_filter(const TemplateStore& store,
                                       const std::vector<TemplateRef>& refs, const Atom& a) {
    std::vector<TemplateRef> out;
    for (const auto& r : refs)
        if (equal(store.templates[r.clause_index].atom, a)) out.push_back(r);
    return out;
}

struct PlannedNode {
    AndNode* node;
    std::size_t accepted_refs;
};

}  // namespace

GroundTree build_ground_tree(const TemplateStore& store, const Atom& goal,
                             const ExpansionBudget& budget, unsigned expansion_threads) {
    require_ground_program(store.program);
    if (!is_ground(goal))
        throw ModeError("ground mode requires a ground goal, got " + to_string(goal));

    GroundTree t;
    t.root.atom = goal;
    t.root.open_list = roots_unifying(store, goal, RefMode::ground);
    std::size_t and_nodes = 1;

    std::vector<AndNode*> frontier;
    if (!t.root.open_list.empty()) frontier.push_back(&t.root);

    while (!frontier.empty() && !t.truncated) {
        // Budget accounting is sequential and in frontier order, so the
        // truncation point does not depend on the worker count.
        std::vector<PlannedNode> plan;
        plan.reserve(frontier.size());
        for (AndNode* node : frontier) {
            std::size_t accepted = 0;
            for (const auto& ref : node->open_list) {
                std::size_t cost =
                    store.templates[ref.clause_index].or_children[0].and_children.size();
                if (and_nodes + cost > budget.max_nodes) {
                    t.truncated = true;
                    break;
                }
                and_nodes += cost;
                ++accepted;
            }
            plan.push_back({node, accepted});
            if (t.truncated) break;
        }

        auto expand_node = [&](const PlannedNode& pn) {
            AndNode* node = pn.node;
            for (std::size_t i = 0; i < pn.accepted_refs; ++i) {
                const AndNode& tmpl = store.templates[node->open_list[i].clause_index];
                OrNode copy;
                copy.and_children.reserve(tmpl.or_children[0].and_children.size());
                for (const auto& body_node : tmpl.or_children[0].and_children) {
                    AndNode child;
                    child.atom = body_node.atom;
                    child.open_list = ground_filter(store, body_node.open_list, child.atom);
                    copy.and_children.push_back(std::move(child));
                }
                node->or_children.push_back(std::move(copy));
            }
            node->open_list.erase(node->open_list.begin(),
                                  node->open_list.begin() + pn.accepted_refs);
        };

        if (expansion_threads > 1 && plan.size() >= 2) {
            unsigned nthreads = std::min<unsigned>(expansion_threads,
                                                   static_cast<unsigned>(plan.size()));
            std::vector<std::thread> workers;
            workers.reserve(nthreads);
            std::atomic<std::size_t> next{0};
            for (unsigned w = 0; w < nthreads; ++w)
                workers.emplace_back([&] {
                    for (;;) {
                        std::size_t i = next.fetch_add(1);
                        if (i >= plan.size()) return;
                        expand_node(plan[i]);
                    }
                });
            for (auto& w : workers) w.join();
        } else {
            for (const auto& pn : plan) expand_node(pn);
        }

        std::vector<AndNode*> next_frontier;
        for (const auto& pn : plan) {
            std::size_t norc = pn.node->or_children.size();
            for (std::size_t i = norc - pn.accepted_refs; i < norc; ++i)
                for (auto& child : pn.node->or_children[i].and_children)
                    if (!child.open_list.empty()) next_frontier.push_back(&child);
        }
        frontier = std::move(next_frontier);
    }

    t.node_count = count_and_nodes(t.root);
    t.leaf_count = count_leaves(t.root);
    return t;
}

std::optional<std::pair<std::size_t, AndNode>> success_witness(const AndNode& n) {
    if (n.proved) {
        AndNode marker;
        marker.atom = n.atom;
        marker.proved = true;
        return {{1, std::move(marker)}};
    }
    std::optional<std::pair<std::size_t, AndNode>> best;
    for (const auto& o : n.or_children) {
        std::size_t cost = 2;  // this node plus the chosen or-node
        std::vector<AndNode> children;
        bool ok = true;
        for (const auto& c : o.and_children) {
            auto w = success_witness(c);
            if (!w) {
                ok = false;
                break;
            }
            cost += w->first;
            children.push_back(std::move(w->second));
        }
        if (!ok) continue;
        if (!best || cost < best->first) {
            AndNode w;
            w.atom = n.atom;
            OrNode ow;
            ow.and_children = std::move(children);
            w.or_children.push_back(std::move(ow));
            best = {{cost, std::move(w)}};
        }
    }
    return best;
}

std::optional<AndNode> has_success_subtree_ground(const GroundTree& t) {
    auto w = success_witness(t.root);
    if (!w) return std::nullopt;
    return std::move(w->second);
}

CoalgebraMap coalgebra_of(const Program& prog) {
    require_ground_program(prog);
    CoalgebraMap c;
    for (const auto& cl : prog.clauses) {
        c.at.insert(cl.head);
        for (const auto& b : cl.body) c.at.insert(b);
        std::vector<Atom> body(cl.body);
        std::sort(body.begin(), body.end(), atom_less);
        body.erase(std::unique(body.begin(), body.end(),
                               [](const Atom& a, const Atom& b) { return equal(a, b); }),
                   body.end());
        auto& bodies = c.p.try_emplace(cl.head).first->second;
        bool dup = false;
        for (const auto& existing : bodies) {
            if (existing.size() != body.size()) continue;
            bool same = true;
            for (std::size_t i = 0; i < body.size(); ++i)
                if (!equal(existing[i], body[i])) { same = false; break; }
            if (same) { dup = true; break; }
        }
        if (!dup) bodies.push_back(std::move(body));
    }
    // Deterministic body-set order.
    for (auto& [atom, bodies] : c.p) {
        std::sort(bodies.begin(), bodies.end(),
                  [](const std::vector<Atom>& a, const std::vector<Atom>& b) {
                      return std::lexicographical_compare(
                          a.begin(), a.end(), b.begin(), b.end(),
                          [](const Atom& x, const Atom& y) { return atom_less(x, y); });
                  });
    }
    return c;
}

PnTree pn_tree(const CoalgebraMap& c, const Atom& goal, std::size_t n) {
    PnTree t;
    t.atom = goal;
    if (n == 0) return t;
    const auto* bodies = c.bodies(goal);
    if (!bodies) return t;
    for (const auto& body : *bodies) {
        std::vector<PnTree> children;
        children.reserve(body.size());
        for (const auto& b : body) children.push_back(pn_tree(c, b, n - 1));
        t.bullets.push_back(std::move(children));
    }
    return t;
}

namespace {

bool pn_equal(const PnTree& a, const PnTree& b) {
    if (!equal(a.atom, b.atom)) return false;
    if (a.bullets.size() != b.bullets.size()) return false;
    for (std::size_t i = 0; i < a.bullets.size(); ++i) {
        if (a.bullets[i].size() != b.bullets[i].size()) return false;
        for (std::size_t j = 0; j < a.bullets[i].size(); ++j)
            if (!pn_equal(a.bullets[i][j], b.bullets[i][j])) return false;
    }
    return true;
}

int canon_compare(const CanonTree& a, const CanonTree& b) {
    if (int c = compare(a.atom, b.atom); c != 0) return c;
    if (a.bullets.size() != b.bullets.size()) return a.bullets.size() < b.bullets.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.bullets.size(); ++i) {
        if (a.bullets[i].size() != b.bullets[i].size())
            return a.bullets[i].size() < b.bullets[i].size() ? -1 : 1;
        for (std::size_t j = 0; j < a.bullets[i].size(); ++j)
            if (int c = canon_compare(a.bullets[i][j], b.bullets[i][j]); c != 0) return c;
    }
    return 0;
}

// Bullets' children arrive already canonicalized; sort and dedupe both the
// children of each bullet and the bullet list itself.
void canon_finish(CanonTree& t) {
    for (auto& bullet : t.bullets) {
        std::sort(bullet.begin(), bullet.end(),
                  [](const CanonTree& a, const CanonTree& b) { return canon_compare(a, b) < 0; });
        bullet.erase(std::unique(bullet.begin(), bullet.end(),
                                 [](const CanonTree& a, const CanonTree& b) {
                                     return canon_compare(a, b) == 0;
                                 }),
                     bullet.end());
    }
    std::sort(t.bullets.begin(), t.bullets.end(),
              [](const std::vector<CanonTree>& a, const std::vector<CanonTree>& b) {
                  return std::lexicographical_compare(
                      a.begin(), a.end(), b.begin(), b.end(),
                      [](const CanonTree& x, const CanonTree& y) {
                          return canon_compare(x, y) < 0;
                      });
              });
    t.bullets.erase(std::unique(t.bullets.begin(), t.bullets.end(),
                                [](const std::vector<CanonTree>& a,
                                   const std::vector<CanonTree>& b) {
                                    if (a.size() != b.size()) return false;
                                    for (std::size_t i = 0; i < a.size(); ++i)
                                        if (canon_compare(a[i], b[i]) != 0) return false;
                                    return true;
                                }),
                    t.bullets.end());
}

}  // namespace

std::optional<std::pair<PnTree, std::size_t>> stabilized_pn_tree(const CoalgebraMap& c,
                                                                 const Atom& goal,
                                                                 std::size_t max_n) {
    PnTree prev = pn_tree(c, goal, 0);
    for (std::size_t n = 1; n <= max_n; ++n) {
        PnTree cur = pn_tree(c, goal, n);
        if (pn_equal(prev, cur)) return {{std::move(prev), n - 1}};
        prev = std::move(cur);
    }
    return std::nullopt;
}

CanonTree canonicalize(const AndNode& n) {
    CanonTree t;
    t.atom = n.atom;
    for (const auto& o : n.or_children) {
        std::vector<CanonTree> children;
        children.reserve(o.and_children.size());
        for (const auto& c : o.and_children) children.push_back(canonicalize(c));
        t.bullets.push_back(std::move(children));
    }
    canon_finish(t);
    return t;
}

CanonTree canonicalize(const PnTree& p) {
    CanonTree t;
    t.atom = p.atom;
    for (const auto& bullet : p.bullets) {
        std::vector<CanonTree> children;
        children.reserve(bullet.size());
        for (const auto& c : bullet) children.push_back(canonicalize(c));
        t.bullets.push_back(std::move(children));
    }
    canon_finish(t);
    return t;
}

bool canon_equal(const CanonTree& a, const CanonTree& b) { return canon_compare(a, b) == 0; }

}  // namespace coalp
