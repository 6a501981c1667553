#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "coalp/clause_tree.hpp"

namespace coalp {

/// Raised when an operation requiring a ground program/goal gets a
/// non-ground input.
struct ModeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Node-count cap for tree expansion; non-well-founded programs otherwise
/// make construction diverge. Exhaustion truncates (flag), never errors.
struct ExpansionBudget {
    std::size_t max_nodes = 1'000'000;
};

struct GroundTree {
    AndNode root;
    bool truncated = false;
    std::size_t node_count = 0;
    std::size_t leaf_count = 0;
};

/// And-or parallel derivation tree for a ground goal over a ground
/// program: every open-list ref whose template root equals the node's atom
/// is replaced by a copy of the template's or-subtree, until no refs
/// remain or the budget runs out. `expansion_threads` > 1 expands each
/// frontier wave with a worker pool; the result is identical to the
/// sequential build.
GroundTree build_ground_tree(const TemplateStore& store, const Atom& goal,
                             const ExpansionBudget& budget = {}, unsigned expansion_threads = 1);

/// True plus a minimal success subtree (fewest nodes, ties resolved
/// towards the earlier or-branch) if the tree contains a subtree with the
/// root, one or-child per included and-node, all and-children per
/// included or-node, and every leaf an empty goal.
std::optional<AndNode> has_success_subtree_ground(const GroundTree& t);

/// Shared success-subtree search over any runtime and-or tree: minimal
/// witness (node count as cost) or absent. Nodes flagged `proved` count
/// as already-established successes.
std::optional<std::pair<std::size_t, AndNode>> success_witness(const AndNode& n);

/// Ground program as a coalgebra: each atom maps to the set of bodies of
/// the clauses whose head equals it. Bodies are kept as canonically
/// sorted, deduplicated sets.
struct CoalgebraMap {
    std::set<Atom, bool (*)(const Atom&, const Atom&)> at{atom_less};
    std::map<Atom, std::vector<std::vector<Atom>>, bool (*)(const Atom&, const Atom&)> p{atom_less};

    const std::vector<std::vector<Atom>>* bodies(const Atom& a) const {
        auto it = p.find(a);
        return it == p.end() ? nullptr : &it->second;
    }
};

CoalgebraMap coalgebra_of(const Program& p);

/// Finite tree from iterating the coalgebra n times: alternating atom
/// levels and bullet levels, depth at most 2n.
struct PnTree {
    Atom atom;
    std::vector<std::vector<PnTree>> bullets;
};

PnTree pn_tree(const CoalgebraMap& c, const Atom& goal, std::size_t n);

/// Smallest n with pn_tree(n) == pn_tree(n+1), plus that tree. Absent if
/// no stabilization within max_n iterations.
std::optional<std::pair<PnTree, std::size_t>> stabilized_pn_tree(const CoalgebraMap& c,
                                                                 const Atom& goal,
                                                                 std::size_t max_n = 512);

/// Canonical form shared by and-or trees and pn-trees for the
/// equivalence check: per bullet, children recursively canonicalized,
/// sorted, and deduplicated; bullets sorted and deduplicated.
struct CanonTree {
    Atom atom;
    std::vector<std::vector<CanonTree>> bullets;
};

CanonTree canonicalize(const AndNode& n);
CanonTree canonicalize(const PnTree& t);
bool canon_equal(const CanonTree& a, const CanonTree& b);

}  // namespace coalp
