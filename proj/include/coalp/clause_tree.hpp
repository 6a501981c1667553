#pragma once

#include <cstddef>
#include <vector>

#include "coalp/parser.hpp"
#include "coalp/term.hpp"

namespace coalp {

/// Reference to a compiled clause tree by clause index. Indices rather
/// than pointers keep the store shareable across threads and serializable.
struct TemplateRef {
    std::size_t clause_index;
    friend bool operator==(const TemplateRef&, const TemplateRef&) = default;
};

struct OrNode;

/// Alternating and/or tree node. In a freshly compiled template, body
/// nodes have no or-children and carry the refs to every clause tree whose
/// root unifies with their atom. At runtime (both engines) or-children are
/// appended as refs fire, and `proved` marks a node whose success subtree
/// has already been recorded and pruned away.
struct AndNode {
    Atom atom;
    std::vector<OrNode> or_children;
    std::vector<TemplateRef> open_list;
    bool proved = false;
};

/// An or-node with zero and-children renders as the empty goal.
struct OrNode {
    std::vector<AndNode> and_children;
};

/// One clause tree per program clause, immutable after compile.
struct TemplateStore {
    std::vector<AndNode> templates;
    Program program;
};

enum class RefMode { ground, first_order };

/// Two passes: build one template per clause (head and-node, one or-node,
/// body and-nodes), then fill every body node's open list with refs to all
/// clause roots that unify with it, in clause-index order. Head nodes keep
/// empty open lists; query roots are populated at instantiation time.
TemplateStore compile(const Program& p);

/// Refs to templates whose root atom is equal to (ground mode) or
/// unifiable with (first-order mode; heads renamed apart first) `a`,
/// in clause-index order.
std::vector<TemplateRef> roots_unifying(const TemplateStore& store, const Atom& a, RefMode mode);

std::size_t count_and_nodes(const AndNode& root);
/// And-nodes with no or-children (the tree's leaves).
std::size_t count_leaves(const AndNode& root);

std::string templates_to_dot(const TemplateStore& store);
std::string templates_to_json(const TemplateStore& store);
std::string tree_to_dot(const AndNode& root);
std::string tree_to_json(const AndNode& root);

}  // namespace coalp
