#pragma once

#include <optional>
#include <vector>

#include "coalp/ground.hpp"

namespace coalp {

/// Coinductive tree: built from the goal by firing open-list refs whose
/// template root term-matches the node's atom (the match substitution is
/// applied to the copied body only), keeping unifiable-but-unmatched refs
/// open and dropping non-unifiable ones.
struct CoTree {
    AndNode root;
    Atom goal;
    bool truncated = false;
};

struct EngineOptions {
    ExpansionBudget budget{};
    bool occurs_check = true;
    unsigned expansion_threads = 1;
};

CoTree build_cotree(const TemplateStore& store, const Atom& goal, const EngineOptions& opts = {});

/// Re-run the construction over an existing tree (after a substitution
/// has been applied): fires every open ref that now matches, anywhere in
/// the tree, until none fire or the budget is exhausted.
void expand_cotree(CoTree& t, const TemplateStore& store, const EngineOptions& opts,
                   const std::set<Var>& extra_taken = {});

/// An open node: an and-node holding at least one ref whose (renamed)
/// template root unifies with — but does not match — the node's atom.
struct OpenNode {
    const AndNode* node;
    std::size_t depth;  // and-levels from the root
    std::vector<std::pair<TemplateRef, Substitution>> ref_mgus;
    std::vector<Substitution> distinct_mgus;  // deduplicated, ref order
};

/// Breadth-first (lowest level first, left-to-right) enumeration of open
/// nodes with their distinct mgus. Fresh variables in the mgus are renamed
/// apart from the whole tree plus `extra_taken`.
std::vector<OpenNode> find_open_nodes(const CoTree& t, const TemplateStore& store,
                                      const std::set<Var>& extra_taken = {},
                                      bool occurs_check = true);

struct DerivationState {
    CoTree tree;
    std::vector<Substitution> chain;
    std::size_t step_count = 0;
    std::size_t total_sub_length = 0;  // priority rank
};

/// One coinductive derivation step: for the first open node, one
/// successor per distinct mgu (tree copied, mgu applied throughout,
/// re-expanded; the final mgu reuses the tree instead of copying).
std::vector<DerivationState> derive_step(DerivationState state, const TemplateStore& store,
                                         const EngineOptions& opts);

/// Prune recorded successes (subtree replaced by a `proved` marker),
/// drop or-branches that provably cannot succeed and contain no open
/// node, and splice out closed single-child and-nodes under single
/// or-nodes. Preserves has_success_subtree and the open nodes' mgu set.
void prune_and_compact(CoTree& t);

std::optional<AndNode> has_success_subtree(const CoTree& t);

std::set<Var> tree_vars(const CoTree& t);

}  // namespace coalp
