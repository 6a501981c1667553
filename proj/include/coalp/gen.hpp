#pragma once

#include <cstdint>

#include "coalp/parser.hpp"

namespace coalp {

/// Balanced-tree program generator: iterates `trees' = {tree(t1,b,t2)}`
/// over the previous iteration's trees only, accumulating into `result`.
/// Emitted as a ground program: bit facts, btree(empty) fact, and one
/// btree rule per composite tree (head btree(t), body btree(l), bit(b),
/// btree(r)). Throws for n > 3 (doubly-exponential growth).
Program generate_bta(unsigned n);

/// Unbalanced variant: the combination pool is cumulative (and contains
/// empty), so arbitrary depth mixes appear. Throws for n > 2.
Program generate_uta(unsigned n);

/// Number of balanced trees of the given depth (depth(empty) = 0):
/// layer(1) = 2, layer(k) = 2 * layer(k-1)^2, i.e. 2^(2^k - 1).
std::uint64_t bta_layer_count(unsigned depth);

/// Depth-layer size of UTA counted as combination slots per iteration
/// (pool(0) = 3, pool(k) = 2 * pool(k-1)^2, layer(d) = pool(d-1) -
/// pool(d-2)), which yields the 630-at-depth-3 datum. Note the
/// deduplicated term set of generate_uta is smaller.
std::uint64_t uta_layer_count(unsigned depth);

/// Depth of a generated tree term: empty has depth 0.
std::size_t tree_term_depth(const TermPtr& t);

/// Seeded random acyclic propositional Datalog program: `num_preds`
/// 0-ary predicates, each clause body referencing only
/// strictly-lower-numbered predicates, body length 0..3.
Program generate_datalog(std::uint64_t seed, std::size_t clauses, std::size_t num_preds = 12);

}  // namespace coalp
