#pragma once

#include <functional>
#include <optional>

#include "coalp/cotree.hpp"

namespace coalp {

struct SearchConfig {
    unsigned worker_threads = 1;
    bool parallel_expansion = false;
    unsigned expansion_threads = 1;
    std::optional<std::size_t> max_solutions;
    std::optional<std::size_t> max_steps = 10'000;
    enum class Queue { fifo, lifo } queue_discipline = Queue::fifo;
    ExpansionBudget budget{};
    bool occurs_check = true;
};

struct Solution {
    Substitution answer;  // composed chain restricted to the goal's variables
    Atom goal_instance;   // goal under the composed chain
    AndNode witness;      // success subtree at recording time
    std::size_t rank = 0;  // total substitution length of the chain
    std::vector<Substitution> chain;
};

enum class SearchStatus { completed, max_solutions_reached, max_steps_exhausted };

struct SearchResult {
    std::vector<Solution> solutions;
    SearchStatus status = SearchStatus::completed;
    std::size_t steps = 0;  // derivation states processed
};

/// Breadth-first coinductive derivation search. A coordinator owns the
/// work queue and the solution buffer; worker threads each process whole
/// derivation states (success check, prune, derive successors). Results
/// are reintegrated in dispatch order and a buffered solution is emitted
/// only once no pending state could still produce a lower or equal rank,
/// so the emitted list is identical for any worker count. Equal-rank ties
/// are broken by deterministic term order on the composed answer.
SearchResult search(const TemplateStore& store, const Atom& goal, const SearchConfig& cfg = {},
                    const std::function<void(const Solution&)>& on_solution = nullptr);

/// Per-step tree observer variant (used by --emit-tree): called with each
/// state at integration time.
SearchResult search_traced(const TemplateStore& store, const Atom& goal, const SearchConfig& cfg,
                           const std::function<void(const Solution&)>& on_solution,
                           const std::function<void(std::size_t, const CoTree&)>& on_state);

}  // namespace coalp
