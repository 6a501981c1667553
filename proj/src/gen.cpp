#include "coalp/gen.hpp"

#include <random>
#include <set>
#include <stdexcept>

namespace coalp {

namespace {

TermPtr bit_term(int b) { return Term::compound(b ? "1" : "0"); }
TermPtr empty_term() { return Term::compound("empty"); }

TermPtr make_tree(const TermPtr& l, const TermPtr& b, const TermPtr& r) {
    return Term::compound("tree", {l, b, r});
}

// Insertion-ordered set of terms.
struct TermPool {
    std::vector<TermPtr> items;
    std::set<TermPtr, bool (*)(const TermPtr&, const TermPtr&)> seen{term_less};

    bool add(const TermPtr& t) {
        if (!seen.insert(t).second) return false;
        items.push_back(t);
        return true;
    }
};

Program emit_tree_program(const std::vector<TermPtr>& trees) {
    Program p;
    auto atom = [](const char* pred, TermPtr t) { return Atom{pred, {std::move(t)}}; };
    p.clauses.push_back({atom("bit", bit_term(0)), {}});
    p.clauses.push_back({atom("bit", bit_term(1)), {}});
    for (const auto& t : trees) {
        if (t->functor() == "empty") {
            p.clauses.push_back({atom("btree", t), {}});
        } else {
            Clause c;
            c.head = atom("btree", t);
            c.body = {atom("btree", t->args()[0]), atom("bit", t->args()[1]),
                      atom("btree", t->args()[2])};
            p.clauses.push_back(std::move(c));
        }
    }
    p.function_arity = {{"0", 0}, {"1", 0}, {"empty", 0}, {"tree", 3}};
    p.predicate_arity = {{"bit", 1}, {"btree", 1}};
    return p;
}

}  // namespace

Program generate_bta(unsigned n) {
    if (n > 3) throw std::invalid_argument("generate_bta: n > 3 is not tractable");
    std::vector<TermPtr> trees{make_tree(empty_term(), bit_term(0), empty_term()),
                               make_tree(empty_term(), bit_term(1), empty_term())};
    TermPool result;
    result.add(empty_term());
    for (const auto& t : trees) result.add(t);
    for (unsigned i = 0; i < n; ++i) {
        std::vector<TermPtr> new_trees;
        for (const auto& t1 : trees)
            for (const auto& t2 : trees)
                for (int b : {0, 1}) new_trees.push_back(make_tree(t1, bit_term(b), t2));
        for (const auto& t : new_trees) result.add(t);
        trees = std::move(new_trees);
    }
    return emit_tree_program(result.items);
}

Program generate_uta(unsigned n) {
    if (n > 2) throw std::invalid_argument("generate_uta: n > 2 is not tractable");
    TermPool trees;
    trees.add(empty_term());
    trees.add(make_tree(empty_term(), bit_term(0), empty_term()));
    trees.add(make_tree(empty_term(), bit_term(1), empty_term()));
    for (unsigned i = 0; i < n; ++i) {
        std::vector<TermPtr> new_trees;
        for (const auto& t1 : trees.items)
            for (const auto& t2 : trees.items)
                for (int b : {0, 1}) new_trees.push_back(make_tree(t1, bit_term(b), t2));
        for (const auto& t : new_trees) trees.add(t);
    }
    return emit_tree_program(trees.items);
}

std::uint64_t bta_layer_count(unsigned depth) {
    if (depth == 0) return 1;  // just `empty`
    std::uint64_t layer = 2;
    for (unsigned d = 2; d <= depth; ++d) layer = 2 * layer * layer;
    return layer;
}

std::uint64_t uta_layer_count(unsigned depth) {
    if (depth == 0) return 1;
    std::uint64_t prev = 0, pool = 3;
    for (unsigned d = 1; d < depth; ++d) {
        std::uint64_t next = 2 * pool * pool;
        prev = pool;
        pool = next;
    }
    return pool - prev;
}

std::size_t tree_term_depth(const TermPtr& t) {
    if (t->functor() != "tree") return 0;
    return 1 + std::max(tree_term_depth(t->args()[0]), tree_term_depth(t->args()[2]));
}

Program generate_datalog(std::uint64_t seed, std::size_t clauses, std::size_t num_preds) {
    if (num_preds == 0) num_preds = 1;
    std::mt19937_64 rng(seed);
    Program p;
    auto pred = [](std::size_t i) { return Atom{"p" + std::to_string(i), {}}; };
    std::uniform_int_distribution<std::size_t> head_dist(0, num_preds - 1);
    std::uniform_int_distribution<std::size_t> len_dist(0, 3);
    for (std::size_t i = 0; i < clauses; ++i) {
        std::size_t h = head_dist(rng);
        Clause c;
        c.head = pred(h);
        if (h > 0) {
            std::size_t len = len_dist(rng);
            std::uniform_int_distribution<std::size_t> body_dist(0, h - 1);
            for (std::size_t b = 0; b < len; ++b) c.body.push_back(pred(body_dist(rng)));
        }
        p.clauses.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < num_preds; ++i) p.predicate_arity["p" + std::to_string(i)] = 0;
    return p;
}

}  // namespace coalp
