#pragma once

// Shared fixture programs and parse helpers for the test suites.

#include <stdexcept>
#include <string>

#include "coalp/parser.hpp"

namespace fixtures {

// Binary trees over bits, with a recursive first-order rule.
inline const char* kBinaryTree =
    "bit(0).\n"
    "bit(1).\n"
    "btree(empty).\n"
    "btree(tree(L,X,R)) :- btree(L), bit(X), btree(R).\n";

// Ground unrolling of the binary-tree program (depth <= 1).
inline const char* kBtg =
    "bit(0).\n"
    "bit(1).\n"
    "btree(empty).\n"
    "btree(tree(empty,0,empty)) :- btree(empty), bit(0), btree(empty).\n"
    "btree(tree(empty,1,empty)) :- btree(empty), bit(1), btree(empty).\n";

// Irregular program whose fourth clause introduces a fresh body variable;
// predicates are lowercased to fit the surface syntax.
inline const char* kTq =
    "t(X,c) :- q(X).\n"
    "q(X) :- p(X).\n"
    "q(a).\n"
    "p(b) :- p(X).\n";

// Ternary-branching counter: the tree for ttree(s^i(0)) has 3^i leaves.
inline const char* kTtree =
    "ttree(0).\n"
    "ttree(s(X)) :- ttree(X), ttree(X), ttree(X).\n";

inline coalp::Program prog(const std::string& text) {
    auto r = coalp::parse_program(text);
    if (!r.ok()) {
        std::string msg = "fixture program failed to parse";
        for (const auto& d : r.diagnostics)
            msg += "\n  " + std::to_string(d.line) + ":" + std::to_string(d.column) + " " + d.message;
        throw std::runtime_error(msg);
    }
    return *r.value;
}

inline coalp::Goal goal(std::string text) {
    if (text.empty() || text.back() != '.') text += '.';
    auto r = coalp::parse_goal(text);
    if (!r.ok()) throw std::runtime_error("fixture goal failed to parse: " + text);
    return *r.value;
}

inline coalp::Atom atom(const std::string& text) {
    coalp::Goal g = goal(text);
    if (g.atoms.size() != 1) throw std::runtime_error("fixture atom must be single: " + text);
    return g.atoms[0];
}

// Parses a bare term by wrapping it in a dummy unary atom.
inline coalp::TermPtr term(const std::string& text) {
    return atom("dummy_wrap(" + text + ")").args.at(0);
}

}  // namespace fixtures
