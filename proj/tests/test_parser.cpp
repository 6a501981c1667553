#include <doctest.h>

#include "coalp/parser.hpp"
#include "fixtures.hpp"

using namespace coalp;

TEST_CASE("parse_program: binary-tree example signature") {
    auto r = parse_program(fixtures::kBinaryTree);
    REQUIRE(r.ok());
    const Program& p = *r.value;
    CHECK(p.clauses.size() == 4);
    CHECK(p.predicate_arity.at("bit") == 1);
    CHECK(p.predicate_arity.at("btree") == 1);
    CHECK(p.function_arity.at("0") == 0);
    CHECK(p.function_arity.at("1") == 0);
    CHECK(p.function_arity.at("empty") == 0);
    CHECK(p.function_arity.at("tree") == 3);
    // Clause order preserved.
    CHECK(p.clauses[0].head.predicate == "bit");
    CHECK(p.clauses[3].body.size() == 3);
}

TEST_CASE("parse_program: empty and comment-only inputs") {
    auto r = parse_program("");
    REQUIRE(r.ok());
    CHECK(r.value->clauses.empty());

    auto r2 = parse_program("% only a comment\n");
    REQUIRE(r2.ok());
    CHECK(r2.value->clauses.empty());
}

TEST_CASE("parse_program: arity conflict names the symbol and both arities") {
    auto r = parse_program("p(a). p(a,b).");
    CHECK_FALSE(r.ok());
    REQUIRE_FALSE(r.diagnostics.empty());
    bool found = false;
    for (const auto& d : r.diagnostics) {
        if (d.message.find("p") != std::string::npos &&
            d.message.find("1") != std::string::npos && d.message.find("2") != std::string::npos)
            found = true;
        CHECK(d.line >= 1);
        CHECK(d.column >= 1);
    }
    CHECK(found);
}

TEST_CASE("parse_program: function arity conflicts are caught too") {
    auto r = parse_program("p(f(a)). q(f(a,b)).");
    CHECK_FALSE(r.ok());
    bool found = false;
    for (const auto& d : r.diagnostics)
        if (d.message.find("f") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("parse_program: syntax errors carry positions") {
    auto r = parse_program("p(a)");  // missing period
    CHECK_FALSE(r.ok());
    REQUIRE_FALSE(r.diagnostics.empty());
    CHECK(r.diagnostics[0].line >= 1);

    auto r2 = parse_program("p(a. ");
    CHECK_FALSE(r2.ok());

    auto r3 = parse_program(":- p(a).");
    CHECK_FALSE(r3.ok());
}

TEST_CASE("parse_program: quoted atoms keep arbitrary symbols") {
    auto r = parse_program("'Weird-Name'('mixed Case').");
    REQUIRE(r.ok());
    CHECK(r.value->clauses[0].head.predicate == "Weird-Name");
    CHECK(r.value->clauses[0].head.args[0]->functor() == "mixed Case");
}

TEST_CASE("parse_program: variables vs constants") {
    auto r = parse_program("p(X, _y, a, Y2).");
    REQUIRE(r.ok());
    const auto& args = r.value->clauses[0].head.args;
    CHECK(args[0]->is_variable());
    CHECK(args[1]->is_variable());
    CHECK_FALSE(args[2]->is_variable());
    CHECK(args[3]->is_variable());
}

TEST_CASE("parse_goal: examples") {
    auto g = parse_goal("?- btree(X).");
    REQUIRE(g.ok());
    CHECK(g.value->atoms.size() == 1);
    CHECK(g.value->atoms[0].predicate == "btree");
    CHECK(g.value->atoms[0].args[0]->is_variable());

    auto g2 = parse_goal("?- btree(tree(T,X,T)).");
    REQUIRE(g2.ok());
    CHECK(to_string(*g2.value) == "?- btree(tree(T,X,T)).");

    // Leading ?- optional.
    auto g3 = parse_goal("btree(X).");
    REQUIRE(g3.ok());

    auto bad = parse_goal("?- .");
    CHECK_FALSE(bad.ok());
    REQUIRE_FALSE(bad.diagnostics.empty());
}

TEST_CASE("parse_goal: multi-atom goals parse") {
    auto g = parse_goal("?- p(X), q(X).");
    REQUIRE(g.ok());
    CHECK(g.value->atoms.size() == 2);
}

TEST_CASE("round-trip: pretty-print then re-parse is structurally identical") {
    for (const char* text : {fixtures::kBinaryTree, fixtures::kBtg, fixtures::kTq,
                             fixtures::kTtree}) {
        auto r1 = parse_program(text);
        REQUIRE(r1.ok());
        std::string printed = to_string(*r1.value);
        auto r2 = parse_program(printed);
        REQUIRE(r2.ok());
        CHECK(to_string(*r2.value) == printed);
        CHECK(r1.value->clauses.size() == r2.value->clauses.size());
    }
}

TEST_CASE("round-trip: renamed variables survive printing") {
    // A variable printed as X_2 must read back as the same identity.
    Clause c{Atom{"p", {Term::variable(Var{"X", 2})}}, {}};
    Program p;
    p.clauses.push_back(c);
    p.predicate_arity["p"] = 1;
    auto r = parse_program(to_string(p));
    REQUIRE(r.ok());
    const TermPtr& t = r.value->clauses[0].head.args[0];
    REQUIRE(t->is_variable());
    CHECK(t->var() == Var{"X", 2});
}

TEST_CASE("parser never crashes on junk") {
    for (const char* junk : {"((((", "p(", ".", "?-", "p(a))..", "'unterminated",
                             "p(a) :- .", "p(a) q(b).", "123abc."}) {
        auto r = parse_program(junk);
        if (!r.ok()) CHECK_FALSE(r.diagnostics.empty());
    }
}
