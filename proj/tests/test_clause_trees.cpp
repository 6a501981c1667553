#include <doctest.h>

#include <nlohmann/json.hpp>

#include "coalp/clause_tree.hpp"
#include "coalp/gen.hpp"
#include "fixtures.hpp"

using namespace coalp;
using fixtures::atom;

TEST_CASE("compile: ground binary-tree program templates") {
    TemplateStore store = compile(fixtures::prog(fixtures::kBtg));
    REQUIRE(store.templates.size() == 5);

    // Clause at index 3: btree(tree(empty,0,empty)) :- btree(empty), bit(0), btree(empty).
    const AndNode& t = store.templates[3];
    CHECK(equal(t.atom, atom("btree(tree(empty,0,empty))")));
    CHECK(t.open_list.empty());  // head nodes keep empty open lists
    REQUIRE(t.or_children.size() == 1);
    const auto& body = t.or_children[0].and_children;
    REQUIRE(body.size() == 3);
    CHECK(equal(body[0].atom, atom("btree(empty)")));
    CHECK(equal(body[1].atom, atom("bit(0)")));
    CHECK(equal(body[2].atom, atom("btree(empty)")));
    REQUIRE(body[0].open_list.size() == 1);
    CHECK(body[0].open_list[0].clause_index == 2);
    REQUIRE(body[1].open_list.size() == 1);
    CHECK(body[1].open_list[0].clause_index == 0);
    REQUIRE(body[2].open_list.size() == 1);
    CHECK(body[2].open_list[0].clause_index == 2);

    // Facts compile to a head node with one empty or-node.
    const AndNode& fact = store.templates[0];
    REQUIRE(fact.or_children.size() == 1);
    CHECK(fact.or_children[0].and_children.empty());
}

TEST_CASE("compile: first-order binary-tree program templates") {
    TemplateStore store = compile(fixtures::prog(fixtures::kBinaryTree));
    REQUIRE(store.templates.size() == 4);

    const AndNode& rule = store.templates[3];
    const auto& body = rule.or_children[0].and_children;
    REQUIRE(body.size() == 3);
    // btree(L) is unifiable with both btree(empty) and btree(tree(L,X,R)).
    REQUIRE(body[0].open_list.size() == 2);
    CHECK(body[0].open_list[0].clause_index == 2);
    CHECK(body[0].open_list[1].clause_index == 3);
    // bit(X) with both bit facts.
    REQUIRE(body[1].open_list.size() == 2);
    CHECK(body[1].open_list[0].clause_index == 0);
    CHECK(body[1].open_list[1].clause_index == 1);
    REQUIRE(body[2].open_list.size() == 2);
}

TEST_CASE("compile: empty program yields empty store") {
    TemplateStore store = compile(fixtures::prog(""));
    CHECK(store.templates.empty());
}

TEST_CASE("compile: open-list invariant and determinism across corpus") {
    std::vector<Program> corpus{fixtures::prog(fixtures::kBinaryTree),
                                fixtures::prog(fixtures::kBtg), fixtures::prog(fixtures::kTq),
                                fixtures::prog(fixtures::kTtree), generate_datalog(7, 30)};
    for (const auto& p : corpus) {
        TemplateStore s1 = compile(p);
        TemplateStore s2 = compile(p);
        REQUIRE(s1.templates.size() == p.clauses.size());
        CHECK(templates_to_json(s1) == templates_to_json(s2));
        for (const auto& tmpl : s1.templates) {
            CHECK(tmpl.open_list.empty());
            for (const auto& orn : tmpl.or_children)
                for (const auto& body_node : orn.and_children) {
                    // Every ref's root unifies with the holder's atom and refs
                    // are in clause-index order.
                    std::size_t prev = 0;
                    bool first = true;
                    for (const auto& ref : body_node.open_list) {
                        REQUIRE(ref.clause_index < s1.templates.size());
                        Clause head_only{s1.templates[ref.clause_index].atom, {}};
                        Clause renamed = standardise_apart(head_only, vars_of(body_node.atom));
                        CHECK(unify(renamed.head, body_node.atom).has_value());
                        if (!first) CHECK(prev < ref.clause_index);
                        prev = ref.clause_index;
                        first = false;
                    }
                }
        }
    }
}

TEST_CASE("roots_unifying: ground vs first-order modes") {
    TemplateStore btg = compile(fixtures::prog(fixtures::kBtg));
    auto refs = roots_unifying(btg, atom("btree(tree(empty,0,empty))"), RefMode::ground);
    REQUIRE(refs.size() == 1);
    CHECK(refs[0].clause_index == 3);

    // Ground mode filters by equality: btree(empty) only hits its own fact.
    auto refs2 = roots_unifying(btg, atom("btree(empty)"), RefMode::ground);
    REQUIRE(refs2.size() == 1);
    CHECK(refs2[0].clause_index == 2);

    TemplateStore bt = compile(fixtures::prog(fixtures::kBinaryTree));
    auto refs3 = roots_unifying(bt, atom("btree(tree(X,X,R))"), RefMode::first_order);
    REQUIRE(refs3.size() == 1);
    CHECK(refs3[0].clause_index == 3);

    auto refs4 = roots_unifying(bt, atom("btree(L)"), RefMode::first_order);
    REQUIRE(refs4.size() == 2);

    CHECK(roots_unifying(bt, atom("q_unknown(a)"), RefMode::first_order).empty());
}

TEST_CASE("count_and_nodes / count_leaves on templates") {
    TemplateStore bt = compile(fixtures::prog(fixtures::kBinaryTree));
    // Rule template: head + 3 body nodes.
    CHECK(count_and_nodes(bt.templates[3]) == 4);
    // Body nodes have no or-children: 3 leaves.
    CHECK(count_leaves(bt.templates[3]) == 3);
    // Fact template: the empty or-node renders as one box leaf.
    CHECK(count_and_nodes(bt.templates[0]) == 1);
    CHECK(count_leaves(bt.templates[0]) == 1);
}

TEST_CASE("emitters produce well-formed output") {
    TemplateStore bt = compile(fixtures::prog(fixtures::kBinaryTree));
    std::string dot = templates_to_dot(bt);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("dashed") != std::string::npos);  // open-list refs drawn dashed
    CHECK(dot.find("btree(tree(L,X,R))") != std::string::npos);

    auto js = nlohmann::json::parse(templates_to_json(bt));
    REQUIRE(js.is_array());
    CHECK(js.size() == 4);
    CHECK(js[3].contains("tree"));

    auto tree_js = nlohmann::json::parse(tree_to_json(bt.templates[3]));
    CHECK(tree_js.contains("atom"));
    std::string tree_dot = tree_to_dot(bt.templates[3]);
    CHECK(tree_dot.find("digraph") != std::string::npos);
}
