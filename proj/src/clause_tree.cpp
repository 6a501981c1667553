#include "coalp/clause_tree.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

namespace coalp {

TemplateStore compile(const Program& p) {
    TemplateStore store;
    store.program = p;
    store.templates.reserve(p.clauses.size());
    // Pass 1: one template per clause.
    for (const auto& c : p.clauses) {
        AndNode root;
        root.atom = c.head;
        OrNode or_node;
        or_node.and_children.reserve(c.body.size());
        for (const auto& b : c.body) {
            AndNode body_node;
            body_node.atom = b;
            or_node.and_children.push_back(std::move(body_node));
        }
        root.or_children.push_back(std::move(or_node));
        store.templates.push_back(std::move(root));
    }
    // Pass 2: open lists of body nodes reference every unifiable clause root.
    for (auto& tmpl : store.templates) {
        for (auto& body_node : tmpl.or_children[0].and_children)
            body_node.open_list = roots_unifying(store, body_node.atom, RefMode::first_order);
    }
    return store;
}

std::vector<TemplateRef> roots_unifying(const TemplateStore& store, const Atom& a, RefMode mode) {
    std::vector<TemplateRef> refs;
    const std::set<Var> avars = vars_of(a);
    for (std::size_t i = 0; i < store.templates.size(); ++i) {
        const Atom& head = store.templates[i].atom;
        if (mode == RefMode::ground) {
            if (equal(head, a)) refs.push_back({i});
        } else {
            Clause renamed = standardise_apart(Clause{head, {}}, avars);
            if (unify(renamed.head, a)) refs.push_back({i});
        }
    }
    return refs;
}

std::size_t count_and_nodes(const AndNode& root) {
    std::size_t n = 1;
    for (const auto& o : root.or_children)
        for (const auto& c : o.and_children) n += count_and_nodes(c);
    return n;
}

std::size_t count_leaves(const AndNode& root) {
    if (root.or_children.empty()) return 1;
    std::size_t n = 0;
    for (const auto& o : root.or_children) {
        if (o.and_children.empty()) {
            n += 1;  // the empty-goal box
            continue;
        }
        for (const auto& c : o.and_children) n += count_leaves(c);
    }
    return n;
}

namespace {

void node_to_dot(const AndNode& n, std::ostream& os, int& next_id, int my_id,
                 const std::vector<AndNode>* templates) {
    os << "  n" << my_id << " [shape=box,label=\"" << to_string(n.atom)
       << (n.proved ? " [proved]" : "") << "\"];\n";
    for (const auto& o : n.or_children) {
        int oid = next_id++;
        os << "  n" << oid << " [shape=point,width=0.12];\n";
        os << "  n" << my_id << " -> n" << oid << ";\n";
        if (o.and_children.empty()) {
            int bid = next_id++;
            os << "  n" << bid << " [shape=square,label=\"\",width=0.15];\n";
            os << "  n" << oid << " -> n" << bid << ";\n";
        }
        for (const auto& c : o.and_children) {
            int cid = next_id++;
            os << "  n" << oid << " -> n" << cid << ";\n";
            node_to_dot(c, os, next_id, cid, templates);
        }
    }
    for (const auto& r : n.open_list) {
        if (templates) {
            os << "  n" << my_id << " -> t" << r.clause_index << "_root [style=dashed];\n";
        } else {
            int rid = next_id++;
            os << "  n" << rid << " [shape=plaintext,label=\"clause " << r.clause_index << "\"];\n";
            os << "  n" << my_id << " -> n" << rid << " [style=dashed];\n";
        }
    }
}

nlohmann::json node_to_json(const AndNode& n) {
    nlohmann::json j;
    j["atom"] = to_string(n.atom);
    if (n.proved) j["proved"] = true;
    j["open_list"] = nlohmann::json::array();
    for (const auto& r : n.open_list) j["open_list"].push_back(r.clause_index);
    j["or_children"] = nlohmann::json::array();
    for (const auto& o : n.or_children) {
        nlohmann::json jo = nlohmann::json::array();
        for (const auto& c : o.and_children) jo.push_back(node_to_json(c));
        j["or_children"].push_back(std::move(jo));
    }
    return j;
}

}  // namespace

std::string templates_to_dot(const TemplateStore& store) {
    std::ostringstream os;
    os << "digraph templates {\n";
    int next_id = 0;
    for (std::size_t i = 0; i < store.templates.size(); ++i) {
        os << "  subgraph cluster_" << i << " {\n    label=\"clause " << i << "\";\n";
        // Root gets a stable name so dashed cross-template refs can target it.
        os << "  t" << i << "_root [shape=box,label=\"" << to_string(store.templates[i].atom)
           << "\"];\n";
        const AndNode& root = store.templates[i];
        for (const auto& o : root.or_children) {
            int oid = next_id++;
            os << "  o" << i << "_" << oid << " [shape=point,width=0.12];\n";
            os << "  t" << i << "_root -> o" << i << "_" << oid << ";\n";
            if (o.and_children.empty()) {
                int bid = next_id++;
                os << "  b" << i << "_" << bid << " [shape=square,label=\"\",width=0.15];\n";
                os << "  o" << i << "_" << oid << " -> b" << i << "_" << bid << ";\n";
            }
            for (const auto& c : o.and_children) {
                int cid = next_id++;
                os << "  c" << i << "_" << cid << " [shape=box,label=\"" << to_string(c.atom)
                   << "\"];\n";
                os << "  o" << i << "_" << oid << " -> c" << i << "_" << cid << ";\n";
                for (const auto& r : c.open_list)
                    os << "  c" << i << "_" << cid << " -> t" << r.clause_index
                       << "_root [style=dashed];\n";
            }
        }
        os << "  }\n";
    }
    os << "}\n";
    return os.str();
}

std::string templates_to_json(const TemplateStore& store) {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < store.templates.size(); ++i) {
        nlohmann::json t;
        t["clause_index"] = i;
        t["clause"] = to_string(store.program.clauses[i]);
        t["tree"] = node_to_json(store.templates[i]);
        j.push_back(std::move(t));
    }
    return j.dump(2);
}

std::string tree_to_dot(const AndNode& root) {
    std::ostringstream os;
    os << "digraph tree {\n";
    int next_id = 1;
    node_to_dot(root, os, next_id, 0, nullptr);
    os << "}\n";
    return os.str();
}

std::string tree_to_json(const AndNode& root) { return node_to_json(root).dump(2); }

}  // namespace coalp
