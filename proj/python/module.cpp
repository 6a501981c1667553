// Python bindings: a thin veneer over the engine for scripting and
// notebook use.  Programs and goals cross the boundary as source text;
// answers come back as plain dicts/strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalp/bench.hpp"
#include "coalp/gen.hpp"
#include "coalp/search.hpp"

namespace py = pybind11;

namespace {

coalp::Program parse_program_or_throw(const std::string& text) {
    auto r = coalp::parse_program(text);
    if (!r.ok()) {
        std::string msg = "program parse failed";
        for (const auto& d : r.diagnostics)
            msg += "\n  " + std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
                   d.message;
        throw std::invalid_argument(msg);
    }
    return *r.value;
}

coalp::Atom parse_atom_or_throw(std::string text) {
    if (!text.empty() && text.back() != '.') text += '.';
    auto r = coalp::parse_goal(text);
    if (!r.ok() || r.value->atoms.size() != 1)
        throw std::invalid_argument("expected a single goal atom: " + text);
    return r.value->atoms[0];
}

py::dict solution_to_dict(const coalp::Solution& s) {
    py::dict d;
    d["goal_instance"] = coalp::to_string(s.goal_instance);
    py::dict answer;
    for (const auto& [v, t] : s.answer.bindings())
        answer[py::str(coalp::to_string(v))] = coalp::to_string(t);
    d["answer"] = answer;
    d["rank"] = s.rank;
    return d;
}

}  // namespace

PYBIND11_MODULE(_coalp, m) {
    m.doc() = "Parallel coinductive derivation engine";

    m.def(
        "solve",
        [](const std::string& program, const std::string& goal,
           std::optional<std::size_t> max_solutions, std::optional<std::size_t> max_steps,
           unsigned threads, bool expand_parallel, unsigned expand_threads,
           const std::string& queue, std::size_t budget, bool occurs_check) {
            coalp::TemplateStore store = coalp::compile(parse_program_or_throw(program));
            coalp::SearchConfig cfg;
            cfg.max_solutions = max_solutions;
            cfg.max_steps = max_steps;
            cfg.worker_threads = threads;
            cfg.parallel_expansion = expand_parallel;
            cfg.expansion_threads = expand_threads;
            if (queue == "lifo") cfg.queue_discipline = coalp::SearchConfig::Queue::lifo;
            else if (queue != "fifo") throw std::invalid_argument("queue must be fifo or lifo");
            cfg.budget.max_nodes = budget;
            cfg.occurs_check = occurs_check;
            coalp::SearchResult r;
            {
                py::gil_scoped_release release;
                r = coalp::search(store, parse_atom_or_throw(goal), cfg);
            }
            py::dict out;
            py::list sols;
            for (const auto& s : r.solutions) sols.append(solution_to_dict(s));
            out["solutions"] = sols;
            out["steps"] = r.steps;
            out["status"] = r.status == coalp::SearchStatus::completed ? "completed"
                            : r.status == coalp::SearchStatus::max_solutions_reached
                                ? "max_solutions_reached"
                                : "max_steps_exhausted";
            return out;
        },
        py::arg("program"), py::arg("goal"), py::arg("max_solutions") = py::none(),
        py::arg("max_steps") = 10'000, py::arg("threads") = 1,
        py::arg("expand_parallel") = false, py::arg("expand_threads") = 1,
        py::arg("queue") = "fifo", py::arg("budget") = 1'000'000,
        py::arg("occurs_check") = true,
        "Run the coinductive search; returns {'solutions', 'steps', 'status'}.");

    m.def(
        "ground_provable",
        [](const std::string& program, const std::string& goal, std::size_t budget) {
            coalp::TemplateStore store = coalp::compile(parse_program_or_throw(program));
            coalp::GroundTree t =
                coalp::build_ground_tree(store, parse_atom_or_throw(goal), {budget});
            py::dict out;
            out["provable"] = coalp::has_success_subtree_ground(t).has_value();
            out["node_count"] = t.node_count;
            out["leaf_count"] = t.leaf_count;
            out["truncated"] = t.truncated;
            return out;
        },
        py::arg("program"), py::arg("goal"), py::arg("budget") = 1'000'000,
        "Ground-mode provability of a ground goal over a ground program.");

    m.def(
        "generate",
        [](const std::string& kind, unsigned n, std::uint64_t seed, std::size_t clauses) {
            if (kind == "bta") return coalp::to_string(coalp::generate_bta(n));
            if (kind == "uta") return coalp::to_string(coalp::generate_uta(n));
            if (kind == "datalog") return coalp::to_string(coalp::generate_datalog(seed, clauses));
            throw std::invalid_argument("kind must be bta, uta or datalog");
        },
        py::arg("kind"), py::arg("n") = 1, py::arg("seed") = 1, py::arg("clauses") = 30,
        "Generate a benchmark program as source text.");

    py::register_exception<coalp::ModeError>(m, "ModeError", PyExc_ValueError);
}
