// Command-line front end: runs goals in ground or coinductive mode,
// dumps compiled clause-tree templates and per-step derivation trees,
// generates benchmark programs, and times configurations.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coalp/bench.hpp"
#include "coalp/gen.hpp"
#include "coalp/search.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--program", "cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

coalp::Program load_program(const std::string& path) {
    auto r = coalp::parse_program(read_file(path));
    if (!r.ok()) {
        for (const auto& d : r.diagnostics)
            std::cerr << path << ":" << d.line << ":" << d.column << ": error: " << d.message
                      << "\n";
        throw CLI::RuntimeError(2);
    }
    return *r.value;
}

coalp::Goal load_goal(std::string text) {
    if (!text.empty() && text.back() != '.') text += '.';
    auto r = coalp::parse_goal(text);
    if (!r.ok()) {
        for (const auto& d : r.diagnostics)
            std::cerr << "goal:" << d.line << ":" << d.column << ": error: " << d.message << "\n";
        throw CLI::RuntimeError(2);
    }
    return *r.value;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw CLI::RuntimeError(2);
    out << text;
    std::cerr << "wrote " << path << "\n";
}

std::string step_file_name(const std::string& prefix, std::size_t step, const std::string& ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_step_%04zu.", step);
    return prefix + buf + ext;
}

struct RunOptions {
    std::string program_path;
    std::string goal_text;
    std::string mode = "coinductive";
    unsigned threads = 1;
    bool expand_parallel = false;
    unsigned expand_threads = 1;
    std::optional<std::size_t> solutions;
    std::optional<std::size_t> max_steps;
    std::string queue = "fifo";
    std::string emit_tree;       // "", "dot" or "json"
    std::string emit_templates;  // "", "dot" or "json"
    std::string emit_prefix = "coalp";
    std::size_t budget = 1'000'000;
    bool no_occurs_check = false;
};

int run_ground(const coalp::TemplateStore& store, const coalp::Atom& goal, const RunOptions& opt) {
    coalp::ExpansionBudget budget{opt.budget};
    unsigned expand_threads = opt.expand_parallel ? opt.expand_threads : 1;
    coalp::GroundTree t;
    try {
        t = coalp::build_ground_tree(store, goal, budget, expand_threads);
    } catch (const coalp::ModeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (!opt.emit_tree.empty()) {
        std::string text = opt.emit_tree == "dot" ? coalp::tree_to_dot(t.root)
                                                  : coalp::tree_to_json(t.root);
        write_text(step_file_name(opt.emit_prefix, 0, opt.emit_tree), text);
    }
    std::cout << "tree: " << t.node_count << " nodes, " << t.leaf_count << " leaves"
              << (t.truncated ? " (truncated at budget)" : "") << "\n";
    if (auto w = coalp::has_success_subtree_ground(t)) {
        std::cout << coalp::to_string(goal) << "  |  {}  |  0\n";
        std::cout << "provable (success subtree with " << coalp::count_and_nodes(*w)
                  << " and-nodes)\n";
        return 0;
    }
    std::cout << "not provable" << (t.truncated ? " within budget" : "") << "\n";
    return t.truncated ? 3 : 1;
}

int run_coinductive(const coalp::TemplateStore& store, const coalp::Atom& goal,
                    const RunOptions& opt) {
    coalp::SearchConfig cfg;
    cfg.worker_threads = opt.threads;
    cfg.parallel_expansion = opt.expand_parallel;
    cfg.expansion_threads = opt.expand_threads;
    cfg.max_solutions = opt.solutions;
    if (opt.max_steps) cfg.max_steps = opt.max_steps;
    cfg.queue_discipline =
        opt.queue == "lifo" ? coalp::SearchConfig::Queue::lifo : coalp::SearchConfig::Queue::fifo;
    cfg.budget.max_nodes = opt.budget;
    cfg.occurs_check = !opt.no_occurs_check;

    auto print_solution = [](const coalp::Solution& s) {
        std::cout << coalp::to_string(s.goal_instance) << "  |  " << coalp::to_string(s.answer)
                  << "  |  " << s.rank << "\n";
    };

    coalp::SearchResult r;
    if (opt.emit_tree.empty()) {
        r = coalp::search(store, goal, cfg, print_solution);
    } else {
        r = coalp::search_traced(store, goal, cfg, print_solution,
                                 [&](std::size_t step, const coalp::CoTree& t) {
                                     std::string text = opt.emit_tree == "dot"
                                                            ? coalp::tree_to_dot(t.root)
                                                            : coalp::tree_to_json(t.root);
                                     write_text(step_file_name(opt.emit_prefix, step,
                                                               opt.emit_tree),
                                                text);
                                 });
    }
    const char* status = r.status == coalp::SearchStatus::completed ? "completed"
                         : r.status == coalp::SearchStatus::max_solutions_reached
                             ? "max solutions reached"
                             : "max steps exhausted";
    std::cerr << r.solutions.size() << " solution(s), " << r.steps << " step(s), " << status
              << "\n";
    if (!r.solutions.empty()) return 0;
    return r.status == coalp::SearchStatus::completed ? 1 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallel coinductive derivation engine for first-order logic programs"};
    app.require_subcommand(0, 1);

    RunOptions opt;
    app.add_option("--program", opt.program_path, "Logic program file");
    app.add_option("--goal", opt.goal_text, "Goal atom, e.g. 'btree(X)'");
    app.add_option("--mode", opt.mode, "Derivation mode")
        ->check(CLI::IsMember({"ground", "coinductive"}))
        ->capture_default_str();
    app.add_option("--threads", opt.threads, "Search worker threads")->capture_default_str();
    app.add_flag("--expand-parallel", opt.expand_parallel, "Parallel tree expansion");
    app.add_option("--expand-threads", opt.expand_threads, "Expansion worker threads")
        ->capture_default_str();
    app.add_option("--solutions", opt.solutions, "Stop after this many solutions");
    app.add_option("--max-steps", opt.max_steps, "Derivation step budget (default 10000)");
    app.add_option("--queue", opt.queue, "Work queue discipline")
        ->check(CLI::IsMember({"fifo", "lifo"}))
        ->capture_default_str();
    app.add_option("--emit-tree", opt.emit_tree, "Write the derivation tree per step")
        ->check(CLI::IsMember({"dot", "json"}));
    app.add_option("--emit-templates", opt.emit_templates, "Write the compiled clause trees")
        ->check(CLI::IsMember({"dot", "json"}));
    app.add_option("--emit-prefix", opt.emit_prefix, "Output file name prefix")
        ->capture_default_str();
    app.add_option("--budget", opt.budget, "Tree node budget")->capture_default_str();
    app.add_flag("--no-occurs-check", opt.no_occurs_check,
                 "Disable the occurs check in unification");

    auto* gen = app.add_subcommand("gen", "Generate a benchmark program on stdout");
    gen->require_subcommand(1);
    unsigned gen_n = 1;
    auto* bta = gen->add_subcommand("bta", "Balanced binary-tree program");
    bta->add_option("--n", gen_n, "Generator iterations")->capture_default_str();
    auto* uta = gen->add_subcommand("uta", "Unbalanced binary-tree program");
    uta->add_option("--n", gen_n, "Generator iterations")->capture_default_str();
    auto* datalog = gen->add_subcommand("datalog", "Random acyclic propositional program");
    std::uint64_t dl_seed = 1;
    std::size_t dl_clauses = 30;
    datalog->add_option("--seed", dl_seed, "RNG seed")->capture_default_str();
    datalog->add_option("--clauses", dl_clauses, "Clause count")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "Time search configurations");
    std::string bench_program, bench_goal, bench_configs = "1t", bench_csv_path;
    unsigned bench_repeats = 3;
    double bench_timeout = 60.0;
    bench->add_option("--program", bench_program, "Logic program file")->required();
    bench->add_option("--goal", bench_goal, "Goal atom")->required();
    bench->add_option("--configs", bench_configs, "Comma-separated labels, e.g. 1t,4t,6t+6e")
        ->capture_default_str();
    bench->add_option("--repeats", bench_repeats, "Repeats per configuration (median reported)")
        ->capture_default_str();
    bench->add_option("--csv", bench_csv_path, "Also write a CSV report to this file");
    bench->add_option("--timeout", bench_timeout, "Per-run timeout in seconds")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            coalp::Program p;
            if (bta->parsed()) p = coalp::generate_bta(gen_n);
            else if (uta->parsed()) p = coalp::generate_uta(gen_n);
            else p = coalp::generate_datalog(dl_seed, dl_clauses);
            std::cout << coalp::to_string(p);
            return 0;
        }
        if (bench->parsed()) {
            coalp::Program p = load_program(bench_program);
            coalp::Goal g = load_goal(bench_goal);
            auto rows = coalp::parse_bench_configs(bench_configs);
            auto reports = coalp::run_bench(p, g, rows, bench_repeats, bench_timeout,
                                            bench_program);
            std::cout << coalp::bench_table(reports);
            if (!bench_csv_path.empty()) write_text(bench_csv_path, coalp::bench_csv(reports));
            return 0;
        }

        if (opt.program_path.empty()) {
            std::cerr << "error: --program is required (see --help)\n";
            return 2;
        }
        coalp::Program p = load_program(opt.program_path);
        coalp::TemplateStore store = coalp::compile(p);
        if (!opt.emit_templates.empty()) {
            std::string text = opt.emit_templates == "dot" ? coalp::templates_to_dot(store)
                                                            : coalp::templates_to_json(store);
            write_text(opt.emit_prefix + "_templates." + opt.emit_templates, text);
            if (opt.goal_text.empty()) return 0;
        }
        if (opt.goal_text.empty()) {
            std::cerr << "error: --goal is required (see --help)\n";
            return 2;
        }
        coalp::Goal g = load_goal(opt.goal_text);
        if (g.atoms.size() != 1) {
            std::cerr << "error: the runner takes a single-atom goal\n";
            return 2;
        }
        if (opt.mode == "ground") return run_ground(store, g.atoms[0], opt);
        return run_coinductive(store, g.atoms[0], opt);
    } catch (const coalp::ModeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
