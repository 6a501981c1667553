#include "coalp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "coalp/clause_tree.hpp"

namespace coalp {

std::vector<BenchConfigRow> parse_bench_configs(const std::string& spec,
                                                const SearchConfig& base) {
    std::vector<BenchConfigRow> rows;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        BenchConfigRow row;
        row.label = item;
        row.cfg = base;
        std::size_t tpos = item.find('t');
        if (tpos == std::string::npos || tpos == 0)
            throw std::invalid_argument("bad bench config '" + item + "': expected '<N>t[+<M>e]'");
        row.cfg.worker_threads = static_cast<unsigned>(std::stoul(item.substr(0, tpos)));
        std::string rest = item.substr(tpos + 1);
        if (!rest.empty()) {
            if (rest.front() != '+' || rest.back() != 'e')
                throw std::invalid_argument("bad bench config '" + item +
                                            "': expected '<N>t[+<M>e]'");
            row.cfg.parallel_expansion = true;
            row.cfg.expansion_threads =
                static_cast<unsigned>(std::stoul(rest.substr(1, rest.size() - 2)));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("empty bench config list");
    return rows;
}

std::vector<BenchReport> run_bench(const Program& p, const Goal& goal,
                                   const std::vector<BenchConfigRow>& cfgs, unsigned repeats,
                                   double timeout_seconds, const std::string& program_id) {
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    if (goal.atoms.size() != 1)
        throw std::invalid_argument("bench requires a single-atom goal");
    TemplateStore store = compile(p);
    const Atom& goal_atom = goal.atoms[0];

    std::vector<BenchReport> reports;
    for (const auto& row : cfgs) {
        BenchReport rep;
        rep.program_id = program_id;
        rep.label = row.label;
        {
            EngineOptions opts;
            opts.budget = row.cfg.budget;
            opts.occurs_check = row.cfg.occurs_check;
            CoTree t = build_cotree(store, goal_atom, opts);
            rep.node_count = count_and_nodes(t.root);
            rep.leaf_count = count_leaves(t.root);
        }
        std::vector<double> times;
        for (unsigned r = 0; r < repeats; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            SearchResult res = search(store, goal_atom, row.cfg);
            auto t1 = std::chrono::steady_clock::now();
            double secs = std::chrono::duration<double>(t1 - t0).count();
            times.push_back(secs);
            rep.solutions = res.solutions.size();
            if (secs > timeout_seconds) {
                rep.timed_out = true;
                break;
            }
        }
        std::sort(times.begin(), times.end());
        rep.median_seconds = times[times.size() / 2];
        reports.push_back(std::move(rep));
    }

    // Speedup relative to the first plain 1-thread row (1.0 if absent).
    double base_time = 0.0;
    for (const auto& r : reports) {
        const BenchConfigRow* row = nullptr;
        for (const auto& c : cfgs)
            if (c.label == r.label) { row = &c; break; }
        if (row && row->cfg.worker_threads == 1 && !row->cfg.parallel_expansion) {
            base_time = r.median_seconds;
            break;
        }
    }
    for (auto& r : reports)
        r.speedup = (base_time > 0.0 && r.median_seconds > 0.0) ? base_time / r.median_seconds
                                                                : 1.0;
    return reports;
}

std::string bench_table(const std::vector<BenchReport>& reports) {
    std::ostringstream os;
    os << std::left << std::setw(16) << "program" << std::setw(10) << "config" << std::right
       << std::setw(12) << "median(s)" << std::setw(10) << "nodes" << std::setw(10) << "leaves"
       << std::setw(12) << "solutions" << std::setw(10) << "speedup" << "\n";
    for (const auto& r : reports) {
        os << std::left << std::setw(16) << r.program_id << std::setw(10) << r.label << std::right
           << std::setw(12) << std::fixed << std::setprecision(6) << r.median_seconds
           << std::setw(10) << r.node_count << std::setw(10) << r.leaf_count << std::setw(12)
           << r.solutions << std::setw(10) << std::setprecision(2) << r.speedup
           << (r.timed_out ? "  TIMEOUT" : "") << "\n";
    }
    return os.str();
}

std::string bench_csv(const std::vector<BenchReport>& reports) {
    std::ostringstream os;
    os << "program,config,median_seconds,node_count,leaf_count,solutions,speedup,timed_out\n";
    for (const auto& r : reports) {
        os << r.program_id << "," << r.label << "," << std::setprecision(9) << r.median_seconds
           << "," << r.node_count << "," << r.leaf_count << "," << r.solutions << ","
           << std::setprecision(4) << r.speedup << "," << (r.timed_out ? 1 : 0) << "\n";
    }
    return os.str();
}

}  // namespace coalp
