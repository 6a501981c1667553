#pragma once

#include <string>
#include <vector>

#include "coalp/search.hpp"

namespace coalp {

struct BenchConfigRow {
    std::string label;  // e.g. "1t", "4t", "6t+6e"
    SearchConfig cfg;
};

struct BenchReport {
    std::string program_id;
    std::string label;
    double median_seconds = 0.0;
    std::size_t node_count = 0;   // and-nodes of the initial tree
    std::size_t leaf_count = 0;
    std::size_t solutions = 0;
    double speedup = 1.0;  // relative to the first sequential (1-thread) row
    bool timed_out = false;
};

/// Parse labels of the form "<N>t" or "<N>t+<M>e" (N worker threads,
/// optionally M expansion threads with parallel expansion on), comma
/// separated. Throws std::invalid_argument on malformed input.
std::vector<BenchConfigRow> parse_bench_configs(const std::string& spec,
                                                const SearchConfig& base = {});

/// Runs each configuration strictly sequentially, `repeats` times,
/// reporting the median wall time. A run exceeding `timeout_seconds`
/// marks the row timed out and skips its remaining repeats.
std::vector<BenchReport> run_bench(const Program& p, const Goal& goal,
                                   const std::vector<BenchConfigRow>& cfgs, unsigned repeats,
                                   double timeout_seconds = 60.0,
                                   const std::string& program_id = "program");

std::string bench_table(const std::vector<BenchReport>& reports);
std::string bench_csv(const std::vector<BenchReport>& reports);

}  // namespace coalp
