#include "coalp/search.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace coalp {

namespace {

int compare_substitutions(const Substitution& a, const Substitution& b) {
    auto ia = a.bindings().begin(), ea = a.bindings().end();
    auto ib = b.bindings().begin(), eb = b.bindings().end();
    for (; ia != ea && ib != eb; ++ia, ++ib) {
        if (auto c = ia->first <=> ib->first; c != 0) return c < 0 ? -1 : 1;
        if (int c = compare(ia->second, ib->second); c != 0) return c;
    }
    if (ia != ea) return 1;
    if (ib != eb) return -1;
    return 0;
}

// A state's tree is reported successful only via a real or-branch at the
// root: successes that consist of nothing but the root's own `proved`
// marker were recorded on an earlier state in the lineage.
std::optional<std::pair<std::size_t, AndNode>> fresh_success_witness(const AndNode& root) {
    std::optional<std::pair<std::size_t, AndNode>> best;
    for (const auto& o : root.or_children) {
        std::size_t cost = 2;
        std::vector<AndNode> children;
        bool ok = true;
        for (const auto& c : o.and_children) {
            auto w = success_witness(c);
            if (!w) { ok = false; break; }
            cost += w->first;
            children.push_back(std::move(w->second));
        }
        if (!ok) continue;
        if (!best || cost < best->first) {
            AndNode w;
            w.atom = root.atom;
            OrNode ow;
            ow.and_children = std::move(children);
            w.or_children.push_back(std::move(ow));
            best = {{cost, std::move(w)}};
        }
    }
    return best;
}

template <class T>
class Channel {
public:
    void push(T v) {
        {
            std::lock_guard lk(mu_);
            items_.push_back(std::move(v));
        }
        cv_.notify_one();
    }

    std::optional<T> pop() {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] { return !items_.empty() || closed_; });
        if (items_.empty()) return std::nullopt;
        T v = std::move(items_.front());
        items_.pop_front();
        return v;
    }

    void close() {
        {
            std::lock_guard lk(mu_);
            closed_ = true;
        }
        cv_.notify_all();
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<T> items_;
    bool closed_ = false;
};

struct Job {
    std::uint64_t id;
    DerivationState state;
};

struct Outcome {
    std::uint64_t id;
    std::size_t parent_rank;
    std::optional<Solution> solution;
    std::vector<DerivationState> successors;
    std::optional<CoTree> trace;  // tree snapshot when tracing is on
};

struct BufferedSolution {
    Solution sol;
    std::uint64_t seq;  // discovery order, the final tie-break
};

}  // namespace

SearchResult search_traced(const TemplateStore& store, const Atom& goal, const SearchConfig& cfg,
                           const std::function<void(const Solution&)>& on_solution,
                           const std::function<void(std::size_t, const CoTree&)>& on_state) {
    EngineOptions opts;
    opts.budget = cfg.budget;
    opts.occurs_check = cfg.occurs_check;
    opts.expansion_threads = cfg.parallel_expansion ? std::max(1u, cfg.expansion_threads) : 1;

    const std::set<Var> goal_vars = vars_of(goal);
    const bool tracing = static_cast<bool>(on_state);

    auto process = [&](Job job) {
        Outcome out;
        out.id = job.id;
        out.parent_rank = job.state.total_sub_length;
        if (tracing) out.trace = job.state.tree;
        if (auto fresh = fresh_success_witness(job.state.tree.root)) {
            Substitution composed;
            for (const auto& s : job.state.chain) composed = compose(composed, s);
            Solution sol;
            sol.answer = restrict_to(composed, goal_vars);
            sol.goal_instance = apply(composed, goal);
            sol.witness = std::move(fresh->second);
            sol.rank = job.state.total_sub_length;
            sol.chain = job.state.chain;
            out.solution = std::move(sol);
        }
        prune_and_compact(job.state.tree);
        out.successors = derive_step(std::move(job.state), store, opts);
        return out;
    };

    Channel<Job> jobs;
    Channel<Outcome> results;
    const unsigned nworkers = std::max(1u, cfg.worker_threads);
    std::vector<std::thread> workers;
    workers.reserve(nworkers);
    for (unsigned w = 0; w < nworkers; ++w)
        workers.emplace_back([&] {
            while (auto job = jobs.pop()) results.push(process(std::move(*job)));
        });

    SearchResult result;

    DerivationState seed;
    seed.tree = build_cotree(store, goal, opts);

    std::deque<DerivationState> queue;
    queue.push_back(std::move(seed));
    std::multiset<std::size_t> pending_ranks{0};

    std::vector<BufferedSolution> buffer;  // kept sorted by (rank, answer, seq)
    auto buffer_less = [](const BufferedSolution& a, const BufferedSolution& b) {
        if (a.sol.rank != b.sol.rank) return a.sol.rank < b.sol.rank;
        if (int c = compare_substitutions(a.sol.answer, b.sol.answer); c != 0) return c < 0;
        return a.seq < b.seq;
    };

    const std::size_t step_limit =
        cfg.max_steps ? *cfg.max_steps : std::numeric_limits<std::size_t>::max();
    std::uint64_t dispatch_seq = 0;
    std::uint64_t integrate_next = 0;
    std::map<std::uint64_t, Outcome> stash;
    std::size_t inflight = 0;
    bool stop = false;  // no further dispatch; drain and flush

    auto emit = [&](const Solution& s) {
        result.solutions.push_back(s);
        if (on_solution) on_solution(s);
        if (cfg.max_solutions && result.solutions.size() >= *cfg.max_solutions) {
            result.status = SearchStatus::max_solutions_reached;
            stop = true;
        }
    };

    auto emit_ready = [&] {
        while (!buffer.empty() && !stop) {
            std::size_t min_pending = pending_ranks.empty()
                                          ? std::numeric_limits<std::size_t>::max()
                                          : *pending_ranks.begin();
            if (!pending_ranks.empty() && buffer.front().sol.rank >= min_pending) break;
            Solution s = std::move(buffer.front().sol);
            buffer.erase(buffer.begin());
            emit(s);
        }
    };

    while (true) {
        while (!stop && inflight < nworkers && !queue.empty()) {
            DerivationState st;
            if (cfg.queue_discipline == SearchConfig::Queue::fifo) {
                st = std::move(queue.front());
                queue.pop_front();
            } else {
                st = std::move(queue.back());
                queue.pop_back();
            }
            jobs.push(Job{dispatch_seq++, std::move(st)});
            ++inflight;
        }
        if (inflight == 0) break;

        auto res = results.pop();
        if (!res) break;  // cannot happen while workers run
        stash.emplace(res->id, std::move(*res));
        while (true) {
            auto it = stash.find(integrate_next);
            if (it == stash.end()) break;
            Outcome out = std::move(it->second);
            stash.erase(it);
            ++integrate_next;
            --inflight;
            pending_ranks.erase(pending_ranks.find(out.parent_rank));
            // Outcomes past the step limit are discarded wholesale so the
            // result does not depend on how far dispatch ran ahead.
            if (out.id >= step_limit) {
                result.status = SearchStatus::max_steps_exhausted;
                stop = true;
                continue;
            }
            ++result.steps;
            if (result.steps >= step_limit && result.status == SearchStatus::completed)
                result.status = SearchStatus::max_steps_exhausted;
            if (on_state && out.trace) on_state(out.id, *out.trace);
            if (out.solution) {
                BufferedSolution bs{std::move(*out.solution), out.id};
                buffer.insert(std::upper_bound(buffer.begin(), buffer.end(), bs, buffer_less),
                              std::move(bs));
            }
            if (!stop) {
                for (auto& succ : out.successors) {
                    pending_ranks.insert(succ.total_sub_length);
                    queue.push_back(std::move(succ));
                }
            }
            emit_ready();
            if (result.steps >= step_limit) stop = true;
        }
        if (stop && inflight == 0) break;
    }

    // Flush: anything still buffered is valid; emit in sorted order up to
    // the solution cap.
    for (auto& bs : buffer) {
        if (cfg.max_solutions && result.solutions.size() >= *cfg.max_solutions) break;
        result.solutions.push_back(std::move(bs.sol));
        if (on_solution) on_solution(result.solutions.back());
    }
    if (cfg.max_solutions && result.solutions.size() >= *cfg.max_solutions &&
        result.status == SearchStatus::completed)
        result.status = SearchStatus::max_solutions_reached;

    jobs.close();
    for (auto& w : workers) w.join();
    results.close();
    return result;
}

SearchResult search(const TemplateStore& store, const Atom& goal, const SearchConfig& cfg,
                    const std::function<void(const Solution&)>& on_solution) {
    return search_traced(store, goal, cfg, on_solution, nullptr);
}

}  // namespace coalp
