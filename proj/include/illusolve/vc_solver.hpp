#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <vector>

#include "illusolve/exact.hpp"
#include "illusolve/instance.hpp"
#include "illusolve/parallel.hpp"

namespace illusolve {

namespace detail {

struct mvc_search {
    const graph & g;
    int limit;
    std::vector<char> in_cover;
    std::vector<vertex_t> current;
    std::vector<vertex_t> best;
    bool have_best = false;

    explicit mvc_search(const graph & g_, int limit_) : g(g_), limit(limit_), in_cover(g_.n, 0) {}

    // first edge (in sorted edge order) with neither endpoint chosen
    int first_uncovered() const
    {
        for (size_t i = 0; i < g.edges.size(); ++i)
            if (!in_cover[g.edges[i].first] && !in_cover[g.edges[i].second])
                return static_cast<int>(i);
        return -1;
    }

    void consider_leaf()
    {
        std::vector<vertex_t> cand = current;
        std::sort(cand.begin(), cand.end());
        if (!have_best || cand.size() < best.size() ||
            (cand.size() == best.size() && cand < best)) {
            best = std::move(cand);
            have_best = true;
        }
    }

    void dfs()
    {
        int e = first_uncovered();
        if (e == -1) {
            consider_leaf();
            return;
        }
        // every completion needs at least one more vertex
        if (static_cast<int>(current.size()) + 1 > limit)
            return;
        if (have_best && current.size() + 1 > best.size())
            return;
        for (vertex_t w : {g.edges[e].first, g.edges[e].second}) {
            in_cover[w] = 1;
            current.push_back(w);
            dfs();
            current.pop_back();
            in_cover[w] = 0;
        }
    }
};

} // namespace detail

// Exact minimum vertex cover with depth cap; nullopt when every cover
// exceeds `limit`. Tie-break: lexicographically smallest minimum cover.
inline std::optional<std::vector<vertex_t>> minimum_vertex_cover_bounded(const graph & g, int limit)
{
    detail::mvc_search s(g, std::min(limit, g.n));
    s.dfs();
    if (!s.have_best)
        return std::nullopt;
    return s.best;
}

inline std::vector<vertex_t> minimum_vertex_cover(const graph & g)
{
    auto r = minimum_vertex_cover_bounded(g, g.n);
    if (!r) // the full vertex set always covers
        throw contract_error("vertex cover search failed");
    return *r;
}

// Vertices outside the cover form an independent set; grouping them by
// their (cover-only) neighborhood yields the twin classes.
struct twin_partition_t {
    std::vector<std::vector<vertex_t>> classes;    // sorted members; classes ordered by first member
    std::vector<std::vector<vertex_t>> class_nbrs; // the shared neighborhood of each class
};

inline twin_partition_t twin_partition(const ei_instance & inst, const std::vector<vertex_t> & cover)
{
    inst.validate();
    std::vector<char> in_cover(inst.g.n, 0);
    for (vertex_t v : cover) {
        inst.g.check_vertex(v);
        in_cover[v] = 1;
    }
    for (auto [u, v] : inst.g.edges)
        if (!in_cover[u] && !in_cover[v])
            throw contract_error("set passed as vertex cover misses edge (" +
                                 std::to_string(u + 1) + ", " + std::to_string(v + 1) + ")");
    std::map<std::vector<vertex_t>, std::vector<vertex_t>> groups;
    for (vertex_t v = 0; v < inst.g.n; ++v)
        if (!in_cover[v])
            groups[inst.g.adj[v]].push_back(v);
    twin_partition_t part;
    for (auto & [nbrs, members] : groups) {
        part.classes.push_back(members); // members ascend: filled in id order
        part.class_nbrs.push_back(nbrs);
    }
    // order classes by their smallest member for reproducibility
    std::vector<size_t> order(part.classes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return part.classes[a][0] < part.classes[b][0];
    });
    twin_partition_t out;
    for (size_t i : order) {
        out.classes.push_back(std::move(part.classes[i]));
        out.class_nbrs.push_back(std::move(part.class_nbrs[i]));
    }
    return out;
}

// Grouped integer program: choose how many members of each twin class keep
// label 1 (x_i <= upper_i), subject to each cover vertex u seeing at most
// slack_u additional 1s over its already-fixed cover neighbors. Objective:
// maximize total kept, i.e. minimize flips inside the independent set.
struct group_ip_model {
    std::vector<int> upper;                            // per class
    std::vector<int> slack;                            // per constraint (cover vertex)
    std::vector<std::vector<int>> class_constraints;   // class -> constraint indices
};

struct group_ip_result {
    std::vector<int> x;
    int objective = 0;
};

inline std::optional<group_ip_result> solve_group_ip(const group_ip_model & model)
{
    for (int s : model.slack)
        if (s < 0)
            return std::nullopt;
    const int p = static_cast<int>(model.upper.size());
    std::vector<int> suffix_upper(p + 1, 0);
    for (int i = p - 1; i >= 0; --i)
        suffix_upper[i] = suffix_upper[i + 1] + model.upper[i];

    std::vector<int> slack = model.slack;
    std::vector<int> x(p, 0);
    group_ip_result best;
    best.objective = -1;

    // depth-first over classes, larger values first, with a sum bound;
    // the first optimum found is kept, making the result deterministic
    auto dfs = [&](auto && self, int i, int cur) -> void {
        if (cur + suffix_upper[i] <= best.objective)
            return;
        if (i == p) {
            best.objective = cur;
            best.x = x;
            return;
        }
        int hi = model.upper[i];
        for (int c : model.class_constraints[i])
            hi = std::min(hi, slack[c]);
        for (int val = hi; val >= 0; --val) {
            x[i] = val;
            for (int c : model.class_constraints[i])
                slack[c] -= val;
            self(self, i + 1, cur + val);
            for (int c : model.class_constraints[i])
                slack[c] += val;
        }
        x[i] = 0;
    };
    dfs(dfs, 0, 0);
    if (best.objective < 0)
        return std::nullopt;
    return best;
}

struct vc_options {
    bool full_guess_space = false; // also try upward flips inside the cover
    int jobs = 1;
    int guess_cap = 26; // max cover vertices enumerated over
};

// Fixed-parameter solver in the vertex cover size: enumerate flip choices
// on the cover, check the independent set is illusion-free under each
// choice, and settle the independent set with the grouped program.
inline solution solve_vertex_cover_fpt(const ei_instance & inst, vc_options opt = {})
{
    auto t0 = std::chrono::steady_clock::now();
    inst.validate();
    warn_if_one_heavy(inst, "solve_vertex_cover_fpt");

    auto cover = minimum_vertex_cover(inst.g);
    auto part = twin_partition(inst, cover);
    const int p = static_cast<int>(part.classes.size());

    // guess candidates: cover vertices whose flip is potentially useful
    std::vector<vertex_t> guessable;
    for (vertex_t u : cover)
        if (opt.full_guess_space || inst.label[u] == 1)
            guessable.push_back(u);
    std::sort(guessable.begin(), guessable.end());
    const int q = static_cast<int>(guessable.size());
    if (q > opt.guess_cap)
        throw size_error("cover guess enumeration limited to " + std::to_string(opt.guess_cap) +
                         " vertices, would need " + std::to_string(q));
    std::vector<int> guess_index(inst.g.n, -1);
    for (int i = 0; i < q; ++i)
        guess_index[guessable[i]] = i;

    // per twin class: 1-labeled members (cheapest flips first = smallest ids),
    // base surplus, and how a guess shifts it
    std::vector<std::vector<vertex_t>> class_ones(p);
    std::vector<int> class_surplus(p, 0);
    std::vector<std::uint64_t> class_down(p, 0), class_up(p, 0);
    for (int i = 0; i < p; ++i) {
        for (vertex_t v : part.classes[i])
            if (inst.label[v])
                class_ones[i].push_back(v);
        vertex_t rep = part.classes[i][0];
        class_surplus[i] = surplus(inst, rep);
        for (vertex_t u : part.class_nbrs[i]) {
            if (guess_index[u] == -1)
                continue;
            auto bit = std::uint64_t{1} << guess_index[u];
            (inst.label[u] ? class_down[i] : class_up[i]) |= bit;
        }
    }

    // per cover vertex: fixed 1-count among cover neighbors and guess masks
    const int nc = static_cast<int>(cover.size());
    std::vector<int> cover_index(inst.g.n, -1);
    for (int c = 0; c < nc; ++c)
        cover_index[cover[c]] = c;
    std::vector<int> base_ones(nc, 0), half_degree(nc, 0);
    std::vector<std::uint64_t> cov_down(nc, 0), cov_up(nc, 0);
    std::vector<std::vector<int>> constraint_classes(nc); // classes adjacent to each cover vertex
    for (int c = 0; c < nc; ++c) {
        vertex_t u = cover[c];
        half_degree[c] = inst.g.degree(u) / 2;
        for (vertex_t w : inst.g.adj[u]) {
            if (cover_index[w] == -1)
                continue; // independent-set neighbors enter via classes
            base_ones[c] += inst.label[w];
            if (guess_index[w] != -1) {
                auto bit = std::uint64_t{1} << guess_index[w];
                (inst.label[w] ? cov_down[c] : cov_up[c]) |= bit;
            }
        }
    }
    std::vector<std::vector<int>> class_constraints(p);
    for (int i = 0; i < p; ++i)
        for (vertex_t u : part.class_nbrs[i]) {
            constraint_classes[cover_index[u]].push_back(i);
            class_constraints[i].push_back(cover_index[u]);
        }

    struct candidate {
        long long cost = -1;
        std::vector<vertex_t> flips;
        bool better_than(const candidate & o) const
        {
            if (o.cost < 0)
                return cost >= 0;
            return cost >= 0 && (cost < o.cost || (cost == o.cost && flips < o.flips));
        }
    };

    std::atomic<long long> shared_bound{std::numeric_limits<long long>::max()};

    auto evaluate_guess = [&](std::uint64_t mask, candidate & local_best) {
        int guess_size = std::popcount(mask);
        long long bound = shared_bound.load(std::memory_order_relaxed);
        if (guess_size > bound)
            return; // a guess alone already costs more than a known solution
        // independent-set vertices must be illusion-free under the guess
        for (int i = 0; i < p; ++i) {
            int s = class_surplus[i] - 2 * std::popcount(mask & class_down[i]) +
                    2 * std::popcount(mask & class_up[i]);
            if (s > 0)
                return;
        }
        group_ip_model model;
        model.upper.resize(p);
        for (int i = 0; i < p; ++i)
            model.upper[i] = static_cast<int>(class_ones[i].size());
        model.slack.resize(nc);
        for (int c = 0; c < nc; ++c) {
            int ones_after = base_ones[c] - std::popcount(mask & cov_down[c]) +
                             std::popcount(mask & cov_up[c]);
            model.slack[c] = half_degree[c] - ones_after;
        }
        model.class_constraints = class_constraints;
        auto ip = solve_group_ip(model);
        if (!ip)
            return;
        long long cost = guess_size;
        for (int i = 0; i < p; ++i)
            cost += model.upper[i] - ip->x[i];
        if (local_best.cost >= 0 && cost > local_best.cost)
            return;
        std::vector<vertex_t> flips;
        for (int b = 0; b < q; ++b)
            if (mask >> b & 1)
                flips.push_back(guessable[b]);
        for (int i = 0; i < p; ++i) {
            int drop = model.upper[i] - ip->x[i];
            flips.insert(flips.end(), class_ones[i].begin(), class_ones[i].begin() + drop);
        }
        std::sort(flips.begin(), flips.end());
        candidate cand{cost, std::move(flips)};
        if (cand.better_than(local_best))
            local_best = std::move(cand);
        long long prev = shared_bound.load(std::memory_order_relaxed);
        while (cost < prev &&
               !shared_bound.compare_exchange_weak(prev, cost, std::memory_order_relaxed))
            ;
    };

    // enumerate guesses by increasing cardinality, lexicographic within one;
    // parallel runs split each cardinality level into chunks and merge in order
    candidate best;
    auto run_level = [&](const std::vector<std::uint64_t> & masks) {
        if (opt.jobs <= 1 || masks.size() < 64) {
            for (auto m : masks)
                evaluate_guess(m, best);
            return;
        }
        std::vector<candidate> chunk_best(std::min<std::size_t>(opt.jobs, masks.size()));
        parallel_chunks(masks.size(), opt.jobs, [&](int chunk, std::size_t lo, std::size_t hi) {
            chunk_best[chunk].cost = best.cost;
            chunk_best[chunk].flips = best.flips;
            for (std::size_t i = lo; i < hi; ++i)
                evaluate_guess(masks[i], chunk_best[chunk]);
        });
        for (auto & cb : chunk_best)
            if (cb.better_than(best))
                best = cb;
    };
    std::vector<std::uint64_t> level;
    level.push_back(0);
    run_level(level);
    for (int c = 1; c <= q; ++c) {
        if (best.cost >= 0 && c > best.cost)
            break; // |guess| alone exceeds the best cost found
        level.clear();
        std::vector<int> idx(c);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            std::uint64_t mask = 0;
            for (int i : idx)
                mask |= std::uint64_t{1} << i;
            level.push_back(mask);
            int i = c - 1;
            while (i >= 0 && idx[i] == q - c + i)
                --i;
            if (i < 0)
                break;
            ++idx[i];
            for (int j = i + 1; j < c; ++j)
                idx[j] = idx[j - 1] + 1;
        }
        run_level(level);
    }

    if (best.cost < 0)
        throw contract_error("cover-guess enumeration found no feasible labeling");
    solution sol;
    sol.cost = static_cast<int>(best.cost);
    sol.flipped = best.flips;
    sol.solver = "vc";
    sol.feasible = verify(inst, sol.flipped).feasible;
    if (!sol.feasible)
        throw contract_error("cover-based solver produced an infeasible flip set");
    sol.time_ms = detail::elapsed_ms(t0);
    return sol;
}

} // namespace illusolve
