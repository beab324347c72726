#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <limits>
#include <vector>

#include "illusolve/exact.hpp"
#include "illusolve/instance.hpp"
#include "illusolve/tree_decomposition.hpp"

namespace illusolve {

// Largest per-vertex flip requirement over the subset; bounds the demand
// coordinates the dynamic program tracks.
inline int max_demand(const ei_instance & inst, const subset_spec & subset)
{
    int m = 0;
    for (vertex_t v = 0; v < inst.g.n; ++v)
        if (subset.contains(v))
            m = std::max(m, demand(inst, v));
    return m;
}

struct tw_stats {
    std::size_t peak_states = 0;
    std::size_t total_states = 0;
    int width = 0;
    std::size_t nodes = 0;
};

// A finished per-node table, exposed for white-box tests. States combine a
// flip choice U over the bag's 1-labeled vertices with one remaining-demand
// digit per bag vertex: state = u_bits * demand_count + demand_index, where
// the demand index is little-endian over bag positions with radix mu[p]+1.
struct tw_node_table {
    nice_kind kind = nice_kind::leaf;
    std::vector<vertex_t> bag;
    std::vector<int> mu;
    std::vector<int> one_pos; // bag positions carrying label 1, ascending
    std::size_t demand_count = 1;
    std::vector<std::int32_t> cost;

    std::size_t states() const { return cost.size(); }

    int demand_digit(std::size_t state, int pos) const
    {
        std::size_t d = state % demand_count;
        for (int p = 0; p < pos; ++p)
            d /= static_cast<std::size_t>(mu[p]) + 1;
        return static_cast<int>(d % (static_cast<std::size_t>(mu[pos]) + 1));
    }

    std::uint32_t u_bits(std::size_t state) const
    {
        return static_cast<std::uint32_t>(state / demand_count);
    }
};

struct tw_internals {
    std::vector<tw_node_table> tables; // indexed like the nice decomposition's nodes
};

struct tw_options {
    const tree_decomposition * decomposition = nullptr; // nullptr: run the heuristic
    bool keep_tables = false;
    std::size_t state_cap = std::size_t{1} << 24; // per-node table size guard
};

namespace detail {

constexpr std::int32_t tw_inf = std::numeric_limits<std::int32_t>::max() / 4;

struct tw_table {
    std::vector<vertex_t> bag;
    std::vector<int> mu;              // per bag position
    std::vector<std::size_t> stride;  // demand strides per position
    std::size_t demand_count = 1;
    std::vector<int> one_index_of_pos; // -1 where label 0
    std::vector<int> one_pos;
    std::vector<std::int32_t> cost;
    std::vector<std::uint64_t> bp;

    std::size_t states() const { return cost.size(); }
};

// advance little-endian digits; returns false after the last combination
inline bool next_digits(std::vector<int> & digits, const std::vector<int> & mu)
{
    for (std::size_t p = 0; p < digits.size(); ++p) {
        if (digits[p] < mu[p]) {
            ++digits[p];
            std::fill(digits.begin(), digits.begin() + p, 0);
            return true;
        }
    }
    return false;
}

} // namespace detail

// Exact solver for the subset-restricted problem by dynamic programming
// over a nice tree decomposition. States track, per bag vertex, an upper
// bound on the demand still to be served by flips outside the processed
// part, plus the exact flip choice inside the bag.
inline solution solve_treewidth(const ei_instance & inst, const subset_spec & subset,
                                tw_options opt = {}, tw_stats * stats = nullptr,
                                tw_internals * internals = nullptr)
{
    auto t0 = std::chrono::steady_clock::now();
    inst.validate();
    if (subset.size() != inst.g.n)
        throw input_error("subset mask size does not match vertex count");
    warn_if_one_heavy(inst, "solve_treewidth");

    tree_decomposition own_td;
    const tree_decomposition * td = opt.decomposition;
    if (td != nullptr) {
        auto check = validate_decomposition(inst.g, *td);
        if (!check.ok)
            throw input_error("invalid tree decomposition: " + check.message);
    }
    else {
        own_td = heuristic_decomposition(inst.g);
        td = &own_td;
    }
    nice_decomposition nd = to_nice(*td);

    std::vector<int> mu_of(inst.g.n, 0);
    for (vertex_t v = 0; v < inst.g.n; ++v)
        if (subset.contains(v))
            mu_of[v] = demand(inst, v);

    using detail::tw_inf;
    std::vector<detail::tw_table> tabs(nd.nodes.size());
    if (stats != nullptr)
        *stats = tw_stats{0, 0, td->width(), nd.nodes.size()};

    auto build_layout = [&](detail::tw_table & T, const std::vector<vertex_t> & bag) {
        T.bag = bag;
        const std::size_t b = bag.size();
        T.mu.resize(b);
        T.stride.resize(b);
        T.one_index_of_pos.assign(b, -1);
        std::size_t dc = 1;
        for (std::size_t p = 0; p < b; ++p) {
            T.mu[p] = mu_of[bag[p]];
            T.stride[p] = dc;
            dc *= static_cast<std::size_t>(T.mu[p]) + 1;
            if (dc > opt.state_cap)
                throw size_error("decomposition state space too large at a bag of size " +
                                 std::to_string(b));
            if (inst.label[bag[p]]) {
                T.one_index_of_pos[p] = static_cast<int>(T.one_pos.size());
                T.one_pos.push_back(static_cast<int>(p));
            }
        }
        T.demand_count = dc;
        if (T.one_pos.size() >= 31 || (dc << T.one_pos.size()) > opt.state_cap)
            throw size_error("decomposition state space too large at a bag of size " +
                             std::to_string(b));
        T.cost.assign(dc << T.one_pos.size(), tw_inf);
        T.bp.assign(T.cost.size(), 0);
        if (stats != nullptr) {
            stats->peak_states = std::max(stats->peak_states, T.cost.size());
            stats->total_states += T.cost.size();
        }
    };

    for (int t : nd.postorder) {
        const nice_node & node = nd.nodes[t];
        detail::tw_table & T = tabs[t];
        build_layout(T, node.bag);
        const std::size_t b = node.bag.size();

        if (node.kind == nice_kind::leaf) {
            T.cost[0] = 0;
            continue;
        }

        if (node.kind == nice_kind::introduce) {
            const detail::tw_table & C = tabs[node.child0];
            const vertex_t v = node.v;
            const int mu_v = mu_of[v];
            int pv = static_cast<int>(std::lower_bound(node.bag.begin(), node.bag.end(), v) -
                                      node.bag.begin());
            const int v_one = T.one_index_of_pos[pv];
            // bit over T's one indices for each bag neighbor of v
            std::uint32_t vnbr_ones = 0;
            std::vector<int> nbr_child_pos; // neighbor positions in the child bag
            for (std::size_t p = 0; p < b; ++p) {
                if (static_cast<int>(p) == pv || !inst.g.has_edge(node.bag[p], v))
                    continue;
                if (T.one_index_of_pos[p] != -1)
                    vnbr_ones |= std::uint32_t{1} << T.one_index_of_pos[p];
                nbr_child_pos.push_back(static_cast<int>(p) - (static_cast<int>(p) > pv ? 1 : 0));
            }
            const std::uint32_t u_count = std::uint32_t{1} << T.one_pos.size();
            std::vector<int> digits(b, 0), child_digits(b > 0 ? b - 1 : 0, 0);
            for (std::uint32_t u = 0; u < u_count; ++u) {
                const bool v_in_u = v_one != -1 && (u >> v_one & 1);
                std::uint32_t cu = u;
                if (v_one != -1) { // drop v's bit, order-preserving
                    std::uint32_t low = u & ((std::uint32_t{1} << v_one) - 1);
                    cu = low | ((u >> (v_one + 1)) << v_one);
                }
                const int need_min = mu_v - std::popcount(u & vnbr_ones);
                std::fill(digits.begin(), digits.end(), 0);
                std::size_t d_idx = 0;
                do {
                    const std::size_t s = static_cast<std::size_t>(u) * T.demand_count + d_idx;
                    if (digits[pv] >= need_min) {
                        for (std::size_t p = 0, q = 0; p < b; ++p)
                            if (static_cast<int>(p) != pv)
                                child_digits[q++] = digits[p];
                        if (v_in_u)
                            for (int w : nbr_child_pos)
                                child_digits[w] = std::min(C.mu[w], child_digits[w] + 1);
                        std::size_t ci = static_cast<std::size_t>(cu) * C.demand_count;
                        for (std::size_t p = 0; p < child_digits.size(); ++p)
                            ci += static_cast<std::size_t>(child_digits[p]) * C.stride[p];
                        if (C.cost[ci] < tw_inf) {
                            T.cost[s] = C.cost[ci] + (v_in_u ? 1 : 0);
                            T.bp[s] = ci;
                        }
                    }
                    ++d_idx;
                } while (detail::next_digits(digits, T.mu));
            }
            continue;
        }

        if (node.kind == nice_kind::forget) {
            const detail::tw_table & C = tabs[node.child0];
            const vertex_t v = node.v;
            int pvc = static_cast<int>(std::lower_bound(C.bag.begin(), C.bag.end(), v) -
                                       C.bag.begin());
            const int v_one_c = C.one_index_of_pos[pvc];
            const std::uint32_t u_count = std::uint32_t{1} << T.one_pos.size();
            std::vector<int> digits(b, 0);
            for (std::uint32_t u = 0; u < u_count; ++u) {
                std::uint32_t cu = u;
                if (v_one_c != -1) { // make room for v's bit in the child mask
                    std::uint32_t low = u & ((std::uint32_t{1} << v_one_c) - 1);
                    cu = low | ((u >> v_one_c) << (v_one_c + 1));
                }
                std::fill(digits.begin(), digits.end(), 0);
                std::size_t d_idx = 0;
                do {
                    const std::size_t s = static_cast<std::size_t>(u) * T.demand_count + d_idx;
                    // child demand vector: v's digit pinned to zero
                    std::size_t cd = 0;
                    for (std::size_t p = 0, q = 0; p < C.bag.size(); ++p)
                        if (static_cast<int>(p) != pvc)
                            cd += static_cast<std::size_t>(digits[q++]) * C.stride[p];
                    const std::size_t s0 = static_cast<std::size_t>(cu) * C.demand_count + cd;
                    std::int32_t best = C.cost[s0];
                    std::size_t from = s0;
                    if (v_one_c != -1) {
                        const std::size_t s1 =
                            static_cast<std::size_t>(cu | (std::uint32_t{1} << v_one_c)) *
                                C.demand_count +
                            cd;
                        if (C.cost[s1] < best) {
                            best = C.cost[s1];
                            from = s1;
                        }
                    }
                    if (best < tw_inf) {
                        T.cost[s] = best;
                        T.bp[s] = from;
                    }
                    ++d_idx;
                } while (detail::next_digits(digits, T.mu));
            }
            continue;
        }

        // join: children carry identical bags
        const detail::tw_table & A = tabs[node.child0];
        const detail::tw_table & B = tabs[node.child1];
        std::vector<std::uint32_t> nbr_ones(b, 0);
        for (std::size_t p = 0; p < b; ++p)
            for (std::size_t q = 0; q < b; ++q)
                if (p != q && T.one_index_of_pos[q] != -1 &&
                    inst.g.has_edge(node.bag[p], node.bag[q]))
                    nbr_ones[p] |= std::uint32_t{1} << T.one_index_of_pos[q];
        const std::uint32_t u_count = std::uint32_t{1} << T.one_pos.size();
        std::vector<int> digits(b, 0), help(b, 0), lo(b, 0), hi(b, 0), a(b, 0);
        for (std::uint32_t u = 0; u < u_count; ++u) {
            for (std::size_t p = 0; p < b; ++p)
                help[p] = std::popcount(u & nbr_ones[p]);
            const int dup = std::popcount(u); // bag flips counted by both children
            std::fill(digits.begin(), digits.end(), 0);
            std::size_t d_idx = 0;
            do {
                const std::size_t s = static_cast<std::size_t>(u) * T.demand_count + d_idx;
                // per-position split ranges of the required child demands
                bool empty = false;
                std::size_t ia = 0, ib = 0;
                for (std::size_t p = 0; p < b && !empty; ++p) {
                    int c = digits[p] + T.mu[p] - help[p];
                    if (c < 0)
                        c = 0; // bag flips alone already serve this vertex
                    lo[p] = std::max(0, c - T.mu[p]);
                    hi[p] = std::min(T.mu[p], c);
                    if (lo[p] > hi[p])
                        empty = true;
                    a[p] = lo[p];
                    ia += static_cast<std::size_t>(a[p]) * T.stride[p];
                    ib += static_cast<std::size_t>(c - a[p]) * T.stride[p];
                }
                if (!empty) {
                    const std::size_t base = static_cast<std::size_t>(u) * T.demand_count;
                    std::int32_t best = tw_inf;
                    std::size_t ba = 0, bb = 0;
                    while (true) {
                        if (A.cost[base + ia] < tw_inf && B.cost[base + ib] < tw_inf) {
                            std::int32_t cand = A.cost[base + ia] + B.cost[base + ib] - dup;
                            if (cand < best) {
                                best = cand;
                                ba = base + ia;
                                bb = base + ib;
                            }
                        }
                        // next split combination
                        std::size_t p = 0;
                        for (; p < b; ++p) {
                            if (a[p] < hi[p]) {
                                ++a[p];
                                ia += T.stride[p];
                                ib -= T.stride[p];
                                break;
                            }
                            ia -= static_cast<std::size_t>(a[p] - lo[p]) * T.stride[p];
                            ib += static_cast<std::size_t>(a[p] - lo[p]) * T.stride[p];
                            a[p] = lo[p];
                        }
                        if (p == b)
                            break;
                    }
                    if (best < tw_inf) {
                        T.cost[s] = best;
                        T.bp[s] = static_cast<std::uint64_t>(ba) |
                                  (static_cast<std::uint64_t>(bb) << 32);
                    }
                }
                ++d_idx;
            } while (detail::next_digits(digits, T.mu));
        }
    }

    const detail::tw_table & root_tab = tabs[nd.root];
    if (root_tab.cost[0] >= tw_inf)
        throw contract_error("decomposition dynamic program found no feasible labeling");
    const int answer = root_tab.cost[0];

    // walk the back-pointers; a vertex is flipped when some introduce node
    // carries it inside the flip choice
    std::vector<char> flip_flag(inst.g.n, 0);
    std::vector<std::pair<int, std::size_t>> walk{{nd.root, 0}};
    while (!walk.empty()) {
        auto [t, s] = walk.back();
        walk.pop_back();
        const nice_node & node = nd.nodes[t];
        const detail::tw_table & T = tabs[t];
        switch (node.kind) {
        case nice_kind::leaf:
            break;
        case nice_kind::introduce: {
            int pv = static_cast<int>(std::lower_bound(node.bag.begin(), node.bag.end(), node.v) -
                                      node.bag.begin());
            int v_one = T.one_index_of_pos[pv];
            std::uint32_t u = static_cast<std::uint32_t>(s / T.demand_count);
            if (v_one != -1 && (u >> v_one & 1))
                flip_flag[node.v] = 1;
            walk.push_back({node.child0, T.bp[s]});
            break;
        }
        case nice_kind::forget:
            walk.push_back({node.child0, T.bp[s]});
            break;
        case nice_kind::join:
            walk.push_back({node.child0, T.bp[s] & 0xffffffffull});
            walk.push_back({node.child1, T.bp[s] >> 32});
            break;
        }
    }

    solution sol;
    for (vertex_t v = 0; v < inst.g.n; ++v)
        if (flip_flag[v])
            sol.flipped.push_back(v);
    sol.cost = static_cast<int>(sol.flipped.size());
    if (sol.cost != answer)
        throw contract_error("decomposition solver cost does not match its flip set");
    sol.solver = "tw";
    sol.feasible = verify(inst, sol.flipped, subset).feasible;
    if (!sol.feasible)
        throw contract_error("decomposition solver produced an infeasible flip set");
    sol.time_ms = detail::elapsed_ms(t0);

    if (internals != nullptr && opt.keep_tables) {
        internals->tables.clear();
        internals->tables.resize(nd.nodes.size());
        for (size_t i = 0; i < nd.nodes.size(); ++i) {
            tw_node_table view;
            view.kind = nd.nodes[i].kind;
            view.bag = tabs[i].bag;
            view.mu = tabs[i].mu;
            view.one_pos = tabs[i].one_pos;
            view.demand_count = tabs[i].demand_count;
            view.cost = tabs[i].cost;
            internals->tables[i] = std::move(view);
        }
    }
    return sol;
}

inline solution solve_treewidth(const ei_instance & inst, tw_options opt = {},
                                tw_stats * stats = nullptr, tw_internals * internals = nullptr)
{
    return solve_treewidth(inst, subset_spec::all(inst.g.n), opt, stats, internals);
}

} // namespace illusolve
