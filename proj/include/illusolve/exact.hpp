#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "illusolve/instance.hpp"

namespace illusolve {

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0)
{
    auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration_cast<std::chrono::nanoseconds>(dt).count() / 1e6;
}

} // namespace detail

// Enumerates subsets of 0..num_candidates-1 by increasing cardinality and
// lexicographically within each cardinality, returning the first subset the
// predicate accepts. The predicate sees the subset as a bitmask over
// candidate indices. Because candidates are passed in ascending vertex
// order, the first hit is the lexicographically smallest minimum subset.
template <typename Pred>
inline std::optional<std::vector<int>> min_subset_search(int num_candidates, Pred && feasible)
{
    if (num_candidates > 62)
        throw size_error("subset enumeration limited to 62 candidates, got " +
                         std::to_string(num_candidates));
    if (feasible(std::uint64_t{0}))
        return std::vector<int>{};
    for (int c = 1; c <= num_candidates; ++c) {
        std::vector<int> idx(c);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            std::uint64_t mask = 0;
            for (int i : idx)
                mask |= std::uint64_t{1} << i;
            if (feasible(mask))
                return idx;
            int i = c - 1;
            while (i >= 0 && idx[i] == num_candidates - c + i)
                --i;
            if (i < 0)
                break;
            ++idx[i];
            for (int j = i + 1; j < c; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }
    return std::nullopt;
}

// Exact solver by enumeration over subsets of 1-labeled vertices. Correct
// because reverting any 0->1 flip of a feasible labeling keeps it feasible
// and cheaper, so some optimum flips 1-labeled vertices only.
inline solution brute_force(const ei_instance & inst, const subset_spec & subset, int cap = 22)
{
    auto t0 = std::chrono::steady_clock::now();
    inst.validate();
    if (subset.size() != inst.g.n)
        throw input_error("subset mask size does not match vertex count");
    warn_if_one_heavy(inst, "brute_force");
    auto ones = inst.one_vertices();
    if (static_cast<int>(ones.size()) > cap)
        throw size_error("brute force limited to " + std::to_string(cap) +
                         " one-labeled vertices, instance has " + std::to_string(ones.size()));
    std::vector<int> one_index(inst.g.n, -1);
    for (size_t i = 0; i < ones.size(); ++i)
        one_index[ones[i]] = static_cast<int>(i);

    // One constraint row per subset vertex currently under illusion: at
    // least ceil(surplus/2) of its 1-labeled neighbors must flip.
    std::vector<std::uint64_t> row;
    std::vector<int> need;
    for (vertex_t v = 0; v < inst.g.n; ++v) {
        if (!subset.contains(v))
            continue;
        int s = surplus(inst, v);
        if (s <= 0)
            continue;
        std::uint64_t r = 0;
        for (vertex_t u : inst.g.adj[v])
            if (one_index[u] != -1)
                r |= std::uint64_t{1} << one_index[u];
        row.push_back(r);
        need.push_back((s + 1) / 2);
    }

    auto feasible = [&](std::uint64_t mask) {
        for (size_t i = 0; i < row.size(); ++i)
            if (std::popcount(mask & row[i]) < need[i])
                return false;
        return true;
    };
    auto found = min_subset_search(static_cast<int>(ones.size()), feasible);
    if (!found) // flipping every 1-labeled vertex always works
        throw contract_error("exhaustive flip search found no feasible set");

    solution sol;
    for (int i : *found)
        sol.flipped.push_back(ones[i]);
    sol.cost = static_cast<int>(sol.flipped.size());
    sol.solver = "brute";
    sol.feasible = verify(inst, sol.flipped, subset).feasible;
    if (!sol.feasible)
        throw contract_error("brute force produced an infeasible flip set");
    sol.time_ms = detail::elapsed_ms(t0);
    return sol;
}

inline solution brute_force(const ei_instance & inst, int cap = 22)
{
    return brute_force(inst, subset_spec::all(inst.g.n), cap);
}

// Validation oracle over the full labeling space: flips may go both ways.
// Used to confirm that restricting flips to 1-labeled vertices loses nothing.
inline solution brute_force_all_labelings(const ei_instance & inst, const subset_spec & subset,
                                          int cap = 20)
{
    auto t0 = std::chrono::steady_clock::now();
    inst.validate();
    if (subset.size() != inst.g.n)
        throw input_error("subset mask size does not match vertex count");
    if (inst.g.n > cap)
        throw size_error("full labeling enumeration limited to " + std::to_string(cap) +
                         " vertices, instance has " + std::to_string(inst.g.n));

    // Flipping a 0-labeled neighbor raises a surplus by two, flipping a
    // 1-labeled neighbor lowers it by two; every subset vertex is checked
    // because upward flips can create new illusions anywhere.
    std::vector<int> base;
    std::vector<std::uint64_t> up, down;
    for (vertex_t v = 0; v < inst.g.n; ++v) {
        if (!subset.contains(v))
            continue;
        std::uint64_t u_mask = 0, d_mask = 0;
        for (vertex_t u : inst.g.adj[v])
            (inst.label[u] ? d_mask : u_mask) |= std::uint64_t{1} << u;
        base.push_back(surplus(inst, v));
        up.push_back(u_mask);
        down.push_back(d_mask);
    }
    auto feasible = [&](std::uint64_t mask) {
        for (size_t i = 0; i < base.size(); ++i)
            if (base[i] + 2 * std::popcount(mask & up[i]) - 2 * std::popcount(mask & down[i]) > 0)
                return false;
        return true;
    };
    auto found = min_subset_search(inst.g.n, feasible);
    if (!found)
        throw contract_error("exhaustive labeling search found no feasible labeling");

    solution sol;
    sol.flipped.assign(found->begin(), found->end());
    sol.cost = static_cast<int>(sol.flipped.size());
    sol.solver = "brute-all";
    sol.feasible = verify(inst, sol.flipped, subset).feasible;
    if (!sol.feasible)
        throw contract_error("full labeling search produced an infeasible flip set");
    sol.time_ms = detail::elapsed_ms(t0);
    return sol;
}

inline solution brute_force_all_labelings(const ei_instance & inst, int cap = 20)
{
    return brute_force_all_labelings(inst, subset_spec::all(inst.g.n), cap);
}

} // namespace illusolve
