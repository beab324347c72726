#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "illusolve/exact.hpp"
#include "illusolve/instance.hpp"

namespace illusolve {

// Bookkeeping for a reduction run: enough to translate solutions across
// the reduction in both directions and to re-verify them.
struct reduction_artifact {
    enum class direction_t { labels_to_demands, demands_to_labels };
    direction_t direction;

    ei_instance ei;   // the labeled side (source or product)
    tvd_instance tvd; // the demand side (source or product)

    // source vertex -> vertex in the produced instance (identity layout:
    // originals keep their ids, gadget vertices are appended).
    std::vector<vertex_t> vertex_map;
    // produced-instance ids of gadget vertices, sorted
    std::vector<vertex_t> auxiliary;
    // for each produced-instance vertex: the original it was added for,
    // or -1 for originals themselves
    std::vector<vertex_t> aux_owner;
};

struct ei_to_tvd_result {
    tvd_instance out;
    reduction_artifact art;
};

struct tvd_to_ei_result {
    ei_instance out;
    reduction_artifact art;
};

// Labeled instance -> demand instance: attach one pendant vertex to every
// 0-labeled vertex; originals demand ceil(deg/2) (degree in the source),
// pendants demand 1. Minimum demand-set size = minimum flip count + number
// of 0-labeled vertices.
inline ei_to_tvd_result ei_to_tvd(const ei_instance & inst)
{
    inst.validate();
    ei_to_tvd_result res;
    res.art.direction = reduction_artifact::direction_t::labels_to_demands;
    res.art.ei = inst;

    graph_builder gb;
    std::vector<int> k;
    res.art.vertex_map.resize(inst.g.n);
    res.art.aux_owner.assign(inst.g.n, -1);
    for (vertex_t v = 0; v < inst.g.n; ++v) {
        res.art.vertex_map[v] = gb.add_vertex();
        k.push_back((inst.g.degree(v) + 1) / 2);
    }
    for (auto [u, v] : inst.g.edges)
        gb.add_edge(u, v);
    for (vertex_t v = 0; v < inst.g.n; ++v) {
        if (inst.label[v])
            continue;
        vertex_t w = gb.add_vertex();
        gb.add_edge(v, w);
        k.push_back(1);
        // the pendant raises its anchor's degree, not its demand
        res.art.auxiliary.push_back(w);
        res.art.aux_owner.push_back(v);
    }
    res.out.g = gb.build();
    res.out.k = std::move(k);
    res.out.validate();
    res.art.tvd = res.out;
    return res;
}

// Demand instance -> labeled instance. Originals are labeled 1 and every
// original v gets one 2-vertex pendant path labeled (0,0). The leftover
// budget b = 2 k(v) + 1 - deg(v) is balanced with b pendant 3-vertex paths
// labeled (1,0,0) when b >= 0, else with |b| extra 2-vertex paths labeled
// (0,0); either way v's surplus lands on exactly 2 k(v).
inline tvd_to_ei_result tvd_to_ei(const tvd_instance & inst)
{
    inst.validate();
    tvd_to_ei_result res;
    res.art.direction = reduction_artifact::direction_t::demands_to_labels;
    res.art.tvd = inst;

    graph_builder gb;
    std::vector<std::uint8_t> label;
    res.art.vertex_map.resize(inst.g.n);
    res.art.aux_owner.assign(inst.g.n, -1);
    for (vertex_t v = 0; v < inst.g.n; ++v) {
        res.art.vertex_map[v] = gb.add_vertex();
        label.push_back(1);
    }
    for (auto [u, v] : inst.g.edges)
        gb.add_edge(u, v);

    auto add_aux = [&](vertex_t owner, std::uint8_t l) {
        vertex_t w = gb.add_vertex();
        label.push_back(l);
        res.art.auxiliary.push_back(w);
        res.art.aux_owner.push_back(owner);
        return w;
    };
    for (vertex_t v = 0; v < inst.g.n; ++v) {
        vertex_t a = add_aux(v, 0); // mandatory 2-path, head
        vertex_t b = add_aux(v, 0);
        gb.add_edge(v, a);
        gb.add_edge(a, b);
        int budget = 2 * inst.k[v] + 1 - inst.g.degree(v);
        if (budget >= 0) {
            for (int i = 0; i < budget; ++i) {
                vertex_t p = add_aux(v, 1); // 3-path head, the flippable helper
                vertex_t q = add_aux(v, 0);
                vertex_t r = add_aux(v, 0);
                gb.add_edge(v, p);
                gb.add_edge(p, q);
                gb.add_edge(q, r);
            }
        }
        else {
            for (int i = 0; i < -budget; ++i) {
                vertex_t p = add_aux(v, 0); // balancing 2-path
                vertex_t q = add_aux(v, 0);
                gb.add_edge(v, p);
                gb.add_edge(p, q);
            }
        }
    }
    res.out.g = gb.build();
    res.out.label = std::move(label);
    res.out.validate();
    res.art.ei = res.out;
    return res;
}

// Minimum demand-set by enumeration, increasing cardinality, lexicographic
// tie-break.
inline tvd_solution tvd_brute_force(const tvd_instance & inst, int cap = 20)
{
    inst.validate();
    if (inst.g.n > cap)
        throw size_error("demand-set enumeration limited to " + std::to_string(cap) +
                         " vertices, instance has " + std::to_string(inst.g.n));
    std::vector<std::uint64_t> row;
    std::vector<int> need;
    for (vertex_t v = 0; v < inst.g.n; ++v) {
        if (inst.k[v] == 0)
            continue;
        std::uint64_t r = 0;
        for (vertex_t u : inst.g.adj[v])
            r |= std::uint64_t{1} << u;
        row.push_back(r);
        need.push_back(inst.k[v]);
    }
    auto feasible = [&](std::uint64_t mask) {
        for (size_t i = 0; i < row.size(); ++i)
            if (std::popcount(mask & row[i]) < need[i])
                return false;
        return true;
    };
    auto found = min_subset_search(inst.g.n, feasible);
    if (!found) // k(v) <= deg(v), so choosing every vertex always works
        throw contract_error("exhaustive demand-set search found no feasible set");
    tvd_solution sol;
    sol.chosen.assign(found->begin(), found->end());
    sol.cost = static_cast<int>(sol.chosen.size());
    sol.feasible = tvd_verify(inst, sol.chosen).feasible;
    if (!sol.feasible)
        throw contract_error("demand-set enumeration produced an infeasible set");
    return sol;
}

// Translate a demand-set on the product of ei_to_tvd back to a flip set on
// the source. Gadget pendants in the set are first replaced by original
// neighbors of their anchor (never worse: a pendant only serves its
// anchor), then the forced 0-labeled originals are dropped.
inline solution map_tvd_solution_to_ei(const reduction_artifact & art,
                                       const std::vector<vertex_t> & chosen)
{
    if (art.direction != reduction_artifact::direction_t::labels_to_demands)
        throw input_error("artifact does not come from the labels-to-demands reduction");
    if (!tvd_verify(art.tvd, chosen).feasible)
        throw contract_error("input set is not feasible for the produced demand instance");

    const ei_instance & src = art.ei;
    std::vector<char> in(art.tvd.g.n, 0);
    for (vertex_t v : chosen)
        in[v] = 1;
    // replace chosen pendants: their anchor keeps enough original neighbors
    for (vertex_t w : art.auxiliary) {
        if (!in[w])
            continue;
        in[w] = 0;
        vertex_t anchor = art.aux_owner[w];
        int have = 0;
        for (vertex_t u : art.tvd.g.adj[anchor])
            have += in[u];
        if (have < art.tvd.k[anchor]) {
            for (vertex_t u : src.g.adj[anchor]) {
                if (!in[u]) {
                    in[u] = 1;
                    break;
                }
            }
        }
    }
    solution sol;
    for (vertex_t v = 0; v < src.g.n; ++v)
        if (in[v] && src.label[v] == 1)
            sol.flipped.push_back(v);
    sol.cost = static_cast<int>(sol.flipped.size());
    sol.solver = "reduction-map";
    sol.feasible = verify(src, sol.flipped).feasible;
    if (!sol.feasible)
        throw contract_error("mapped flip set is not feasible for the source instance");
    return sol;
}

// Translate a flip set on the product of tvd_to_ei back to a demand-set on
// the source. Upward flips are reverted (never needed), flips at gadget
// 3-path heads are replaced by original neighbors of their anchor, and the
// rest restricts to originals.
inline tvd_solution map_ei_solution_to_tvd(const reduction_artifact & art,
                                           const std::vector<vertex_t> & flips)
{
    if (art.direction != reduction_artifact::direction_t::demands_to_labels)
        throw input_error("artifact does not come from the demands-to-labels reduction");
    const ei_instance & prod = art.ei;
    const tvd_instance & src = art.tvd;
    if (!verify(prod, flips).feasible)
        throw contract_error("input flip set is not feasible for the produced labeled instance");

    std::vector<char> in(prod.g.n, 0);
    for (vertex_t v : flips)
        if (prod.label[v] == 1) // keep only downward flips
            in[v] = 1;
    auto satisfied = [&](vertex_t v) {
        int have = 0;
        for (vertex_t u : prod.g.adj[v])
            have += in[u] && prod.label[u] == 1;
        return have >= src.k[v];
    };
    for (vertex_t w : art.auxiliary) {
        if (!in[w])
            continue;
        in[w] = 0;
        vertex_t anchor = art.aux_owner[w];
        if (!satisfied(anchor)) {
            for (vertex_t u : src.g.adj[anchor]) {
                if (!in[u]) {
                    in[u] = 1;
                    break;
                }
            }
        }
    }
    tvd_solution sol;
    for (vertex_t v = 0; v < src.g.n; ++v)
        if (in[v])
            sol.chosen.push_back(v);
    sol.cost = static_cast<int>(sol.chosen.size());
    sol.feasible = tvd_verify(src, sol.chosen).feasible;
    if (!sol.feasible)
        throw contract_error("mapped demand-set is not feasible for the source instance");
    return sol;
}

} // namespace illusolve
