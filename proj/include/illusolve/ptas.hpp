#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "illusolve/instance.hpp"
#include "illusolve/parallel.hpp"
#include "illusolve/treewidth_dp.hpp"

namespace illusolve {

struct layer_assignment {
    std::vector<int> layer;
    bool user_supplied = false;
};

// Multi-source BFS layering. Every component not reached from the given
// roots is rooted at its smallest vertex id, so the result is total and
// deterministic. Passing no roots layers every component from its smallest
// vertex.
inline layer_assignment compute_layers(const graph & g, std::vector<vertex_t> roots = {})
{
    layer_assignment out;
    out.layer.assign(g.n, -1);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    std::queue<vertex_t> q;
    for (vertex_t r : roots) {
        g.check_vertex(r);
        out.layer[r] = 0;
        q.push(r);
    }
    auto drain = [&]() {
        while (!q.empty()) {
            vertex_t u = q.front();
            q.pop();
            for (vertex_t w : g.neighbors(u))
                if (out.layer[w] == -1) {
                    out.layer[w] = out.layer[u] + 1;
                    q.push(w);
                }
        }
    };
    drain();
    for (vertex_t v = 0; v < g.n; ++v)
        if (out.layer[v] == -1) {
            out.layer[v] = 0;
            q.push(v);
            drain();
        }
    return out;
}

// Returns an empty string when the assignment is usable: one non-negative
// layer per vertex, endpoints of every edge at most one layer apart.
// Otherwise returns a message naming a witness.
inline std::string check_layer_locality(const graph & g, const std::vector<int> & layer)
{
    if (static_cast<int>(layer.size()) != g.n)
        return "layer assignment covers " + std::to_string(layer.size()) + " vertices, graph has " +
               std::to_string(g.n);
    for (vertex_t v = 0; v < g.n; ++v)
        if (layer[v] < 0)
            return "vertex " + std::to_string(v + 1) + " has negative layer";
    for (auto [u, v] : g.edges)
        if (std::abs(layer[u] - layer[v]) > 1)
            return "edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1) +
                   " spans layers " + std::to_string(layer[u]) + " and " + std::to_string(layer[v]);
    return "";
}

// One band subproblem: an induced instance plus which of its (local)
// vertices it is responsible for. Vertices one layer beyond the
// responsibility band are present so every responsible vertex sees its
// whole neighborhood.
struct ptas_piece {
    ei_instance inst;
    std::vector<vertex_t> back; // local id -> original id
    subset_spec responsibility; // over local ids
};

// Both overlap layers between consecutive pieces of a given shift fall in
// these residue classes modulo k+1.
inline std::pair<int, int> doubled_residues(int k, int shift)
{
    return {shift % (k + 1), (shift + 1) % (k + 1)};
}

// Cuts the instance into bands of k+1 consecutive responsibility layers
// (the first band absorbs everything up to layer shift+k+1), each padded
// with one vertex layer on each side.
inline std::vector<ptas_piece> build_pieces(const ei_instance & inst,
                                            const std::vector<int> & layer, int k, int shift)
{
    {
        std::string why = check_layer_locality(inst.g, layer);
        if (!why.empty())
            throw contract_error("layer assignment unusable: " + why);
    }
    int l_max = 0;
    for (vertex_t v = 0; v < inst.g.n; ++v)
        l_max = std::max(l_max, layer[v]);

    std::vector<ptas_piece> pieces;
    for (int j = 0;; ++j) {
        const int resp_lo = j == 0 ? 0 : shift + j * (k + 1) + 1;
        const int resp_hi = shift + (j + 1) * (k + 1);
        if (resp_lo > l_max)
            break;
        const int vert_lo = j == 0 ? 0 : shift + j * (k + 1);
        const int vert_hi = resp_hi + 1;
        std::vector<vertex_t> verts;
        for (vertex_t v = 0; v < inst.g.n; ++v)
            if (layer[v] >= vert_lo && layer[v] <= vert_hi)
                verts.push_back(v);
        if (verts.empty())
            continue;
        ptas_piece piece;
        piece.inst.g = inst.g.induced(verts, &piece.back);
        piece.inst.label.resize(piece.back.size());
        piece.responsibility = subset_spec::none(static_cast<int>(piece.back.size()));
        bool any_resp = false;
        for (std::size_t i = 0; i < piece.back.size(); ++i) {
            piece.inst.label[i] = inst.label[piece.back[i]];
            if (layer[piece.back[i]] >= resp_lo && layer[piece.back[i]] <= resp_hi) {
                piece.responsibility.mask[i] = 1;
                any_resp = true;
            }
        }
        if (any_resp)
            pieces.push_back(std::move(piece));
    }
    return pieces;
}

struct ptas_result {
    solution sol;
    int k = 1;
    int chosen_shift = 0;
    std::vector<int> per_shift_costs;
};

struct ptas_options {
    const layer_assignment * layers = nullptr; // nullptr: BFS layering
    int jobs = 1;
    tw_options piece_options{}; // decomposition field must stay null
};

// Approximation scheme for layered (in particular planar) instances:
// solve each band exactly for the best of k cut shifts. Guarantees cost
// at most (1 + 4/k) times the optimum when the layering is a BFS layering
// of a planar instance; k = max(1, round(4/epsilon)).
inline ptas_result ptas_solve(const ei_instance & inst, double epsilon, ptas_options opt = {})
{
    auto t0 = std::chrono::steady_clock::now();
    inst.validate();
    if (!(epsilon > 0.0))
        throw input_error("epsilon must be positive");
    if (opt.piece_options.decomposition != nullptr)
        throw input_error("per-piece decompositions cannot be supplied externally");
    warn_if_one_heavy(inst, "ptas_solve");

    const int k = std::max(1, static_cast<int>(std::lround(4.0 / epsilon)));

    layer_assignment own;
    const layer_assignment * layers = opt.layers;
    if (layers == nullptr) {
        own = compute_layers(inst.g);
        layers = &own;
    }
    else {
        std::string why = check_layer_locality(inst.g, layers->layer);
        if (!why.empty())
            throw input_error("layer assignment rejected: " + why);
    }

    std::vector<std::vector<vertex_t>> shift_flips(k);
    std::vector<int> shift_costs(k, -1);
    parallel_chunks(static_cast<std::size_t>(k), opt.jobs,
                    [&](int, std::size_t begin, std::size_t end) {
                        for (std::size_t s = begin; s < end; ++s) {
                            const int shift = static_cast<int>(s);
                            std::vector<vertex_t> flips;
                            for (const ptas_piece & piece :
                                 build_pieces(inst, layers->layer, k, shift)) {
                                solution part = solve_treewidth(piece.inst, piece.responsibility,
                                                                opt.piece_options);
                                for (vertex_t v : part.flipped)
                                    flips.push_back(piece.back[v]);
                            }
                            std::sort(flips.begin(), flips.end());
                            flips.erase(std::unique(flips.begin(), flips.end()), flips.end());
                            if (!verify(inst, flips).feasible)
                                throw contract_error("shift " + std::to_string(shift) +
                                                     " assembled an infeasible flip set");
                            shift_costs[s] = static_cast<int>(flips.size());
                            shift_flips[s] = std::move(flips);
                        }
                    });

    ptas_result out;
    out.k = k;
    out.per_shift_costs = shift_costs;
    int best = 0;
    for (int s = 1; s < k; ++s)
        if (shift_costs[s] < shift_costs[best])
            best = s;
    out.chosen_shift = best;
    out.sol.flipped = shift_flips[best];
    out.sol.cost = shift_costs[best];
    out.sol.solver = "ptas";
    out.sol.feasible = true;
    out.sol.time_ms = detail::elapsed_ms(t0);
    return out;
}

} // namespace illusolve
