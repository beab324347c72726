#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "illusolve/errors.hpp"
#include "illusolve/graph.hpp"

namespace illusolve {

using labeling = std::vector<std::uint8_t>; // one 0/1 entry per vertex

// A binary-labeled graph. A vertex is "under illusion" when a strict
// majority of its neighbors carries label 1.
struct ei_instance {
    graph g;
    labeling label;

    void validate() const
    {
        if (static_cast<int>(label.size()) != g.n)
            throw input_error("labeling size does not match vertex count");
        for (auto l : label)
            if (l != 0 && l != 1)
                throw input_error("labels must be 0 or 1");
    }

    int count_ones() const
    {
        int c = 0;
        for (auto l : label)
            c += l;
        return c;
    }

    int count_zeros() const { return g.n - count_ones(); }

    // The standing assumption: strictly more 0-labels than 1-labels.
    bool strict_zero_majority() const { return count_zeros() > count_ones(); }

    // Sorted ids of 1-labeled vertices (the useful flip candidates).
    std::vector<vertex_t> one_vertices() const
    {
        std::vector<vertex_t> out;
        for (vertex_t v = 0; v < g.n; ++v)
            if (label[v])
                out.push_back(v);
        return out;
    }
};

// Vertex subset given as a membership mask; used both for restricted
// solves ("only these vertices must be illusion-free") and bookkeeping.
struct subset_spec {
    std::vector<char> mask;

    static subset_spec all(int n)
    {
        subset_spec s;
        s.mask.assign(n, 1);
        return s;
    }

    static subset_spec none(int n)
    {
        subset_spec s;
        s.mask.assign(n, 0);
        return s;
    }

    static subset_spec of(int n, const std::vector<vertex_t> & verts)
    {
        subset_spec s;
        s.mask.assign(n, 0);
        for (vertex_t v : verts) {
            if (v < 0 || v >= n)
                throw input_error("subset vertex out of range: " + std::to_string(v + 1));
            s.mask[v] = 1;
        }
        return s;
    }

    int size() const { return static_cast<int>(mask.size()); }

    bool contains(vertex_t v) const { return mask[v] != 0; }

    int count() const
    {
        int c = 0;
        for (char b : mask)
            c += (b != 0);
        return c;
    }

    std::vector<vertex_t> members() const
    {
        std::vector<vertex_t> out;
        for (vertex_t v = 0; v < size(); ++v)
            if (mask[v])
                out.push_back(v);
        return out;
    }
};

// Number of 1-labeled minus number of 0-labeled neighbors of v.
inline int surplus(const graph & g, const labeling & label, vertex_t v)
{
    g.check_vertex(v);
    int s = 0;
    for (vertex_t u : g.adj[v])
        s += label[u] ? 1 : -1;
    return s;
}

inline int surplus(const ei_instance & inst, vertex_t v)
{
    return surplus(inst.g, inst.label, v);
}

// Strict majority of 1s in the neighborhood. Isolated vertices and exact
// ties are not under illusion.
inline bool is_under_illusion(const graph & g, const labeling & label, vertex_t v)
{
    return surplus(g, label, v) > 0;
}

inline bool is_under_illusion(const ei_instance & inst, vertex_t v)
{
    return is_under_illusion(inst.g, inst.label, v);
}

// Minimum number of v's 1-labeled neighbors that must flip to 0 before v
// stops being under illusion: each such flip lowers the surplus by two.
inline int demand(const ei_instance & inst, vertex_t v)
{
    int s = surplus(inst, v);
    return s > 0 ? (s + 1) / 2 : 0;
}

// Toggle the listed vertices. Duplicate ids are rejected.
inline labeling apply_flips(const labeling & label, const std::vector<vertex_t> & flips)
{
    labeling out = label;
    for (vertex_t v : flips) {
        if (v < 0 || v >= static_cast<int>(out.size()))
            throw input_error("flip vertex out of range: " + std::to_string(v + 1));
        out[v] ^= 1;
    }
    return out;
}

struct verify_report {
    bool feasible = false;
    std::vector<vertex_t> violating; // subset vertices still under illusion, sorted
    int cost = 0;                    // number of flipped vertices
};

// Check whether flipping `flips` leaves every subset vertex illusion-free.
inline verify_report verify(const ei_instance & inst, const std::vector<vertex_t> & flips,
                            const subset_spec & subset)
{
    inst.validate();
    if (subset.size() != inst.g.n)
        throw input_error("subset mask size does not match vertex count");
    {
        std::vector<char> seen(inst.g.n, 0);
        for (vertex_t v : flips) {
            inst.g.check_vertex(v);
            if (seen[v])
                throw input_error("duplicate flip vertex: " + std::to_string(v + 1));
            seen[v] = 1;
        }
    }
    labeling after = apply_flips(inst.label, flips);
    verify_report rep;
    rep.cost = static_cast<int>(flips.size());
    for (vertex_t v = 0; v < inst.g.n; ++v)
        if (subset.contains(v) && is_under_illusion(inst.g, after, v))
            rep.violating.push_back(v);
    rep.feasible = rep.violating.empty();
    return rep;
}

inline verify_report verify(const ei_instance & inst, const std::vector<vertex_t> & flips)
{
    return verify(inst, flips, subset_spec::all(inst.g.n));
}

// A solver result: the flip set, its size, and provenance of the run.
struct solution {
    int cost = 0;
    std::vector<vertex_t> flipped; // sorted
    std::string solver;
    bool feasible = false;
    double time_ms = 0.0;
};

// Demand-annotated instance: each vertex v asks for at least k(v) chosen
// vertices inside its open neighborhood ("total vector domination").
struct tvd_instance {
    graph g;
    std::vector<int> k;

    void validate() const
    {
        if (static_cast<int>(k.size()) != g.n)
            throw input_error("demand vector size does not match vertex count");
        for (vertex_t v = 0; v < g.n; ++v) {
            if (k[v] < 0)
                throw input_error("negative demand at vertex " + std::to_string(v + 1));
            if (k[v] > g.degree(v))
                throw input_error("demand exceeds degree at vertex " + std::to_string(v + 1));
        }
    }
};

struct tvd_solution {
    int cost = 0;
    std::vector<vertex_t> chosen; // sorted
    bool feasible = false;
};

struct tvd_verify_report {
    bool feasible = false;
    std::vector<vertex_t> violating;
};

inline tvd_verify_report tvd_verify(const tvd_instance & inst, const std::vector<vertex_t> & chosen)
{
    inst.validate();
    std::vector<char> in(inst.g.n, 0);
    for (vertex_t v : chosen) {
        inst.g.check_vertex(v);
        in[v] = 1;
    }
    tvd_verify_report rep;
    for (vertex_t v = 0; v < inst.g.n; ++v) {
        int have = 0;
        for (vertex_t u : inst.g.adj[v])
            have += in[u];
        if (have < inst.k[v])
            rep.violating.push_back(v);
    }
    rep.feasible = rep.violating.empty();
    return rep;
}

// Solvers tolerate violations of the zero-majority assumption but say so.
inline void warn_if_one_heavy(const ei_instance & inst, const char * where)
{
    if (!inst.strict_zero_majority())
        log_warn(std::string(where) + ": instance does not have a strict majority of 0-labels");
}

} // namespace illusolve
