#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "illusolve/errors.hpp"

namespace illusolve {

using vertex_t = int;

// Simple undirected graph on vertices 0..n-1. Neighbor lists are kept
// sorted; parallel edges and self loops are rejected at construction.
struct graph {
    int n = 0;
    std::vector<std::vector<vertex_t>> adj;
    std::vector<std::pair<vertex_t, vertex_t>> edges; // each with first < second, sorted

    graph() = default;

    graph(int n_, std::vector<std::pair<vertex_t, vertex_t>> edge_list) : n(n_)
    {
        if (n < 0)
            throw input_error("vertex count must be nonnegative");
        adj.assign(n, {});
        std::set<std::pair<vertex_t, vertex_t>> seen;
        edges.reserve(edge_list.size());
        for (auto [u, v] : edge_list) {
            if (u < 0 || u >= n || v < 0 || v >= n)
                throw input_error("edge endpoint out of range: (" + std::to_string(u + 1) +
                                  ", " + std::to_string(v + 1) + ")");
            if (u == v)
                throw input_error("self loop at vertex " + std::to_string(u + 1));
            if (u > v)
                std::swap(u, v);
            if (!seen.insert({u, v}).second)
                throw input_error("duplicate edge (" + std::to_string(u + 1) + ", " +
                                  std::to_string(v + 1) + ")");
        }
        for (auto & e : seen) {
            edges.push_back(e);
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        for (auto & a : adj)
            std::sort(a.begin(), a.end());
    }

    int m() const { return static_cast<int>(edges.size()); }

    int degree(vertex_t v) const { return static_cast<int>(adj[v].size()); }

    const std::vector<vertex_t> & neighbors(vertex_t v) const { return adj[v]; }

    bool has_edge(vertex_t u, vertex_t v) const
    {
        const auto & a = adj[u].size() <= adj[v].size() ? adj[u] : adj[v];
        vertex_t w = adj[u].size() <= adj[v].size() ? v : u;
        return std::binary_search(a.begin(), a.end(), w);
    }

    void check_vertex(vertex_t v) const
    {
        if (v < 0 || v >= n)
            throw input_error("vertex id out of range: " + std::to_string(v + 1));
    }

    // Induced subgraph on `verts`; ids are remapped to 0..|verts|-1 in the
    // given order. `back` receives the reverse map (new id -> old id).
    graph induced(const std::vector<vertex_t> & verts, std::vector<vertex_t> * back = nullptr) const
    {
        std::vector<int> pos(n, -1);
        for (size_t i = 0; i < verts.size(); ++i) {
            check_vertex(verts[i]);
            if (pos[verts[i]] != -1)
                throw input_error("duplicate vertex in induced-subgraph list");
            pos[verts[i]] = static_cast<int>(i);
        }
        std::vector<std::pair<vertex_t, vertex_t>> sub_edges;
        for (auto [u, v] : edges)
            if (pos[u] != -1 && pos[v] != -1)
                sub_edges.push_back({pos[u], pos[v]});
        if (back != nullptr)
            *back = verts;
        return graph(static_cast<int>(verts.size()), std::move(sub_edges));
    }

    // Connected components as sorted vertex lists, ordered by smallest member.
    std::vector<std::vector<vertex_t>> components() const
    {
        std::vector<int> comp(n, -1);
        std::vector<std::vector<vertex_t>> out;
        std::vector<vertex_t> stack;
        for (vertex_t s = 0; s < n; ++s) {
            if (comp[s] != -1)
                continue;
            int c = static_cast<int>(out.size());
            out.emplace_back();
            comp[s] = c;
            stack.push_back(s);
            while (!stack.empty()) {
                vertex_t v = stack.back();
                stack.pop_back();
                out[c].push_back(v);
                for (vertex_t w : adj[v])
                    if (comp[w] == -1) {
                        comp[w] = c;
                        stack.push_back(w);
                    }
            }
            std::sort(out[c].begin(), out[c].end());
        }
        return out;
    }
};

// Incremental builder used by generators and reductions.
struct graph_builder {
    int n = 0;
    std::vector<std::pair<vertex_t, vertex_t>> edges;

    vertex_t add_vertex()
    {
        return n++;
    }

    void add_edge(vertex_t u, vertex_t v)
    {
        edges.push_back({u, v});
    }

    graph build() const { return graph(n, edges); }
};

} // namespace illusolve
