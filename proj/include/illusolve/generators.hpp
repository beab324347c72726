#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "illusolve/instance.hpp"
#include "illusolve/io.hpp"
#include "illusolve/tree_decomposition.hpp"

namespace illusolve {

// Seeded generator state. Only the raw mt19937_64 stream is used (its
// output sequence is pinned by the standard); bounded draws and coin
// flips are derived by hand so results are identical on every platform.
struct rng_t {
    std::mt19937_64 eng;

    explicit rng_t(std::uint64_t seed) : eng(seed) {}

    std::uint64_t next() { return eng(); }

    // uniform-ish draw from [0, bound); the modulo bias is irrelevant at
    // corpus scale and keeps the mapping platform-stable
    int below(int bound)
    {
        if (bound <= 0)
            throw input_error("random draw from empty range");
        return static_cast<int>(next() % static_cast<std::uint64_t>(bound));
    }

    bool chance(double p)
    {
        return static_cast<double>(next() >> 11) * 0x1.0p-53 < p;
    }
};

// ---------------------------------------------------------------------
// source systems for the gadget generators
// ---------------------------------------------------------------------

// A set system given as bipartite membership: which sets contain which
// elements. Sides are 0-indexed internally, 1-indexed in text form.
struct set_cover_system {
    int num_sets = 0;
    int num_elems = 0;
    std::vector<std::pair<int, int>> membership; // (set, element)

    void validate() const
    {
        if (num_sets <= 0 || num_elems <= 0)
            throw input_error("set system needs at least one set and one element");
        std::set<std::pair<int, int>> seen;
        for (auto [s, u] : membership) {
            if (s < 0 || s >= num_sets)
                throw input_error("set id out of range: " + std::to_string(s + 1));
            if (u < 0 || u >= num_elems)
                throw input_error("element id out of range: " + std::to_string(u + 1));
            if (!seen.insert({s, u}).second)
                throw input_error("duplicate membership (" + std::to_string(s + 1) + ", " +
                                  std::to_string(u + 1) + ")");
        }
        // the incidence graph must be connected (sets 0..S-1, then elements)
        const int n = num_sets + num_elems;
        std::vector<std::vector<int>> adj(n);
        for (auto [s, u] : membership) {
            adj[s].push_back(num_sets + u);
            adj[num_sets + u].push_back(s);
        }
        std::vector<char> vis(n, 0);
        std::vector<int> stack{0};
        vis[0] = 1;
        int reached = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            ++reached;
            for (int w : adj[v])
                if (!vis[w]) {
                    vis[w] = 1;
                    stack.push_back(w);
                }
        }
        if (reached != n)
            throw input_error("set system incidence graph is not connected");
    }
};

// Monotone CNF: every clause is all-positive or all-negative, at most 3
// literals per clause, each literal in at most 3 clauses.
struct monotone_cnf {
    struct clause_t {
        bool positive = true;
        std::vector<int> vars; // 0-indexed, distinct
    };
    int num_vars = 0;
    std::vector<clause_t> clauses;

    void validate() const
    {
        if (num_vars <= 0)
            throw input_error("formula needs at least one variable");
        std::vector<int> occ_pos(num_vars, 0), occ_neg(num_vars, 0);
        for (const auto & c : clauses) {
            if (c.vars.empty() || c.vars.size() > 3)
                throw input_error("clauses must have 1 to 3 literals");
            std::set<int> distinct;
            for (int x : c.vars) {
                if (x < 0 || x >= num_vars)
                    throw input_error("variable out of range: " + std::to_string(x + 1));
                if (!distinct.insert(x).second)
                    throw input_error("repeated variable in a clause: " + std::to_string(x + 1));
                ++(c.positive ? occ_pos : occ_neg)[x];
            }
        }
        for (int x = 0; x < num_vars; ++x)
            if (occ_pos[x] > 3 || occ_neg[x] > 3)
                throw input_error("literal of variable " + std::to_string(x + 1) +
                                  " appears more than three times");
    }
};

// Weighted graph plus outdegree bound for the orientation problem.
struct mmo_instance {
    struct wedge {
        int u = 0, v = 0, w = 1;
    };
    int n = 0;
    std::vector<wedge> edges;
    int bound = 0; // R

    int total_weight() const
    {
        int w = 0;
        for (const auto & e : edges)
            w += e.w;
        return w;
    }

    void validate() const
    {
        if (n <= 0)
            throw input_error("weighted graph needs at least one vertex");
        if (bound < 0)
            throw input_error("outdegree bound must be nonnegative");
        std::set<std::pair<int, int>> seen;
        for (const auto & e : edges) {
            if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
                throw input_error("edge endpoint out of range: (" + std::to_string(e.u + 1) +
                                  ", " + std::to_string(e.v + 1) + ")");
            if (e.u == e.v)
                throw input_error("self loop at vertex " + std::to_string(e.u + 1));
            auto key = std::minmax(e.u, e.v);
            if (!seen.insert({key.first, key.second}).second)
                throw input_error("duplicate edge (" + std::to_string(e.u + 1) + ", " +
                                  std::to_string(e.v + 1) + ")");
            if (e.w < 1)
                throw input_error("edge weights must be positive");
        }
    }
};

// ---------------------------------------------------------------------
// text formats for the source systems (see docs/formats.md)
// ---------------------------------------------------------------------

inline set_cover_system parse_set_cover(std::istream & in)
{
    set_cover_system sys;
    bool have_header = false;
    long long want_members = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tok = detail::tokens_of(line);
        if (tok.empty() || tok[0] == "c")
            continue;
        if (tok[0] == "p") {
            if (have_header)
                throw parse_error(line_no, "duplicate header");
            if (tok.size() != 5 || tok[1] != "setcover")
                throw parse_error(line_no, "expected header 'p setcover <sets> <elems> <members>'");
            sys.num_sets = static_cast<int>(detail::parse_int(tok[2], line_no, "set count"));
            sys.num_elems = static_cast<int>(detail::parse_int(tok[3], line_no, "element count"));
            want_members = detail::parse_int(tok[4], line_no, "membership count");
            have_header = true;
            continue;
        }
        if (tok[0] == "m") {
            if (!have_header)
                throw parse_error(line_no, "membership before header");
            if (tok.size() != 3)
                throw parse_error(line_no, "expected 'm <set> <element>'");
            int s = detail::parse_vertex(tok[1], line_no, sys.num_sets);
            int u = detail::parse_vertex(tok[2], line_no, sys.num_elems);
            sys.membership.push_back({s, u});
            continue;
        }
        throw parse_error(line_no, "unknown directive '" + tok[0] + "'");
    }
    if (!have_header)
        throw parse_error(line_no + 1, "missing 'p setcover' header");
    if (static_cast<long long>(sys.membership.size()) != want_members)
        throw parse_error(line_no + 1, "header announced " + std::to_string(want_members) +
                                           " memberships, found " +
                                           std::to_string(sys.membership.size()));
    sys.validate();
    return sys;
}

inline void serialize_set_cover(const set_cover_system & sys, std::ostream & out)
{
    out << "p setcover " << sys.num_sets << " " << sys.num_elems << " " << sys.membership.size()
        << "\n";
    for (auto [s, u] : sys.membership)
        out << "m " << s + 1 << " " << u + 1 << "\n";
}

inline monotone_cnf parse_mcnf(std::istream & in)
{
    monotone_cnf phi;
    bool have_header = false;
    long long want_clauses = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tok = detail::tokens_of(line);
        if (tok.empty() || tok[0] == "c")
            continue;
        if (tok[0] == "p") {
            if (have_header)
                throw parse_error(line_no, "duplicate header");
            if (tok.size() != 4 || tok[1] != "mcnf")
                throw parse_error(line_no, "expected header 'p mcnf <vars> <clauses>'");
            phi.num_vars = static_cast<int>(detail::parse_int(tok[2], line_no, "variable count"));
            want_clauses = detail::parse_int(tok[3], line_no, "clause count");
            have_header = true;
            continue;
        }
        if (tok[0] == "+" || tok[0] == "-") {
            if (!have_header)
                throw parse_error(line_no, "clause before header");
            if (tok.size() < 2)
                throw parse_error(line_no, "empty clause");
            monotone_cnf::clause_t c;
            c.positive = tok[0] == "+";
            for (std::size_t i = 1; i < tok.size(); ++i)
                c.vars.push_back(detail::parse_vertex(tok[i], line_no, phi.num_vars));
            phi.clauses.push_back(std::move(c));
            continue;
        }
        throw parse_error(line_no, "unknown directive '" + tok[0] + "'");
    }
    if (!have_header)
        throw parse_error(line_no + 1, "missing 'p mcnf' header");
    if (static_cast<long long>(phi.clauses.size()) != want_clauses)
        throw parse_error(line_no + 1, "header announced " + std::to_string(want_clauses) +
                                           " clauses, found " + std::to_string(phi.clauses.size()));
    phi.validate();
    return phi;
}

inline void serialize_mcnf(const monotone_cnf & phi, std::ostream & out)
{
    out << "p mcnf " << phi.num_vars << " " << phi.clauses.size() << "\n";
    for (const auto & c : phi.clauses) {
        out << (c.positive ? "+" : "-");
        for (int x : c.vars)
            out << " " << x + 1;
        out << "\n";
    }
}

inline mmo_instance parse_mmo(std::istream & in)
{
    mmo_instance mi;
    bool have_header = false;
    long long want_edges = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tok = detail::tokens_of(line);
        if (tok.empty() || tok[0] == "c")
            continue;
        if (tok[0] == "p") {
            if (have_header)
                throw parse_error(line_no, "duplicate header");
            if (tok.size() != 5 || tok[1] != "mmo")
                throw parse_error(line_no, "expected header 'p mmo <n> <m> <R>'");
            mi.n = static_cast<int>(detail::parse_int(tok[2], line_no, "vertex count"));
            want_edges = detail::parse_int(tok[3], line_no, "edge count");
            mi.bound = static_cast<int>(detail::parse_int(tok[4], line_no, "outdegree bound"));
            have_header = true;
            continue;
        }
        if (tok[0] == "w") {
            if (!have_header)
                throw parse_error(line_no, "edge before header");
            if (tok.size() != 4)
                throw parse_error(line_no, "expected 'w <u> <v> <weight>'");
            mmo_instance::wedge e;
            e.u = detail::parse_vertex(tok[1], line_no, mi.n);
            e.v = detail::parse_vertex(tok[2], line_no, mi.n);
            e.w = static_cast<int>(detail::parse_int(tok[3], line_no, "edge weight"));
            mi.edges.push_back(e);
            continue;
        }
        throw parse_error(line_no, "unknown directive '" + tok[0] + "'");
    }
    if (!have_header)
        throw parse_error(line_no + 1, "missing 'p mmo' header");
    if (static_cast<long long>(mi.edges.size()) != want_edges)
        throw parse_error(line_no + 1, "header announced " + std::to_string(want_edges) +
                                           " edges, found " + std::to_string(mi.edges.size()));
    mi.validate();
    return mi;
}

inline void serialize_mmo(const mmo_instance & mi, std::ostream & out)
{
    out << "p mmo " << mi.n << " " << mi.edges.size() << " " << mi.bound << "\n";
    for (const auto & e : mi.edges)
        out << "w " << e.u + 1 << " " << e.v + 1 << " " << e.w << "\n";
}

// ---------------------------------------------------------------------
// gadget constructions
// ---------------------------------------------------------------------

namespace detail {

// Ids of one chessboard gadget: a 2 x 2k grid of 1-labeled vertices where
// every grid-adjacent pair is joined through a switch (a 0-labeled middle
// vertex with a 0-labeled leaf).
struct chessboard_part {
    std::vector<std::vector<vertex_t>> z;  // [2][2k] grid vertices
    std::vector<vertex_t> yv;              // [2k] vertical switch middles
    std::vector<std::vector<vertex_t>> yh; // [2][2k-1] horizontal switch middles
    std::vector<vertex_t> middles;         // all switch middles
    std::vector<vertex_t> leaves;          // switch leaves, aligned with middles
    std::map<vertex_t, vertex_t> leaf_of;  // middle -> its leaf
};

inline chessboard_part add_chessboard(graph_builder & gb, labeling & label, int k)
{
    chessboard_part part;
    const int cols = 2 * k;
    part.z.assign(2, std::vector<vertex_t>(cols));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < cols; ++j) {
            part.z[i][j] = gb.add_vertex();
            label.push_back(1);
        }
    auto add_switch = [&](vertex_t x1, vertex_t x2) {
        vertex_t y = gb.add_vertex();
        label.push_back(0);
        vertex_t l = gb.add_vertex();
        label.push_back(0);
        gb.add_edge(y, x1);
        gb.add_edge(y, x2);
        gb.add_edge(y, l);
        part.middles.push_back(y);
        part.leaves.push_back(l);
        part.leaf_of[y] = l;
        return y;
    };
    part.yv.resize(cols);
    for (int j = 0; j < cols; ++j)
        part.yv[j] = add_switch(part.z[0][j], part.z[1][j]);
    part.yh.assign(2, std::vector<vertex_t>(cols - 1));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j + 1 < cols; ++j)
            part.yh[i][j] = add_switch(part.z[i][j], part.z[i][j + 1]);
    return part;
}

} // namespace detail

struct setcover_gen_result {
    ei_instance inst;
    std::vector<vertex_t> set_vertex;  // per set
    std::vector<vertex_t> elem_vertex; // per element
    std::vector<vertex_t> auxiliary;   // every added vertex, sorted
};

// Cover systems become labeled instances: sets are 1-labeled, everything
// else 0-labeled. Each element u gets deg(u)-1 leaves, pinning its
// surplus to +1, so u demands one flipped incident set; each set gets a
// pendant vertex with two leaves (never under illusion, keeps the zero
// majority comfortable). Minimum flips = minimum cover size.
inline setcover_gen_result gen_setcover(const set_cover_system & sys)
{
    sys.validate();
    setcover_gen_result res;
    graph_builder gb;
    labeling label;
    for (int s = 0; s < sys.num_sets; ++s) {
        res.set_vertex.push_back(gb.add_vertex());
        label.push_back(1);
    }
    for (int u = 0; u < sys.num_elems; ++u) {
        res.elem_vertex.push_back(gb.add_vertex());
        label.push_back(0);
    }
    std::vector<int> elem_deg(sys.num_elems, 0);
    for (auto [s, u] : sys.membership) {
        gb.add_edge(res.set_vertex[s], res.elem_vertex[u]);
        ++elem_deg[u];
    }
    auto add_leaf = [&](vertex_t at) {
        vertex_t l = gb.add_vertex();
        label.push_back(0);
        gb.add_edge(at, l);
        res.auxiliary.push_back(l);
        return l;
    };
    for (int u = 0; u < sys.num_elems; ++u)
        for (int i = 0; i + 1 < elem_deg[u]; ++i)
            add_leaf(res.elem_vertex[u]);
    for (int s = 0; s < sys.num_sets; ++s) {
        vertex_t w = add_leaf(res.set_vertex[s]);
        add_leaf(w);
        add_leaf(w);
    }
    res.inst.g = gb.build();
    res.inst.label = std::move(label);
    res.inst.validate();
    return res;
}

struct threesat_gen_result {
    ei_instance inst;
    std::vector<vertex_t> var_pos;       // v_X per variable
    std::vector<vertex_t> var_neg;       // the negated twin
    std::vector<vertex_t> controller;    // per variable
    std::vector<vertex_t> clause_vertex; // per clause
    std::vector<vertex_t> auxiliary;     // leaves, sorted
};

// Monotone formulas become labeled instances: a 1-labeled vertex pair per
// variable tied together by a 0-labeled controller (with one leaf), and a
// 0-labeled vertex per clause adjacent to its literals. A clause vertex
// with q literals gets q-1 leaves so its surplus is exactly +1; the
// controllers force one flip per variable, so the formula is satisfiable
// exactly when #variables flips suffice.
inline threesat_gen_result gen_3sat(const monotone_cnf & phi)
{
    phi.validate();
    threesat_gen_result res;
    graph_builder gb;
    labeling label;
    auto add = [&](std::uint8_t l) {
        vertex_t v = gb.add_vertex();
        label.push_back(l);
        return v;
    };
    for (int x = 0; x < phi.num_vars; ++x) {
        res.var_pos.push_back(add(1));
        res.var_neg.push_back(add(1));
    }
    for (int x = 0; x < phi.num_vars; ++x) {
        vertex_t ctrl = add(0);
        res.controller.push_back(ctrl);
        gb.add_edge(ctrl, res.var_pos[x]);
        gb.add_edge(ctrl, res.var_neg[x]);
        vertex_t l = add(0);
        gb.add_edge(ctrl, l);
        res.auxiliary.push_back(l);
    }
    for (const auto & c : phi.clauses) {
        vertex_t vc = add(0);
        res.clause_vertex.push_back(vc);
        for (int x : c.vars)
            gb.add_edge(vc, c.positive ? res.var_pos[x] : res.var_neg[x]);
        for (std::size_t i = 0; i + 1 < c.vars.size(); ++i) {
            vertex_t l = add(0);
            gb.add_edge(vc, l);
            res.auxiliary.push_back(l);
        }
    }
    res.inst.g = gb.build();
    res.inst.label = std::move(label);
    res.inst.validate();
    return res;
}

struct chessboard_gen_result {
    ei_instance inst;
    std::vector<std::vector<vertex_t>> grid; // [2][2k]
    std::vector<vertex_t> switch_middles;
    std::vector<vertex_t> leaves;
};

// Standalone chessboard gadget; its optimum is exactly 2k flips.
inline chessboard_gen_result gen_chessboard(int k)
{
    if (k < 1)
        throw input_error("chessboard size must be at least 1");
    chessboard_gen_result res;
    graph_builder gb;
    labeling label;
    auto part = detail::add_chessboard(gb, label, k);
    res.grid = part.z;
    res.switch_middles = part.middles;
    res.leaves = part.leaves;
    res.inst.g = gb.build();
    res.inst.label = std::move(label);
    res.inst.validate();
    return res;
}

struct mmo_gen_result {
    ei_instance inst;
    int total_weight = 0;
    std::vector<vertex_t> original; // per source vertex (identity ids)
    std::vector<std::vector<std::vector<vertex_t>>> grid; // per edge: [2][2w]
    std::vector<vertex_t> switch_middles;
    std::vector<std::vector<vertex_t>> leaves_of; // per source vertex: its pendant leaves
    tree_decomposition path_dec; // low-width path decomposition of the output
};

// Orientation instances become labeled instances: every edge uv turns
// into a chessboard of size w(uv) whose first row (odd columns) hangs off
// u and second row off v, and every original vertex gets pendant leaves
// until its surplus is exactly 2*(weighted degree - R): clearing it then
// takes (weighted degree - R) flipped neighbours, one per unit of
// indegree the vertex must absorb. The optimum is 2W exactly when an
// orientation with all weighted outdegrees <= R exists.
// A path decomposition of the output is returned so the exact
// decomposition solver stays cheap on these instances.
inline mmo_gen_result gen_mmo(const mmo_instance & mi, int weight_cap = 64)
{
    mi.validate();
    mmo_gen_result res;
    res.total_weight = mi.total_weight();
    if (res.total_weight > weight_cap || mi.bound > weight_cap)
        throw size_error("total weight and bound are limited to " + std::to_string(weight_cap));

    graph_builder gb;
    labeling label;
    std::vector<int> wdeg(mi.n, 0);
    for (int v = 0; v < mi.n; ++v) {
        res.original.push_back(gb.add_vertex());
        label.push_back(0);
    }
    std::vector<detail::chessboard_part> parts;
    for (const auto & e : mi.edges) {
        auto part = detail::add_chessboard(gb, label, e.w);
        for (int j = 0; j < 2 * e.w; j += 2) {
            gb.add_edge(res.original[e.u], part.z[0][j]);
            gb.add_edge(res.original[e.v], part.z[1][j]);
        }
        wdeg[e.u] += e.w;
        wdeg[e.v] += e.w;
        res.grid.push_back(part.z);
        for (vertex_t y : part.middles)
            res.switch_middles.push_back(y);
        parts.push_back(std::move(part));
    }
    res.leaves_of.assign(mi.n, {});
    for (int v = 0; v < mi.n; ++v) {
        // all current neighbors of v are 1-labeled grid vertices
        int cur = wdeg[v];
        const int target = 2 * (wdeg[v] - mi.bound);
        while (cur > target) {
            vertex_t l = gb.add_vertex();
            label.push_back(0);
            gb.add_edge(res.original[v], l);
            res.leaves_of[v].push_back(l);
            --cur;
        }
        while (cur < target) {
            vertex_t l = gb.add_vertex();
            label.push_back(1);
            gb.add_edge(res.original[v], l);
            res.leaves_of[v].push_back(l);
            ++cur;
        }
    }
    res.inst.g = gb.build();
    res.inst.label = std::move(label);
    res.inst.validate();

    // Path decomposition: sweep the chessboards in edge order, column pair
    // by column pair, keeping every original vertex whose edge span covers
    // the current edge in the bag; between sweeps, one bag closes out the
    // vertices whose last edge just finished and their pendant leaves.
    const int m = static_cast<int>(mi.edges.size());
    std::vector<int> first(mi.n, -1), last(mi.n, -1);
    for (int t = 0; t < m; ++t) {
        for (int v : {mi.edges[t].u, mi.edges[t].v}) {
            if (first[v] == -1)
                first[v] = t;
            last[v] = t;
        }
    }
    auto push_bag = [&](std::vector<vertex_t> bag) {
        std::sort(bag.begin(), bag.end());
        bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
        res.path_dec.bags.push_back(std::move(bag));
    };
    for (int t = 0; t < m; ++t) {
        std::vector<vertex_t> active;
        for (int v = 0; v < mi.n; ++v)
            if (first[v] != -1 && first[v] <= t && t <= last[v])
                active.push_back(res.original[v]);
        const auto & part = parts[t];
        const int cols = 2 * mi.edges[t].w;
        for (int j = 0; j + 1 < cols || j == 0; ++j) {
            std::vector<vertex_t> bag = active;
            int j2 = std::min(j + 1, cols - 1);
            for (int i = 0; i < 2; ++i) {
                bag.push_back(part.z[i][j]);
                bag.push_back(part.z[i][j2]);
            }
            for (vertex_t y : {part.yv[j], part.yv[j2]}) {
                bag.push_back(y);
                bag.push_back(part.leaf_of.at(y));
            }
            if (j + 1 < cols)
                for (int i = 0; i < 2; ++i) {
                    bag.push_back(part.yh[i][j]);
                    bag.push_back(part.leaf_of.at(part.yh[i][j]));
                }
            push_bag(std::move(bag));
            if (j + 1 >= cols)
                break;
        }
        // boundary bag: carried-over actives plus everything that ends here
        std::vector<vertex_t> boundary;
        bool any_end = false;
        for (int v = 0; v < mi.n; ++v) {
            if (first[v] == -1 || first[v] > t || t > last[v])
                continue;
            if (last[v] > t)
                boundary.push_back(res.original[v]);
            else {
                any_end = true;
                boundary.push_back(res.original[v]);
                for (vertex_t l : res.leaves_of[v])
                    boundary.push_back(l);
            }
        }
        if (any_end || t + 1 < m)
            push_bag(std::move(boundary));
    }
    for (int v = 0; v < mi.n; ++v) {
        if (first[v] != -1)
            continue;
        std::vector<vertex_t> bag{res.original[v]};
        for (vertex_t l : res.leaves_of[v])
            bag.push_back(l);
        push_bag(std::move(bag));
    }
    if (res.path_dec.bags.empty())
        res.path_dec.bags.push_back({});
    for (int i = 0; i + 1 < res.path_dec.num_bags(); ++i)
        res.path_dec.tree_edges.push_back({i, i + 1});
    auto check = validate_decomposition(res.inst.g, res.path_dec);
    if (!check.ok)
        throw contract_error("generated path decomposition is invalid: " + check.message);
    return res;
}

// ---------------------------------------------------------------------
// plain random generators (test corpus plumbing)
// ---------------------------------------------------------------------

inline ei_instance gen_random(int n, double edge_prob, double label_prob_one, std::uint64_t seed,
                              bool require_zero_majority = false)
{
    if (n < 0)
        throw input_error("vertex count must be nonnegative");
    if (edge_prob < 0.0 || edge_prob > 1.0 || label_prob_one < 0.0 || label_prob_one > 1.0)
        throw input_error("probabilities must lie in [0, 1]");
    rng_t rng(seed);
    graph_builder gb;
    for (int i = 0; i < n; ++i)
        gb.add_vertex();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.chance(edge_prob))
                gb.add_edge(i, j);
    ei_instance inst;
    inst.g = gb.build();
    for (int attempt = 0; attempt < 10000; ++attempt) {
        inst.label.clear();
        for (int i = 0; i < n; ++i)
            inst.label.push_back(rng.chance(label_prob_one) ? 1 : 0);
        if (!require_zero_majority || inst.strict_zero_majority())
            return inst;
    }
    throw input_error("could not draw a zero-majority labeling; lower label_prob_one");
}

enum class grid_rule { zeros, ones, checkerboard, random };

inline ei_instance gen_grid(int rows, int cols, grid_rule rule, std::uint64_t seed,
                            double label_prob_one = 0.35)
{
    if (rows < 1 || cols < 1)
        throw input_error("grid needs at least one row and one column");
    rng_t rng(seed);
    graph_builder gb;
    for (int i = 0; i < rows * cols; ++i)
        gb.add_vertex();
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int v = r * cols + c;
            if (c + 1 < cols)
                gb.add_edge(v, v + 1);
            if (r + 1 < rows)
                gb.add_edge(v, v + cols);
        }
    ei_instance inst;
    inst.g = gb.build();
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            switch (rule) {
            case grid_rule::zeros:
                inst.label.push_back(0);
                break;
            case grid_rule::ones:
                inst.label.push_back(1);
                break;
            case grid_rule::checkerboard:
                inst.label.push_back((r + c) % 2 == 0 ? 1 : 0);
                break;
            case grid_rule::random:
                inst.label.push_back(rng.chance(label_prob_one) ? 1 : 0);
                break;
            }
        }
    return inst;
}

inline ei_instance gen_tree(int n, std::uint64_t seed, double label_prob_one = 0.34)
{
    if (n < 1)
        throw input_error("tree needs at least one vertex");
    rng_t rng(seed);
    graph_builder gb;
    gb.add_vertex();
    for (int v = 1; v < n; ++v) {
        gb.add_vertex();
        gb.add_edge(v, rng.below(v));
    }
    ei_instance inst;
    inst.g = gb.build();
    for (int v = 0; v < n; ++v)
        inst.label.push_back(rng.chance(label_prob_one) ? 1 : 0);
    return inst;
}

} // namespace illusolve
