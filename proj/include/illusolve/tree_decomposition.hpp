#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "illusolve/graph.hpp"
#include "illusolve/io.hpp"

namespace illusolve {

struct tree_decomposition {
    std::vector<std::vector<vertex_t>> bags;       // sorted vertex lists
    std::vector<std::pair<int, int>> tree_edges;   // over bag indices

    int num_bags() const { return static_cast<int>(bags.size()); }

    int width() const
    {
        size_t mx = 0;
        for (auto & b : bags)
            mx = std::max(mx, b.size());
        return static_cast<int>(mx) - 1;
    }
};

struct td_check {
    bool ok = true;
    std::string message;
};

// The three decomposition axioms plus tree-shape, with a witness for the
// first violation found.
inline td_check validate_decomposition(const graph & g, const tree_decomposition & td)
{
    auto fail = [](std::string m) {
        td_check c;
        c.ok = false;
        c.message = std::move(m);
        return c;
    };
    const int nb = td.num_bags();
    if (nb == 0)
        return fail("decomposition has no bags");
    for (int i = 0; i < nb; ++i) {
        for (vertex_t v : td.bags[i])
            if (v < 0 || v >= g.n)
                return fail("bag " + std::to_string(i + 1) + " contains out-of-range vertex " +
                            std::to_string(v + 1));
        auto sorted = td.bags[i];
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            return fail("bag " + std::to_string(i + 1) + " contains a duplicate vertex");
    }
    if (static_cast<int>(td.tree_edges.size()) != nb - 1)
        return fail("tree must have exactly " + std::to_string(nb - 1) + " edges, found " +
                    std::to_string(td.tree_edges.size()));
    std::vector<std::vector<int>> tadj(nb);
    for (auto [a, b] : td.tree_edges) {
        if (a < 0 || a >= nb || b < 0 || b >= nb)
            return fail("tree edge references a bag out of range");
        tadj[a].push_back(b);
        tadj[b].push_back(a);
    }
    { // connectivity of the tree itself
        std::vector<char> seen(nb, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int cnt = 0;
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            ++cnt;
            for (int u : tadj[t])
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
        }
        if (cnt != nb)
            return fail("bag tree is disconnected");
    }
    // every vertex covered
    std::vector<int> occurrences(g.n, 0);
    for (auto & b : td.bags)
        for (vertex_t v : b)
            ++occurrences[v];
    for (vertex_t v = 0; v < g.n; ++v)
        if (occurrences[v] == 0)
            return fail("vertex " + std::to_string(v + 1) + " appears in no bag");
    // every edge covered
    std::vector<std::vector<int>> bags_of(g.n);
    for (int i = 0; i < nb; ++i)
        for (vertex_t v : td.bags[i])
            bags_of[v].push_back(i);
    for (auto & bl : bags_of)
        std::sort(bl.begin(), bl.end());
    for (auto [u, v] : g.edges) {
        bool covered = false;
        const auto & a = bags_of[u];
        const auto & b = bags_of[v];
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) {
                covered = true;
                break;
            }
            (a[i] < b[j]) ? ++i : ++j;
        }
        if (!covered)
            return fail("edge (" + std::to_string(u + 1) + ", " + std::to_string(v + 1) +
                        ") is contained in no bag");
    }
    // per-vertex occurrences form a subtree: a forest on k nodes is
    // connected exactly when it has k-1 edges
    std::vector<int> shared_edges(g.n, 0);
    for (auto [a, b] : td.tree_edges) {
        const auto & ba = td.bags[a];
        std::vector<char> in_a(g.n, 0);
        for (vertex_t v : ba)
            in_a[v] = 1;
        for (vertex_t v : td.bags[b])
            if (in_a[v])
                ++shared_edges[v];
    }
    for (vertex_t v = 0; v < g.n; ++v)
        if (shared_edges[v] != occurrences[v] - 1)
            return fail("bags containing vertex " + std::to_string(v + 1) +
                        " do not form a connected subtree");
    return {};
}

// Min-fill elimination ordering. Repeatedly eliminates a vertex whose
// neighborhood needs the fewest fill edges (ties: degree, then id), turning
// its neighborhood into a clique; the elimination bags assemble into a
// decomposition the standard way.
inline tree_decomposition heuristic_decomposition(const graph & g)
{
    const int n = g.n;
    tree_decomposition td;
    if (n == 0) {
        td.bags.push_back({});
        return td;
    }
    std::vector<std::set<vertex_t>> adj(n);
    for (vertex_t v = 0; v < n; ++v)
        adj[v] = std::set<vertex_t>(g.adj[v].begin(), g.adj[v].end());

    auto fill_of = [&](vertex_t v) {
        long long f = 0;
        for (auto it = adj[v].begin(); it != adj[v].end(); ++it)
            for (auto jt = std::next(it); jt != adj[v].end(); ++jt)
                if (!adj[*it].count(*jt))
                    ++f;
        return f;
    };

    // lazy best-first queue keyed by (fill, degree, id); stale entries are
    // skipped by re-checking the current fill value on pop
    using entry = std::tuple<long long, int, vertex_t>;
    std::priority_queue<entry, std::vector<entry>, std::greater<entry>> queue;
    std::vector<long long> cur_fill(n);
    std::vector<char> eliminated(n, 0);
    for (vertex_t v = 0; v < n; ++v) {
        cur_fill[v] = fill_of(v);
        queue.push({cur_fill[v], static_cast<int>(adj[v].size()), v});
    }

    std::vector<std::vector<vertex_t>> bags;
    std::vector<int> elim_pos(n, -1);
    std::vector<vertex_t> order;
    while (static_cast<int>(order.size()) < n) {
        auto [f, d, v] = queue.top();
        queue.pop();
        if (eliminated[v] || f != cur_fill[v] || d != static_cast<int>(adj[v].size()))
            continue;
        elim_pos[v] = static_cast<int>(order.size());
        order.push_back(v);
        eliminated[v] = 1;
        std::vector<vertex_t> bag(adj[v].begin(), adj[v].end());
        std::set<vertex_t> dirty;
        for (vertex_t u : bag) {
            dirty.insert(u);
            for (vertex_t w : adj[u])
                dirty.insert(w);
        }
        for (size_t i = 0; i < bag.size(); ++i)
            for (size_t j = i + 1; j < bag.size(); ++j)
                if (adj[bag[i]].insert(bag[j]).second)
                    adj[bag[j]].insert(bag[i]);
        for (vertex_t u : bag)
            adj[u].erase(v);
        bag.push_back(v);
        std::sort(bag.begin(), bag.end());
        bags.push_back(std::move(bag));
        for (vertex_t u : dirty) {
            if (eliminated[u] || u == v)
                continue;
            cur_fill[u] = fill_of(u);
            queue.push({cur_fill[u], static_cast<int>(adj[u].size()), u});
        }
    }

    td.bags = std::move(bags);
    for (int i = 0; i < n; ++i) {
        vertex_t v = order[i];
        int parent = -1;
        for (vertex_t u : td.bags[i])
            if (u != v && (parent == -1 || elim_pos[u] < parent))
                parent = elim_pos[u];
        if (parent != -1)
            td.tree_edges.push_back({i, parent});
        else if (i + 1 < n)
            td.tree_edges.push_back({i, i + 1}); // keep isolated-elimination bags attached
    }
    auto check = validate_decomposition(g, td);
    if (!check.ok)
        throw contract_error("elimination-order decomposition invalid: " + check.message);
    return td;
}

inline tree_decomposition single_bag_decomposition(const graph & g)
{
    tree_decomposition td;
    std::vector<vertex_t> bag(g.n);
    for (vertex_t v = 0; v < g.n; ++v)
        bag[v] = v;
    td.bags.push_back(std::move(bag));
    return td;
}

// Nice form: every node is a leaf (empty bag), introduce, forget, or join;
// the root has an empty bag.
enum class nice_kind { leaf, introduce, forget, join };

struct nice_node {
    nice_kind kind = nice_kind::leaf;
    int child0 = -1, child1 = -1;
    vertex_t v = -1; // introduced/forgotten vertex
    std::vector<vertex_t> bag;
};

struct nice_decomposition {
    std::vector<nice_node> nodes;
    int root = -1;
    std::vector<int> postorder; // children before parents
};

inline nice_decomposition to_nice(const tree_decomposition & td)
{
    nice_decomposition nd;
    auto add_leaf = [&]() {
        nice_node n;
        n.kind = nice_kind::leaf;
        nd.nodes.push_back(std::move(n));
        return static_cast<int>(nd.nodes.size() - 1);
    };
    auto add_unary = [&](nice_kind k, int child, vertex_t v, std::vector<vertex_t> bag) {
        nice_node n;
        n.kind = k;
        n.child0 = child;
        n.v = v;
        n.bag = std::move(bag);
        nd.nodes.push_back(std::move(n));
        return static_cast<int>(nd.nodes.size() - 1);
    };
    auto add_join = [&](int a, int b, std::vector<vertex_t> bag) {
        nice_node n;
        n.kind = nice_kind::join;
        n.child0 = a;
        n.child1 = b;
        n.bag = std::move(bag);
        nd.nodes.push_back(std::move(n));
        return static_cast<int>(nd.nodes.size() - 1);
    };
    // grow a chain from `top` (whose bag is `from`) until its bag is `to`
    auto morph = [&](int top, std::vector<vertex_t> from, const std::vector<vertex_t> & to) {
        std::vector<vertex_t> drop, take;
        std::set_difference(from.begin(), from.end(), to.begin(), to.end(),
                            std::back_inserter(drop));
        std::set_difference(to.begin(), to.end(), from.begin(), from.end(),
                            std::back_inserter(take));
        std::vector<vertex_t> cur = std::move(from);
        for (vertex_t v : drop) {
            cur.erase(std::find(cur.begin(), cur.end(), v));
            top = add_unary(nice_kind::forget, top, v, cur);
        }
        for (vertex_t v : take) {
            cur.insert(std::upper_bound(cur.begin(), cur.end(), v), v);
            top = add_unary(nice_kind::introduce, top, v, cur);
        }
        return top;
    };

    const int nb = td.num_bags();
    std::vector<std::vector<vertex_t>> bags = td.bags;
    for (auto & b : bags)
        std::sort(b.begin(), b.end());
    std::vector<std::vector<int>> tadj(nb);
    for (auto [a, b] : td.tree_edges) {
        tadj[a].push_back(b);
        tadj[b].push_back(a);
    }
    // order original nodes children-first, rooted at bag 0
    std::vector<int> parent(nb, -2), bfs;
    bfs.push_back(0);
    parent[0] = -1;
    for (size_t i = 0; i < bfs.size(); ++i)
        for (int u : tadj[bfs[i]])
            if (parent[u] == -2) {
                parent[u] = bfs[i];
                bfs.push_back(u);
            }
    std::vector<int> top_of(nb, -1);
    for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
        int t = *it;
        std::vector<int> kids;
        for (int u : tadj[t])
            if (u != parent[t])
                kids.push_back(u);
        int top;
        if (kids.empty()) {
            top = add_leaf();
            std::vector<vertex_t> cur;
            for (vertex_t v : bags[t]) {
                cur.push_back(v);
                top = add_unary(nice_kind::introduce, top, v, cur);
            }
        }
        else {
            top = morph(top_of[kids[0]], bags[kids[0]], bags[t]);
            for (size_t i = 1; i < kids.size(); ++i) {
                int other = morph(top_of[kids[i]], bags[kids[i]], bags[t]);
                top = add_join(top, other, bags[t]);
            }
        }
        top_of[t] = top;
    }
    // forget everything left in the root bag
    int top = top_of[0];
    std::vector<vertex_t> cur = bags[0];
    while (!cur.empty()) {
        vertex_t v = cur.back();
        cur.pop_back();
        top = add_unary(nice_kind::forget, top, v, cur);
    }
    nd.root = top;

    nd.postorder.reserve(nd.nodes.size());
    std::vector<std::pair<int, int>> stack{{nd.root, 0}};
    while (!stack.empty()) {
        auto & [t, phase] = stack.back();
        const nice_node & node = nd.nodes[t];
        int next_child = -1;
        if (phase == 0 && node.child0 != -1)
            next_child = node.child0;
        else if (phase == 1 && node.child1 != -1)
            next_child = node.child1;
        if (next_child != -1) {
            ++phase;
            stack.push_back({next_child, 0});
            continue;
        }
        nd.postorder.push_back(t);
        stack.pop_back();
    }
    return nd;
}

// PACE-style decomposition text:
//   c <comment>
//   s td <num_bags> <max_bag_size> <n>
//   b <bag_id> <v1> <v2> ...
//   <bag_id1> <bag_id2>
inline tree_decomposition parse_td(std::istream & in, int expected_n)
{
    tree_decomposition td;
    bool have_header = false;
    long long nb = 0, max_bag = 0, n = 0;
    std::vector<char> have_bag;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = detail::tokens_of(line);
        if (toks.empty() || toks[0] == "c")
            continue;
        if (toks[0] == "s") {
            if (have_header)
                throw parse_error(line_no, "duplicate solution line");
            if (toks.size() != 5 || toks[1] != "td")
                throw parse_error(line_no, "malformed header, expected 's td <bags> <max-bag-size> <n>'");
            nb = detail::parse_int(toks[2], line_no, "bag count");
            max_bag = detail::parse_int(toks[3], line_no, "max bag size");
            n = detail::parse_int(toks[4], line_no, "vertex count");
            if (nb < 1)
                throw parse_error(line_no, "need at least one bag");
            if (n != expected_n)
                throw parse_error(line_no, "decomposition is for " + std::to_string(n) +
                                               " vertices, instance has " +
                                               std::to_string(expected_n));
            td.bags.assign(static_cast<size_t>(nb), {});
            have_bag.assign(static_cast<size_t>(nb), 0);
            have_header = true;
            continue;
        }
        if (!have_header)
            throw parse_error(line_no, "expected header before '" + toks[0] + "'");
        if (toks[0] == "b") {
            if (toks.size() < 2)
                throw parse_error(line_no, "malformed bag line");
            long long id = detail::parse_int(toks[1], line_no, "bag id");
            if (id < 1 || id > nb)
                throw parse_error(line_no, "bag id out of range");
            if (have_bag[id - 1])
                throw parse_error(line_no, "duplicate bag " + toks[1]);
            have_bag[id - 1] = 1;
            for (size_t i = 2; i < toks.size(); ++i)
                td.bags[id - 1].push_back(detail::parse_vertex(toks[i], line_no, n));
            std::sort(td.bags[id - 1].begin(), td.bags[id - 1].end());
            if (static_cast<long long>(td.bags[id - 1].size()) > max_bag)
                throw parse_error(line_no, "bag " + toks[1] + " exceeds declared maximum size");
            continue;
        }
        if (toks.size() == 2) {
            long long a = detail::parse_int(toks[0], line_no, "bag id");
            long long b = detail::parse_int(toks[1], line_no, "bag id");
            if (a < 1 || a > nb || b < 1 || b > nb)
                throw parse_error(line_no, "tree edge references a bag out of range");
            td.tree_edges.push_back({static_cast<int>(a - 1), static_cast<int>(b - 1)});
            continue;
        }
        throw parse_error(line_no, "unrecognized line");
    }
    if (!have_header)
        throw parse_error(line_no == 0 ? 1 : line_no, "missing 's td' header");
    return td;
}

inline void serialize_td(const tree_decomposition & td, int n, std::ostream & out)
{
    out << "s td " << td.num_bags() << " " << (td.width() + 1) << " " << n << "\n";
    for (int i = 0; i < td.num_bags(); ++i) {
        out << "b " << (i + 1);
        for (vertex_t v : td.bags[i])
            out << " " << (v + 1);
        out << "\n";
    }
    for (auto [a, b] : td.tree_edges)
        out << (a + 1) << " " << (b + 1) << "\n";
}

} // namespace illusolve
