#include <doctest.h>

#include <algorithm>
#include <queue>
#include <sstream>

#include <illusolve/exact.hpp>
#include <illusolve/generators.hpp>
#include <illusolve/treewidth_dp.hpp>

using namespace illusolve;

namespace {

int min_cover_size(const set_cover_system & sys)
{
    int best = sys.num_sets + 1;
    for (unsigned pick = 0; pick < (1u << sys.num_sets); ++pick) {
        unsigned covered = 0;
        for (auto [s, u] : sys.membership)
            if ((pick >> s) & 1u)
                covered |= 1u << u;
        if (covered == (1u << sys.num_elems) - 1u)
            best = std::min(best, __builtin_popcount(pick));
    }
    return best;
}

bool satisfiable(const monotone_cnf & phi)
{
    for (unsigned a = 0; a < (1u << phi.num_vars); ++a) {
        bool all = true;
        for (const auto & c : phi.clauses) {
            bool sat = false;
            for (int x : c.vars) {
                const bool val = (a >> x) & 1u;
                if (c.positive ? val : !val) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all)
            return true;
    }
    return false;
}

bool orientable(const mmo_instance & mi)
{
    const int m = static_cast<int>(mi.edges.size());
    for (unsigned o = 0; o < (1u << m); ++o) {
        std::vector<int> outdeg(mi.n, 0);
        for (int e = 0; e < m; ++e) {
            const auto & we = mi.edges[e];
            outdeg[(o >> e) & 1u ? we.v : we.u] += we.w;
        }
        if (*std::max_element(outdeg.begin(), outdeg.end()) <= mi.bound)
            return true;
    }
    return false;
}

bool is_bipartite(const graph & g)
{
    std::vector<int> color(g.n, -1);
    for (vertex_t s = 0; s < g.n; ++s) {
        if (color[s] != -1)
            continue;
        color[s] = 0;
        std::queue<vertex_t> q;
        q.push(s);
        while (!q.empty()) {
            vertex_t v = q.front();
            q.pop();
            for (vertex_t w : g.neighbors(v)) {
                if (color[w] == -1) {
                    color[w] = 1 - color[v];
                    q.push(w);
                } else if (color[w] == color[v])
                    return false;
            }
        }
    }
    return true;
}

set_cover_system chain_system()
{
    set_cover_system sys;
    sys.num_sets = 3;
    sys.num_elems = 3;
    sys.membership = {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}};
    return sys;
}

} // namespace

TEST_CASE("seeded rng basics")
{
    rng_t a(42), b(42), c(43);
    CHECK(a.next() == b.next());
    CHECK(a.next() == b.next());
    rng_t d(42);
    bool diverged = false;
    for (int i = 0; i < 8 && !diverged; ++i)
        diverged = d.next() != c.next();
    CHECK(diverged);
    for (int i = 0; i < 200; ++i) {
        int x = a.below(7);
        CHECK(x >= 0);
        CHECK(x < 7);
        CHECK_FALSE(a.chance(0.0));
        CHECK(a.chance(1.0));
    }
    CHECK_THROWS_AS(a.below(0), input_error);
}

TEST_CASE("set system text round trip")
{
    set_cover_system sys = chain_system();
    std::stringstream ss;
    serialize_set_cover(sys, ss);
    set_cover_system back = parse_set_cover(ss);
    CHECK(back.num_sets == 3);
    CHECK(back.num_elems == 3);
    CHECK(back.membership == sys.membership);

    auto expect_line = [](const std::string & text, int line) {
        std::istringstream in(text);
        try {
            parse_set_cover(in);
            FAIL_CHECK("no parse error for: ", text);
        } catch (const parse_error & e) {
            CHECK(e.line == line);
        }
    };
    expect_line("m 1 1\n", 1);                              // membership before header
    expect_line("p setcover 1 1\n", 1);                     // short header
    expect_line("p setcover 1 1 1\nm 1\n", 2);              // short membership
    expect_line("p setcover 1 1 2\nm 1 1\n", 3);            // count mismatch
    expect_line("p setcover 1 1 1\nq 1 1\n", 2);            // unknown directive
    expect_line("p setcover 1 1 1\nm 2 1\n", 2);            // set out of range
    expect_line("", 1);                                     // missing header

    std::istringstream dup("p setcover 1 1 2\nm 1 1\nm 1 1\n");
    CHECK_THROWS_AS(parse_set_cover(dup), input_error);
    std::istringstream split("p setcover 2 2 2\nm 1 1\nm 2 2\n");
    CHECK_THROWS_WITH_AS(parse_set_cover(split),
                         "set system incidence graph is not connected", input_error);
}

TEST_CASE("formula text round trip")
{
    monotone_cnf phi;
    phi.num_vars = 3;
    phi.clauses = {{true, {0, 1}}, {false, {1, 2}}, {true, {2}}};
    std::stringstream ss;
    serialize_mcnf(phi, ss);
    CHECK(ss.str() == "p mcnf 3 3\n+ 1 2\n- 2 3\n+ 3\n");
    monotone_cnf back = parse_mcnf(ss);
    CHECK(back.num_vars == 3);
    REQUIRE(back.clauses.size() == 3);
    CHECK(back.clauses[1].positive == false);
    CHECK(back.clauses[1].vars == std::vector<int>{1, 2});

    std::istringstream before("+ 1\np mcnf 1 1\n");
    CHECK_THROWS_AS(parse_mcnf(before), parse_error);
    std::istringstream empty_clause("p mcnf 1 1\n+\n");
    CHECK_THROWS_AS(parse_mcnf(empty_clause), parse_error);
    std::istringstream repeated("p mcnf 2 1\n+ 1 1\n");
    CHECK_THROWS_AS(parse_mcnf(repeated), input_error);
    std::istringstream wide("p mcnf 4 1\n+ 1 2 3 4\n");
    CHECK_THROWS_AS(parse_mcnf(wide), input_error);
    std::istringstream often("p mcnf 2 4\n+ 1\n+ 1 2\n+ 1\n+ 1\n");
    CHECK_THROWS_AS(parse_mcnf(often), input_error); // x1 positive four times
}

TEST_CASE("weighted graph text round trip")
{
    mmo_instance mi;
    mi.n = 3;
    mi.bound = 1;
    mi.edges = {{0, 1, 2}, {1, 2, 1}};
    std::stringstream ss;
    serialize_mmo(mi, ss);
    CHECK(ss.str() == "p mmo 3 2 1\nw 1 2 2\nw 2 3 1\n");
    mmo_instance back = parse_mmo(ss);
    CHECK(back.n == 3);
    CHECK(back.bound == 1);
    REQUIRE(back.edges.size() == 2);
    CHECK(back.edges[0].w == 2);
    CHECK(back.total_weight() == 3);

    std::istringstream loop("p mmo 2 1 1\nw 1 1 1\n");
    CHECK_THROWS_AS(parse_mmo(loop), input_error);
    std::istringstream dup("p mmo 2 2 1\nw 1 2 1\nw 2 1 3\n");
    CHECK_THROWS_AS(parse_mmo(dup), input_error);
    std::istringstream zero_w("p mmo 2 1 1\nw 1 2 0\n");
    CHECK_THROWS_AS(parse_mmo(zero_w), input_error);
    std::istringstream bad("p mmo 2 1\n");
    CHECK_THROWS_AS(parse_mmo(bad), parse_error);
}

TEST_CASE("cover gadget shape")
{
    setcover_gen_result res = gen_setcover(chain_system());
    const auto & inst = res.inst;
    CHECK(inst.strict_zero_majority());
    for (vertex_t s : res.set_vertex)
        CHECK(inst.label[s] == 1);
    CHECK(inst.count_ones() == 3);

    std::vector<char> is_elem(inst.g.n, 0);
    for (vertex_t u : res.elem_vertex)
        is_elem[u] = 1;
    for (vertex_t v = 0; v < inst.g.n; ++v) {
        if (is_elem[v]) {
            CHECK(surplus(inst, v) == 1);
            CHECK(is_under_illusion(inst, v));
        } else
            CHECK_FALSE(is_under_illusion(inst, v));
    }
}

TEST_CASE("cover gadget optimum equals the minimum cover")
{
    std::vector<set_cover_system> systems;
    systems.push_back(chain_system());
    {
        set_cover_system one;
        one.num_sets = 1;
        one.num_elems = 3;
        one.membership = {{0, 0}, {0, 1}, {0, 2}};
        systems.push_back(one);
    }
    {
        set_cover_system ring;
        ring.num_sets = 4;
        ring.num_elems = 4;
        ring.membership = {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}, {3, 0}};
        systems.push_back(ring);
    }
    {
        // random connected systems
        for (int s = 1; s <= 6; ++s) {
            rng_t rng(500 + s);
            set_cover_system sys;
            sys.num_sets = 2 + rng.below(3);
            sys.num_elems = 2 + rng.below(3);
            for (int u = 0; u < sys.num_elems; ++u)
                sys.membership.push_back({rng.below(sys.num_sets), u});
            for (int k = 0; k < sys.num_sets; ++k) {
                std::pair<int, int> mem{k, rng.below(sys.num_elems)};
                if (std::find(sys.membership.begin(), sys.membership.end(), mem) ==
                    sys.membership.end())
                    sys.membership.push_back(mem);
            }
            try {
                sys.validate();
            } catch (const input_error &) {
                continue; // disconnected draw; skip
            }
            systems.push_back(sys);
        }
    }
    for (const auto & sys : systems) {
        setcover_gen_result res = gen_setcover(sys);
        solution sol = brute_force(res.inst);
        INFO("sets ", sys.num_sets, " elems ", sys.num_elems);
        CHECK(sol.cost == min_cover_size(sys));
        // an optimal flip set only ever touches set vertices
        for (vertex_t v : sol.flipped)
            CHECK(std::find(res.set_vertex.begin(), res.set_vertex.end(), v) !=
                  res.set_vertex.end());
    }
}

TEST_CASE("formula gadget shape")
{
    monotone_cnf phi;
    phi.num_vars = 3;
    phi.clauses = {{true, {0, 1, 2}}, {false, {0, 1}}, {true, {2}}};
    threesat_gen_result res = gen_3sat(phi);
    const auto & inst = res.inst;
    CHECK(inst.strict_zero_majority());
    CHECK(is_bipartite(inst.g));
    int max_deg = 0;
    for (vertex_t v = 0; v < inst.g.n; ++v)
        max_deg = std::max(max_deg, inst.g.degree(v));
    CHECK(max_deg <= 5);
    CHECK(inst.count_ones() == 2 * phi.num_vars);

    // exactly the controllers and the clause vertices start out deceived
    std::vector<char> expect(inst.g.n, 0);
    for (vertex_t v : res.controller)
        expect[v] = 1;
    for (vertex_t v : res.clause_vertex)
        expect[v] = 1;
    for (vertex_t v = 0; v < inst.g.n; ++v)
        CHECK(is_under_illusion(inst, v) == static_cast<bool>(expect[v]));
}

TEST_CASE("formula gadget optimum detects satisfiability")
{
    std::vector<monotone_cnf> formulas;
    {
        monotone_cnf f;
        f.num_vars = 2;
        f.clauses = {{true, {0, 1}}};
        formulas.push_back(f); // satisfiable
    }
    {
        monotone_cnf f;
        f.num_vars = 1;
        f.clauses = {{true, {0}}, {false, {0}}};
        formulas.push_back(f); // x and not-x: unsatisfiable
    }
    {
        monotone_cnf f;
        f.num_vars = 2;
        f.clauses = {{true, {0}}, {true, {1}}, {false, {0}}};
        formulas.push_back(f); // unsatisfiable
    }
    {
        monotone_cnf f;
        f.num_vars = 3;
        f.clauses = {{true, {0, 1}}, {false, {1, 2}}, {true, {2}}};
        formulas.push_back(f); // satisfiable
    }
    {
        monotone_cnf f;
        f.num_vars = 3;
        f.clauses = {{true, {0, 1, 2}}, {false, {0, 1, 2}}};
        formulas.push_back(f); // satisfiable (mix values)
    }
    for (const auto & phi : formulas) {
        threesat_gen_result res = gen_3sat(phi);
        solution sol = brute_force(res.inst);
        INFO("vars ", phi.num_vars, " clauses ", phi.clauses.size());
        CHECK(sol.cost >= phi.num_vars); // the controllers alone force this
        CHECK((sol.cost == phi.num_vars) == satisfiable(phi));
    }
}

TEST_CASE("chessboard gadget")
{
    CHECK_THROWS_AS(gen_chessboard(0), input_error);
    for (int k = 1; k <= 2; ++k) {
        chessboard_gen_result res = gen_chessboard(k);
        CHECK(res.inst.g.n == 16 * k - 4);
        CHECK(res.inst.count_ones() == 4 * k);
        CHECK(static_cast<int>(res.switch_middles.size()) == 6 * k - 2);
        REQUIRE(res.grid.size() == 2);
        CHECK(static_cast<int>(res.grid[0].size()) == 2 * k);
        // every switch starts out deceived, the grid does not
        for (vertex_t y : res.switch_middles)
            CHECK(is_under_illusion(res.inst, y));
        for (const auto & row : res.grid)
            for (vertex_t z : row)
                CHECK_FALSE(is_under_illusion(res.inst, z));
        CHECK(brute_force(res.inst).cost == 2 * k);
    }

    // size one: the only optimal flip pairs are the two grid diagonals
    chessboard_gen_result one = gen_chessboard(1);
    std::vector<std::pair<vertex_t, vertex_t>> good;
    auto ones = one.inst.one_vertices();
    REQUIRE(ones.size() == 4);
    for (std::size_t i = 0; i < ones.size(); ++i)
        for (std::size_t j = i + 1; j < ones.size(); ++j)
            if (verify(one.inst, {ones[i], ones[j]}).feasible)
                good.push_back({ones[i], ones[j]});
    REQUIRE(good.size() == 2);
    CHECK(good[0] == std::pair<vertex_t, vertex_t>{one.grid[0][0], one.grid[1][1]});
    CHECK(good[1] == std::pair<vertex_t, vertex_t>{one.grid[0][1], one.grid[1][0]});
}

TEST_CASE("orientation gadget shape")
{
    mmo_instance mi;
    mi.n = 3;
    mi.bound = 1;
    mi.edges = {{0, 1, 1}, {1, 2, 2}};
    mmo_gen_result res = gen_mmo(mi);
    CHECK(res.total_weight == 3);
    // clearing an original must take weighted-degree minus bound flips,
    // so its surplus sits at twice that
    CHECK(surplus(res.inst, res.original[0]) == 0);
    CHECK(surplus(res.inst, res.original[1]) == 4);
    CHECK(surplus(res.inst, res.original[2]) == 2);
    CHECK(demand(res.inst, res.original[1]) == 3 - 1);
    CHECK(res.leaves_of[0].size() == 1); // one zero-leaf lowers the surplus
    CHECK(res.leaves_of[1].size() == 1); // one one-leaf raises it
    CHECK(res.leaves_of[2].size() == 0); // already in balance
    CHECK(res.inst.count_ones() == 4 * res.total_weight + 1);
    REQUIRE(res.grid.size() == 2);
    CHECK(res.grid[1][0].size() == 4); // second edge has weight 2

    // the bundled path decomposition is valid and drives the exact solver
    CHECK(validate_decomposition(res.inst.g, res.path_dec).ok);
    tw_options opt;
    opt.decomposition = &res.path_dec;
    solution via_td = solve_treewidth(res.inst, subset_spec::all(res.inst.g.n), opt);
    CHECK(via_td.cost == brute_force(res.inst).cost);

    CHECK_THROWS_AS(gen_mmo(mi, 2), size_error);
}

TEST_CASE("orientation gadget optimum characterizes orientability")
{
    std::vector<mmo_instance> cases;
    {
        mmo_instance mi; // triangle, unit weights: cyclic orientation works
        mi.n = 3;
        mi.bound = 1;
        mi.edges = {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}};
        cases.push_back(mi);
    }
    {
        mmo_instance mi; // heavy edge, small bound: impossible
        mi.n = 2;
        mi.bound = 1;
        mi.edges = {{0, 1, 2}};
        cases.push_back(mi);
    }
    {
        mmo_instance mi; // heavy edge, matching bound: fine
        mi.n = 2;
        mi.bound = 2;
        mi.edges = {{0, 1, 2}};
        cases.push_back(mi);
    }
    {
        mmo_instance mi; // star, everything points inward
        mi.n = 4;
        mi.bound = 1;
        mi.edges = {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}};
        cases.push_back(mi);
    }
    {
        mmo_instance mi; // path with weight two edges
        mi.n = 3;
        mi.bound = 2;
        mi.edges = {{0, 1, 2}, {1, 2, 2}};
        cases.push_back(mi);
    }
    {
        mmo_instance mi; // two triangles sharing a vertex, zero bound
        mi.n = 3;
        mi.bound = 0;
        mi.edges = {{0, 1, 1}, {1, 2, 1}};
        cases.push_back(mi);
    }
    for (const auto & mi : cases) {
        mmo_gen_result res = gen_mmo(mi);
        tw_options opt;
        opt.decomposition = &res.path_dec;
        solution sol = solve_treewidth(res.inst, subset_spec::all(res.inst.g.n), opt);
        INFO("n ", mi.n, " m ", mi.edges.size(), " R ", mi.bound);
        CHECK(sol.cost >= 2 * res.total_weight);
        CHECK((sol.cost == 2 * res.total_weight) == orientable(mi));
    }
}

TEST_CASE("random instance generator")
{
    ei_instance a = gen_random(10, 0.3, 0.4, 99);
    ei_instance b = gen_random(10, 0.3, 0.4, 99);
    CHECK(a.g.edges == b.g.edges);
    CHECK(a.label == b.label);
    ei_instance c = gen_random(10, 0.3, 0.4, 100);
    CHECK((a.g.edges != c.g.edges || a.label != c.label));

    for (int s = 0; s < 20; ++s)
        CHECK(gen_random(9, 0.3, 0.6, 300 + s, true).strict_zero_majority());
    CHECK_THROWS_AS(gen_random(4, 0.5, 1.0, 1, true), input_error);
    CHECK_THROWS_AS(gen_random(-1, 0.5, 0.5, 1), input_error);
    CHECK_THROWS_AS(gen_random(4, 1.5, 0.5, 1), input_error);

    ei_instance empty = gen_random(0, 0.5, 0.5, 1);
    CHECK(empty.g.n == 0);
    CHECK_NOTHROW(empty.validate());
}

TEST_CASE("grid instance generator")
{
    ei_instance z = gen_grid(3, 4, grid_rule::zeros, 1);
    CHECK(z.g.n == 12);
    CHECK(z.g.m() == 3 * 3 + 2 * 4); // vertical plus horizontal runs
    CHECK(z.count_ones() == 0);
    CHECK(gen_grid(2, 2, grid_rule::ones, 1).count_ones() == 4);
    ei_instance cb = gen_grid(2, 3, grid_rule::checkerboard, 1);
    CHECK(cb.label == labeling{1, 0, 1, 0, 1, 0});
    CHECK(gen_grid(2, 3, grid_rule::random, 7).label == gen_grid(2, 3, grid_rule::random, 7).label);
    CHECK_THROWS_AS(gen_grid(0, 3, grid_rule::zeros, 1), input_error);
}

TEST_CASE("tree instance generator")
{
    for (int s = 0; s < 10; ++s) {
        ei_instance t = gen_tree(8, 800 + s);
        CHECK(t.g.n == 8);
        CHECK(t.g.m() == 7);
        CHECK(t.g.components().size() == 1);
    }
    CHECK(gen_tree(1, 5).g.n == 1);
    CHECK_THROWS_AS(gen_tree(0, 5), input_error);
    ei_instance a = gen_tree(9, 12), b = gen_tree(9, 12);
    CHECK(a.g.edges == b.g.edges);
    CHECK(a.label == b.label);
}
