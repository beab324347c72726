#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "illusolve/errors.hpp"
#include "illusolve/exact.hpp"
#include "illusolve/generators.hpp"
#include "illusolve/instance.hpp"
#include "illusolve/io.hpp"
#include "illusolve/ptas.hpp"
#include "illusolve/reductions.hpp"
#include "illusolve/tree_decomposition.hpp"
#include "illusolve/treewidth_dp.hpp"
#include "illusolve/vc_solver.hpp"

namespace illusolve {

// Exit code contract: 0 success, 1 usage/parse/input trouble, 2 a
// verification that came out infeasible, 3 broken internal contracts
// (solver disagreement, infeasible solver output).
enum cli_exit : int {
    cli_ok = 0,
    cli_input = 1,
    cli_infeasible = 2,
    cli_internal = 3,
};

namespace detail {

template <typename F>
auto with_istream(const std::string & path, std::istream & stdin_stream, F && f)
{
    if (path == "-")
        return f(stdin_stream);
    std::ifstream fs(path);
    if (!fs)
        throw input_error("cannot open input file: " + path);
    return f(fs);
}

template <typename F>
void with_ostream(const std::string & path, std::ostream & stdout_stream, F && f)
{
    if (path.empty() || path == "-") {
        f(stdout_stream);
        return;
    }
    std::ofstream fs(path);
    if (!fs)
        throw input_error("cannot open output file: " + path);
    f(fs);
}

inline std::vector<vertex_t> parse_id_list(const std::string & text, int n, const char * what)
{
    std::vector<vertex_t> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        try {
            long long v = std::stoll(item);
            if (v < 1 || v > n)
                throw input_error("");
            out.push_back(static_cast<vertex_t>(v - 1));
        }
        catch (const std::exception &) {
            throw input_error(std::string(what) + " entry out of range: '" + item + "'");
        }
    }
    return out;
}

inline nlohmann::json ids_to_json(const std::vector<vertex_t> & ids)
{
    nlohmann::json arr = nlohmann::json::array();
    for (vertex_t v : ids)
        arr.push_back(v + 1);
    return arr;
}

} // namespace detail

// What one solve run produced, algorithm-specific extras included.
struct solve_outcome {
    solution sol;
    std::optional<ptas_result> ptas_info;
    std::optional<tw_stats> tw_info;
};

struct solve_params {
    std::string algo = "auto";
    int cap = 22;       // brute-force candidate cap
    int guess_cap = 26; // vc enumeration cap
    bool full_guess = false;
    double epsilon = 1.0;
    int jobs = 1;
    const tree_decomposition * td = nullptr;   // tw only
    const layer_assignment * layers = nullptr; // ptas only
    const subset_spec * subset = nullptr;      // brute/tw/auto only
};

// One dispatch point used by `solve` and `bench`. The `auto` policy:
// brute force while the flip candidates are few, then the cover-
// parameterized solver while a small cover exists, then the decomposition
// solver while the heuristic width is small, and the approximation
// scheme as the catch-all.
inline solve_outcome dispatch_solve(const ei_instance & inst, const solve_params & p)
{
    solve_outcome res;
    const subset_spec all = subset_spec::all(inst.g.n);
    const subset_spec & subset = p.subset != nullptr ? *p.subset : all;
    const bool restricted = p.subset != nullptr;

    auto run_brute = [&]() { res.sol = brute_force(inst, subset, p.cap); };
    auto run_vc = [&]() {
        vc_options o;
        o.full_guess_space = p.full_guess;
        o.jobs = p.jobs;
        o.guess_cap = p.guess_cap;
        res.sol = solve_vertex_cover_fpt(inst, o);
    };
    auto run_tw = [&](const tree_decomposition * td) {
        tw_options o;
        o.decomposition = td;
        tw_stats stats;
        res.sol = solve_treewidth(inst, subset, o, &stats);
        res.tw_info = stats;
    };
    auto run_ptas = [&](double eps) {
        ptas_options o;
        o.layers = p.layers;
        o.jobs = p.jobs;
        res.ptas_info = ptas_solve(inst, eps, o);
        res.sol = res.ptas_info->sol;
    };

    if (p.algo == "brute")
        run_brute();
    else if (p.algo == "vc") {
        if (restricted)
            throw input_error("--subset requires --algo brute, tw, or auto");
        run_vc();
    }
    else if (p.algo == "tw")
        run_tw(p.td);
    else if (p.algo == "ptas") {
        if (restricted)
            throw input_error("--subset requires --algo brute, tw, or auto");
        run_ptas(p.epsilon);
    }
    else if (p.algo == "auto") {
        const int ones = inst.count_ones();
        if (ones <= 18) {
            log_info("auto: brute force (" + std::to_string(ones) + " flip candidates)");
            run_brute();
        }
        else if (restricted) {
            // the decomposition solver is the subset-capable fallback
            log_info("auto: decomposition solver (restricted solve)");
            run_tw(nullptr);
        }
        else if (auto cover = minimum_vertex_cover_bounded(inst.g, 12)) {
            log_info("auto: cover-parameterized solver (cover size " +
                     std::to_string(cover->size()) + ")");
            run_vc();
        }
        else {
            tree_decomposition td = heuristic_decomposition(inst.g);
            if (td.width() <= 10) {
                log_info("auto: decomposition solver (heuristic width " +
                         std::to_string(td.width()) + ")");
                run_tw(&td);
            }
            else {
                log_info("auto: approximation scheme (heuristic width " +
                         std::to_string(td.width()) + ")");
                run_ptas(1.0);
            }
        }
    }
    else
        throw input_error("unknown algorithm: " + p.algo);

    // the no-infeasible-output guarantee, independent of solver internals
    if (!verify(inst, res.sol.flipped, subset).feasible)
        throw contract_error("solver '" + res.sol.solver + "' returned an infeasible flip set");
    return res;
}

inline nlohmann::json outcome_to_json(const solve_outcome & res)
{
    nlohmann::json j = solution_to_json(res.sol);
    if (res.ptas_info) {
        j["k"] = res.ptas_info->k;
        j["chosen_shift"] = res.ptas_info->chosen_shift;
        j["per_shift_costs"] = res.ptas_info->per_shift_costs;
    }
    if (res.tw_info)
        j["peak_states"] = res.tw_info->peak_states;
    return j;
}

// The whole command-line surface, separated from main() for testability.
// `args` is in program order and excludes the program name.
inline int run_cli(std::vector<std::string> args, std::istream & in, std::ostream & out,
                   std::ostream & err)
{
    CLI::App app{"illusolve: solvers, reductions, and generators for majority-illusion removal"};
    app.require_subcommand(1);

    // ---- solve ----
    auto * solve_cmd = app.add_subcommand("solve", "Compute a minimum flip set");
    std::string s_algo = "auto", s_input = "-", s_output, s_td, s_subset, s_layers, s_roots;
    int s_cap = 22, s_guess_cap = 26, s_jobs = 1;
    double s_eps = 1.0;
    bool s_full_guess = false;
    solve_cmd->add_option("--algo", s_algo, "brute | vc | tw | ptas | auto")
        ->check(CLI::IsMember({"brute", "vc", "tw", "ptas", "auto"}));
    solve_cmd->add_option("--input,-i", s_input, "instance file ('-' for stdin)");
    solve_cmd->add_option("--output,-o", s_output, "solution JSON file (default stdout)");
    solve_cmd->add_option("--cap", s_cap, "brute-force candidate cap")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--guess-cap", s_guess_cap, "cover enumeration cap")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_flag("--full-guess", s_full_guess,
                        "vc: enumerate flips over the whole cover, not only 1-labeled vertices");
    solve_cmd->add_option("--td", s_td, "tree decomposition file (tw)");
    solve_cmd->add_option("--subset", s_subset,
                          "file listing the vertices that must be illusion-free (brute/tw)");
    solve_cmd->add_option("--epsilon", s_eps, "approximation parameter (ptas)")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--layers", s_layers, "layer assignment file (ptas)");
    solve_cmd->add_option("--roots", s_roots, "comma-separated BFS roots (ptas)");
    solve_cmd->add_option("--jobs", s_jobs, "worker threads")->check(CLI::PositiveNumber);

    // ---- verify ----
    auto * verify_cmd = app.add_subcommand("verify", "Check a flip set against an instance");
    std::string v_input = "-", v_solution, v_subset, v_output;
    verify_cmd->add_option("--input,-i", v_input, "instance file ('-' for stdin)");
    verify_cmd->add_option("--solution,-s", v_solution, "solution JSON file")->required();
    verify_cmd->add_option("--subset", v_subset, "restrict the check to these vertices");
    verify_cmd->add_option("--output,-o", v_output, "report JSON file (default stdout)");

    // ---- reduce ----
    auto * reduce_cmd = app.add_subcommand("reduce", "Translate between the two problem forms");
    std::string r_direction, r_input = "-", r_output, r_map;
    reduce_cmd->add_option("--direction", r_direction, "ei2tvd | tvd2ei")
        ->required()
        ->check(CLI::IsMember({"ei2tvd", "tvd2ei"}));
    reduce_cmd->add_option("--input,-i", r_input, "source instance ('-' for stdin)");
    reduce_cmd->add_option("--output,-o", r_output, "produced instance (default stdout)");
    reduce_cmd->add_option("--map", r_map, "vertex-map JSON sidecar file");

    // ---- generate ----
    auto * gen_cmd = app.add_subcommand("generate", "Emit gadget or random instances");
    std::string g_kind, g_source = "-", g_output, g_rule = "random", g_td_out;
    int g_size = 1, g_n = 10, g_rows = 2, g_cols = 2, g_weight_cap = 64;
    double g_edge_prob = 0.3, g_label_prob = 0.35;
    std::uint64_t g_seed = 1;
    bool g_zero_majority = false;
    gen_cmd->add_option("--kind", g_kind, "setcover | 3sat | chessboard | mmo | random | grid | tree")
        ->required()
        ->check(CLI::IsMember({"setcover", "3sat", "chessboard", "mmo", "random", "grid", "tree"}));
    gen_cmd->add_option("--source", g_source, "source system file (setcover/3sat/mmo)");
    gen_cmd->add_option("--output,-o", g_output, "instance file (default stdout)");
    gen_cmd->add_option("--size", g_size, "chessboard size k")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--n", g_n, "vertex count (random/tree)")->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--rows", g_rows, "grid rows")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--cols", g_cols, "grid columns")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--edge-prob", g_edge_prob, "edge probability (random)");
    gen_cmd->add_option("--label-prob", g_label_prob, "probability of label 1");
    gen_cmd->add_option("--seed", g_seed, "generator seed");
    gen_cmd->add_option("--rule", g_rule, "grid labeling rule: zeros|ones|checkerboard|random")
        ->check(CLI::IsMember({"zeros", "ones", "checkerboard", "random"}));
    gen_cmd->add_flag("--zero-majority", g_zero_majority,
                      "redraw labels until 0 is the strict majority (random)");
    gen_cmd->add_option("--weight-cap", g_weight_cap, "unary-scale cap (mmo)")
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--td-out", g_td_out, "write the bundled path decomposition here (mmo)");

    // ---- bench ----
    auto * bench_cmd = app.add_subcommand("bench", "Time solvers over an instance directory");
    std::string b_corpus, b_solvers = "brute,tw", b_output;
    int b_reps = 1, b_jobs = 1;
    double b_eps = 1.0;
    bench_cmd->add_option("--corpus", b_corpus, "directory of instance files")->required();
    bench_cmd->add_option("--solvers", b_solvers, "comma list from brute,vc,tw,ptas");
    bench_cmd->add_option("--reps", b_reps, "repetitions per (instance, solver)")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--output,-o", b_output, "JSONL records file (default stdout)");
    bench_cmd->add_option("--jobs", b_jobs, "worker threads")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--epsilon", b_eps, "approximation parameter for ptas runs")
        ->check(CLI::PositiveNumber);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    }
    catch (const CLI::CallForHelp & e) {
        out << app.help();
        return cli_ok;
    }
    catch (const CLI::ParseError & e) {
        err << "usage error: " << e.what() << "\n";
        return cli_input;
    }

    try {
        if (solve_cmd->parsed()) {
            ei_instance inst = detail::with_istream(s_input, in, [](std::istream & is) {
                return parse_ei(is);
            });
            std::optional<subset_spec> subset;
            if (!s_subset.empty())
                subset = detail::with_istream(s_subset, in, [&](std::istream & is) {
                    return parse_subset(is, inst.g.n);
                });
            std::optional<tree_decomposition> td;
            if (!s_td.empty()) {
                if (s_algo != "tw")
                    throw input_error("--td requires --algo tw");
                td = detail::with_istream(s_td, in, [&](std::istream & is) {
                    return parse_td(is, inst.g.n);
                });
            }
            std::optional<layer_assignment> layers;
            if (!s_layers.empty() && !s_roots.empty())
                throw input_error("--layers and --roots are mutually exclusive");
            if (!s_layers.empty() || !s_roots.empty()) {
                if (s_algo != "ptas")
                    throw input_error("--layers/--roots require --algo ptas");
                if (!s_layers.empty()) {
                    layer_assignment la;
                    la.layer = detail::with_istream(s_layers, in, [&](std::istream & is) {
                        return parse_layers(is, inst.g.n);
                    });
                    la.user_supplied = true;
                    layers = la;
                }
                else {
                    layers = compute_layers(
                        inst.g, detail::parse_id_list(s_roots, inst.g.n, "--roots"));
                }
            }

            solve_params p;
            p.algo = s_algo;
            p.cap = s_cap;
            p.guess_cap = s_guess_cap;
            p.full_guess = s_full_guess;
            p.epsilon = s_eps;
            p.jobs = s_jobs;
            p.td = td ? &*td : nullptr;
            p.layers = layers ? &*layers : nullptr;
            p.subset = subset ? &*subset : nullptr;
            solve_outcome res = dispatch_solve(inst, p);
            detail::with_ostream(s_output, out, [&](std::ostream & os) {
                os << outcome_to_json(res).dump(2) << "\n";
            });
            return cli_ok;
        }

        if (verify_cmd->parsed()) {
            ei_instance inst = detail::with_istream(v_input, in, [](std::istream & is) {
                return parse_ei(is);
            });
            solution sol = detail::with_istream(v_solution, in, [&](std::istream & is) {
                return parse_solution_json(is, inst.g.n);
            });
            subset_spec subset = subset_spec::all(inst.g.n);
            if (!v_subset.empty())
                subset = detail::with_istream(v_subset, in, [&](std::istream & is) {
                    return parse_subset(is, inst.g.n);
                });
            verify_report rep = verify(inst, sol.flipped, subset);
            nlohmann::json j;
            j["feasible"] = rep.feasible;
            j["violating"] = detail::ids_to_json(rep.violating);
            j["cost"] = rep.cost;
            detail::with_ostream(v_output, out, [&](std::ostream & os) {
                os << j.dump(2) << "\n";
            });
            if (!rep.feasible) {
                err << "infeasible: " << rep.violating.size()
                    << " vertex(es) still under illusion\n";
                return cli_infeasible;
            }
            return cli_ok;
        }

        if (reduce_cmd->parsed()) {
            reduction_artifact art;
            if (r_direction == "ei2tvd") {
                ei_instance src = detail::with_istream(r_input, in, [](std::istream & is) {
                    return parse_ei(is);
                });
                auto res = ei_to_tvd(src);
                art = res.art;
                detail::with_ostream(r_output, out, [&](std::ostream & os) {
                    serialize_tvd(res.out, os);
                });
            }
            else {
                tvd_instance src = detail::with_istream(r_input, in, [](std::istream & is) {
                    return parse_tvd(is);
                });
                auto res = tvd_to_ei(src);
                art = res.art;
                detail::with_ostream(r_output, out, [&](std::ostream & os) {
                    serialize_ei(res.out, os);
                });
            }
            if (!r_map.empty()) {
                nlohmann::json j;
                j["direction"] = r_direction;
                j["vertex_map"] = detail::ids_to_json(art.vertex_map);
                j["auxiliary"] = detail::ids_to_json(art.auxiliary);
                nlohmann::json owners = nlohmann::json::array();
                for (vertex_t o : art.aux_owner)
                    owners.push_back(o == -1 ? nlohmann::json(nullptr) : nlohmann::json(o + 1));
                j["aux_owner"] = owners;
                std::ofstream ms(r_map);
                if (!ms)
                    throw input_error("cannot open output file: " + r_map);
                ms << j.dump(2) << "\n";
            }
            return cli_ok;
        }

        if (gen_cmd->parsed()) {
            ei_instance inst;
            std::optional<tree_decomposition> bundled_td;
            if (g_kind == "setcover") {
                auto sys = detail::with_istream(g_source, in, [](std::istream & is) {
                    return parse_set_cover(is);
                });
                inst = gen_setcover(sys).inst;
            }
            else if (g_kind == "3sat") {
                auto phi = detail::with_istream(g_source, in, [](std::istream & is) {
                    return parse_mcnf(is);
                });
                inst = gen_3sat(phi).inst;
            }
            else if (g_kind == "chessboard")
                inst = gen_chessboard(g_size).inst;
            else if (g_kind == "mmo") {
                auto mi = detail::with_istream(g_source, in, [](std::istream & is) {
                    return parse_mmo(is);
                });
                auto res = gen_mmo(mi, g_weight_cap);
                inst = res.inst;
                bundled_td = res.path_dec;
            }
            else if (g_kind == "random")
                inst = gen_random(g_n, g_edge_prob, g_label_prob, g_seed, g_zero_majority);
            else if (g_kind == "grid") {
                grid_rule rule = g_rule == "zeros"          ? grid_rule::zeros
                                 : g_rule == "ones"         ? grid_rule::ones
                                 : g_rule == "checkerboard" ? grid_rule::checkerboard
                                                            : grid_rule::random;
                inst = gen_grid(g_rows, g_cols, rule, g_seed, g_label_prob);
            }
            else
                inst = gen_tree(g_n, g_seed, g_label_prob);

            detail::with_ostream(g_output, out, [&](std::ostream & os) {
                serialize_ei(inst, os);
            });
            if (!g_td_out.empty()) {
                if (!bundled_td)
                    throw input_error("--td-out is only available with --kind mmo");
                std::ofstream ts(g_td_out);
                if (!ts)
                    throw input_error("cannot open output file: " + g_td_out);
                serialize_td(*bundled_td, inst.g.n, ts);
            }
            return cli_ok;
        }

        // ---- bench ----
        std::vector<std::string> wanted;
        {
            std::string item;
            std::istringstream ss(b_solvers);
            while (std::getline(ss, item, ','))
                if (!item.empty()) {
                    if (item != "brute" && item != "vc" && item != "tw" && item != "ptas")
                        throw input_error("unknown solver in --solvers: " + item);
                    wanted.push_back(item);
                }
        }
        if (wanted.empty())
            throw input_error("--solvers selected nothing");
        namespace fs = std::filesystem;
        if (!fs::is_directory(b_corpus))
            throw input_error("corpus is not a directory: " + b_corpus);
        std::vector<fs::path> files;
        for (const auto & entry : fs::directory_iterator(b_corpus))
            if (entry.is_regular_file())
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());

        int disagreements = 0;
        detail::with_ostream(b_output, out, [&](std::ostream & os) {
            for (const auto & path : files) {
                std::ifstream is(path);
                if (!is)
                    throw input_error("cannot open input file: " + path.string());
                ei_instance inst = parse_ei(is); // parse time excluded from records
                std::optional<int> exact_cost;
                std::string exact_from;
                for (const std::string & algo : wanted) {
                    solve_params p;
                    p.algo = algo;
                    p.jobs = b_jobs;
                    p.epsilon = b_eps;
                    p.cap = 62; // bench trusts its corpus; the hard cap still guards
                    solve_outcome best;
                    for (int rep = 0; rep < b_reps; ++rep) {
                        solve_outcome res = dispatch_solve(inst, p);
                        if (rep == 0 || res.sol.time_ms < best.sol.time_ms)
                            best = std::move(res);
                    }
                    nlohmann::json rec;
                    rec["instance"] = path.filename().string();
                    rec["n"] = inst.g.n;
                    rec["m"] = inst.g.m();
                    rec["solver"] = algo;
                    rec["cost"] = best.sol.cost;
                    rec["feasible"] = best.sol.feasible;
                    rec["time_ms"] = best.sol.time_ms;
                    if (best.tw_info)
                        rec["peak_states"] = best.tw_info->peak_states;
                    if (best.ptas_info) {
                        rec["k"] = best.ptas_info->k;
                        rec["chosen_shift"] = best.ptas_info->chosen_shift;
                        if (exact_cost) {
                            if (*exact_cost > 0)
                                rec["ratio"] =
                                    static_cast<double>(best.sol.cost) / *exact_cost;
                            else if (best.sol.cost == 0)
                                rec["ratio"] = 1.0;
                            else
                                rec["ratio"] = nullptr;
                        }
                    }
                    const bool is_exact = algo == "brute" || algo == "vc" || algo == "tw";
                    if (is_exact) {
                        if (exact_cost && *exact_cost != best.sol.cost) {
                            err << "solver disagreement on " << path.filename().string() << ": "
                                << exact_from << "=" << *exact_cost << " vs " << algo << "="
                                << best.sol.cost << "\n";
                            ++disagreements;
                        }
                        if (!exact_cost) {
                            exact_cost = best.sol.cost;
                            exact_from = algo;
                        }
                    }
                    os << rec.dump() << "\n";
                }
            }
        });
        err << "bench: " << files.size() << " instance(s), " << wanted.size()
            << " solver(s), reps=" << b_reps << ", disagreements=" << disagreements << "\n";
        return disagreements == 0 ? cli_ok : cli_internal;
    }
    catch (const input_error & e) {
        err << "error: " << e.what() << "\n";
        return cli_input;
    }
    catch (const contract_error & e) {
        err << "internal error: " << e.what() << "\n";
        return cli_internal;
    }
    return cli_ok;
}

} // namespace illusolve
