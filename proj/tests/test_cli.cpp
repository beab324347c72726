#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <illusolve/cli.hpp>

using namespace illusolve;
namespace fs = std::filesystem;

namespace {

struct cli_result {
    int code = -1;
    std::string out;
    std::string err;
};

cli_result run(std::vector<std::string> args, const std::string & stdin_text = "")
{
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    cli_result r;
    r.code = run_cli(std::move(args), in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

const std::string kPath101 = "p ei 3 2\nl 1 1\nl 2 0\nl 3 1\ne 1 2\ne 2 3\n";

fs::path scratch_dir()
{
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "illusolve_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write_file(const std::string & name, const std::string & content)
{
    fs::path p = scratch_dir() / name;
    std::ofstream os(p);
    os << content;
    return p.string();
}

std::string slurp(const std::string & path)
{
    std::ifstream is(path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("help and usage errors")
{
    cli_result help = run({"--help"});
    CHECK(help.code == cli_ok);
    CHECK(help.out.find("solve") != std::string::npos);
    CHECK(help.out.find("bench") != std::string::npos);

    CHECK(run({}).code == cli_input);                          // a subcommand is required
    CHECK(run({"frobnicate"}).code == cli_input);              // unknown subcommand
    CHECK(run({"solve", "--wat"}).code == cli_input);          // unknown flag
    CHECK(run({"solve", "--algo", "magic"}).code == cli_input);// not in the member list
    CHECK(run({"verify"}).code == cli_input);                  // missing --solution
    CHECK(run({"reduce"}).code == cli_input);                  // missing --direction
    CHECK(run({"generate"}).code == cli_input);                // missing --kind
    cli_result r = run({"solve", "--wat"});
    CHECK(r.err.find("usage error:") != std::string::npos);
}

TEST_CASE("solve reads stdin and prints a solution")
{
    for (const char * algo : {"brute", "vc", "tw", "auto"}) {
        cli_result r = run({"solve", "--algo", algo, "--input", "-"}, kPath101);
        INFO("algo ", algo, " stderr: ", r.err);
        REQUIRE(r.code == cli_ok);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j.at("cost").get<int>() == 1);
        CHECK(j.at("feasible").get<bool>());
        CHECK(j.at("flipped").size() == 1);
        CHECK(j.at("time_ms").is_number());
    }
    cli_result tw = run({"solve", "--algo", "tw", "-i", "-"}, kPath101);
    auto jt = nlohmann::json::parse(tw.out);
    CHECK(jt.at("solver").get<std::string>() == "tw");
    CHECK(jt.at("peak_states").is_number());

    cli_result pt = run({"solve", "--algo", "ptas", "--epsilon", "2", "-i", "-"}, kPath101);
    REQUIRE(pt.code == cli_ok);
    auto jp = nlohmann::json::parse(pt.out);
    CHECK(jp.at("solver").get<std::string>() == "ptas");
    CHECK(jp.at("k").get<int>() == 2);
    CHECK(jp.at("chosen_shift").is_number());
    CHECK(jp.at("per_shift_costs").size() == 2);
    CHECK(jp.at("cost").get<int>() == 1); // single piece, solved exactly
}

TEST_CASE("solve writes to a file and honors input files")
{
    std::string in_path = write_file("inst.ei", kPath101);
    std::string out_path = (scratch_dir() / "sol.json").string();
    cli_result r = run({"solve", "--algo", "brute", "-i", in_path, "-o", out_path});
    REQUIRE(r.code == cli_ok);
    CHECK(r.out.empty());
    auto j = nlohmann::json::parse(slurp(out_path));
    CHECK(j.at("cost").get<int>() == 1);

    CHECK(run({"solve", "-i", (scratch_dir() / "missing.ei").string()}).code == cli_input);
    cli_result bad = run({"solve", "-i", "-"}, "p ei oops\n");
    CHECK(bad.code == cli_input);
    CHECK(bad.err.find("line 1") != std::string::npos);
}

TEST_CASE("solve option gating")
{
    // only the listed vertices must end up free of illusion
    std::string sub_path = write_file("subset.txt", "2\n");
    cli_result restricted =
        run({"solve", "--algo", "brute", "--subset", sub_path, "-i", "-"}, kPath101);
    REQUIRE(restricted.code == cli_ok);
    CHECK(nlohmann::json::parse(restricted.out).at("cost").get<int>() == 1);
    std::string easy = write_file("subset_easy.txt", "1\n");
    cli_result unconstrained =
        run({"solve", "--algo", "brute", "--subset", easy, "-i", "-"}, kPath101);
    CHECK(nlohmann::json::parse(unconstrained.out).at("cost").get<int>() == 0);

    CHECK(run({"solve", "--algo", "vc", "--subset", sub_path, "-i", "-"}, kPath101).code ==
          cli_input);
    CHECK(run({"solve", "--algo", "ptas", "--subset", sub_path, "-i", "-"}, kPath101).code ==
          cli_input);
    cli_result auto_sub = run({"solve", "--algo", "auto", "--subset", sub_path, "-i", "-"}, kPath101);
    CHECK(auto_sub.code == cli_ok); // auto may restrict; it routes to the table solver

    std::string td_path = write_file("single.td", "s td 1 3 3\nb 1 1 2 3\n");
    cli_result with_td =
        run({"solve", "--algo", "tw", "--td", td_path, "-i", "-"}, kPath101);
    REQUIRE(with_td.code == cli_ok);
    CHECK(nlohmann::json::parse(with_td.out).at("cost").get<int>() == 1);
    CHECK(run({"solve", "--algo", "brute", "--td", td_path, "-i", "-"}, kPath101).code ==
          cli_input);

    std::string layer_path = write_file("layers.txt", "1 0\n2 1\n3 2\n");
    cli_result with_layers =
        run({"solve", "--algo", "ptas", "--layers", layer_path, "-i", "-"}, kPath101);
    CHECK(with_layers.code == cli_ok);
    cli_result with_roots = run({"solve", "--algo", "ptas", "--roots", "1", "-i", "-"}, kPath101);
    CHECK(with_roots.code == cli_ok);
    CHECK(run({"solve", "--algo", "ptas", "--layers", layer_path, "--roots", "1", "-i", "-"},
              kPath101)
              .code == cli_input);
    CHECK(run({"solve", "--algo", "tw", "--roots", "1", "-i", "-"}, kPath101).code == cli_input);

    // enumeration caps surface as input errors
    cli_result capped = run({"solve", "--algo", "brute", "--cap", "1", "-i", "-"}, kPath101);
    CHECK(capped.code == cli_input);
    CHECK(capped.err.find("error:") != std::string::npos);
}

TEST_CASE("verify reports feasibility and exit codes")
{
    std::string inst_path = write_file("verify.ei", kPath101);
    std::string good = write_file("good.json", R"({"cost":1,"flipped":[1]})");
    cli_result ok = run({"verify", "-i", inst_path, "-s", good});
    REQUIRE(ok.code == cli_ok);
    auto j = nlohmann::json::parse(ok.out);
    CHECK(j.at("feasible").get<bool>());
    CHECK(j.at("violating").empty());
    CHECK(j.at("cost").get<int>() == 1);

    std::string empty = write_file("empty.json", R"({"cost":0,"flipped":[]})");
    cli_result bad = run({"verify", "-i", inst_path, "-s", empty});
    CHECK(bad.code == cli_infeasible);
    auto jb = nlohmann::json::parse(bad.out);
    CHECK_FALSE(jb.at("feasible").get<bool>());
    CHECK(jb.at("violating") == nlohmann::json::array({2}));
    CHECK(bad.err.find("infeasible") != std::string::npos);

    // restricting the check to vertex 1 ignores the illusion at vertex 2
    std::string sub = write_file("verify_subset.txt", "1\n");
    cli_result subset = run({"verify", "-i", inst_path, "-s", empty, "--subset", sub});
    CHECK(subset.code == cli_ok);

    std::string out_of_range = write_file("oor.json", R"({"cost":1,"flipped":[9]})");
    CHECK(run({"verify", "-i", inst_path, "-s", out_of_range}).code == cli_input);
}

TEST_CASE("reduce translates between the two forms")
{
    cli_result fwd = run({"reduce", "--direction", "ei2tvd", "-i", "-"}, kPath101);
    REQUIRE(fwd.code == cli_ok);
    CHECK(fwd.out.rfind("p tvd", 0) == 0);
    {
        std::istringstream back(fwd.out);
        tvd_instance tvd = parse_tvd(back);
        CHECK(tvd.g.n == 4); // one pendant for the single 0-labeled vertex
        CHECK(tvd.k[1] == 1);
    }

    std::string map_path = (scratch_dir() / "map.json").string();
    cli_result with_map =
        run({"reduce", "--direction", "ei2tvd", "-i", "-", "--map", map_path}, kPath101);
    REQUIRE(with_map.code == cli_ok);
    auto jm = nlohmann::json::parse(slurp(map_path));
    CHECK(jm.at("direction").get<std::string>() == "ei2tvd");
    CHECK(jm.at("vertex_map").size() == 3);
    CHECK(jm.at("aux_owner").size() == 4); // one slot per produced vertex
    int owned = 0;
    for (const auto & o : jm.at("aux_owner"))
        if (!o.is_null())
            ++owned;
    CHECK(owned == static_cast<int>(jm.at("auxiliary").size()));

    const std::string tvd_text = "p tvd 2 1\nk 1 1\nk 2 0\ne 1 2\n";
    cli_result bwd = run({"reduce", "--direction", "tvd2ei", "-i", "-"}, tvd_text);
    REQUIRE(bwd.code == cli_ok);
    CHECK(bwd.out.rfind("p ei", 0) == 0);
    {
        std::istringstream back(bwd.out);
        ei_instance ei = parse_ei(back);
        CHECK_NOTHROW(ei.validate());
        CHECK(ei.strict_zero_majority());
    }

    CHECK(run({"reduce", "--direction", "ei2tvd", "-i", "-"}, "garbage\n").code == cli_input);
}

TEST_CASE("generate emits every kind")
{
    auto parse_out = [](const cli_result & r) {
        REQUIRE(r.code == cli_ok);
        std::istringstream is(r.out);
        return parse_ei(is);
    };

    CHECK(parse_out(run({"generate", "--kind", "chessboard", "--size", "1"})).g.n == 12);
    CHECK(parse_out(run({"generate", "--kind", "chessboard", "--size", "2"})).g.n == 28);

    cli_result r1 = run({"generate", "--kind", "random", "--n", "6", "--edge-prob", "0.5",
                         "--label-prob", "0.3", "--seed", "5"});
    cli_result r2 = run({"generate", "--kind", "random", "--n", "6", "--edge-prob", "0.5",
                         "--label-prob", "0.3", "--seed", "5"});
    CHECK(r1.out == r2.out);
    CHECK(parse_out(r1).g.n == 6);
    ei_instance zm = parse_out(run({"generate", "--kind", "random", "--n", "7", "--edge-prob",
                                    "0.4", "--label-prob", "0.6", "--seed", "9",
                                    "--zero-majority"}));
    CHECK(zm.strict_zero_majority());

    ei_instance grid = parse_out(run({"generate", "--kind", "grid", "--rows", "2", "--cols", "3",
                                      "--rule", "checkerboard"}));
    CHECK(grid.g.n == 6);
    CHECK(grid.label == labeling{1, 0, 1, 0, 1, 0});

    ei_instance tree = parse_out(run({"generate", "--kind", "tree", "--n", "7", "--seed", "3"}));
    CHECK(tree.g.n == 7);
    CHECK(tree.g.m() == 6);

    std::string sc = write_file("sys.sc", "p setcover 1 2 2\nm 1 1\nm 1 2\n");
    CHECK(parse_out(run({"generate", "--kind", "setcover", "--source", sc})).g.n == 6);

    std::string phi = write_file("phi.mcnf", "p mcnf 1 1\n+ 1\n");
    CHECK(parse_out(run({"generate", "--kind", "3sat", "--source", phi})).g.n == 5);

    std::string mmo = write_file("inst.mmo", "p mmo 2 1 1\nw 1 2 1\n");
    std::string td_out = (scratch_dir() / "mmo.td").string();
    cli_result mr = run({"generate", "--kind", "mmo", "--source", mmo, "--td-out", td_out});
    ei_instance mmo_inst = parse_out(mr);
    CHECK(mmo_inst.g.n == 16);
    {
        std::ifstream ts(td_out);
        tree_decomposition td = parse_td(ts, mmo_inst.g.n);
        CHECK(validate_decomposition(mmo_inst.g, td).ok);
    }
    CHECK(run({"generate", "--kind", "chessboard", "--size", "1", "--td-out", td_out}).code ==
          cli_input);

    std::string out_path = (scratch_dir() / "gen.ei").string();
    cli_result to_file =
        run({"generate", "--kind", "chessboard", "--size", "1", "-o", out_path});
    CHECK(to_file.code == cli_ok);
    CHECK(to_file.out.empty());
    CHECK(slurp(out_path).rfind("p ei 12", 0) == 0);
}

TEST_CASE("bench runs a corpus and cross-checks the exact solvers")
{
    fs::path corpus = scratch_dir() / "corpus";
    fs::create_directories(corpus);
    {
        std::ofstream a(corpus / "a.ei");
        a << kPath101;
        std::ofstream b(corpus / "b.ei");
        serialize_ei(gen_chessboard(1).inst, b);
    }
    std::string jsonl = (scratch_dir() / "bench.jsonl").string();
    cli_result r = run({"bench", "--corpus", corpus.string(), "--solvers", "brute,tw,ptas",
                        "--reps", "2", "-o", jsonl});
    REQUIRE(r.code == cli_ok);
    CHECK(r.err.find("bench: 2 instance(s)") != std::string::npos);
    CHECK(r.err.find("disagreements=0") != std::string::npos);

    std::istringstream lines(slurp(jsonl));
    std::string line;
    int records = 0;
    std::map<std::string, std::map<std::string, int>> costs;
    while (std::getline(lines, line)) {
        auto j = nlohmann::json::parse(line);
        ++records;
        CHECK(j.at("feasible").get<bool>());
        costs[j.at("instance").get<std::string>()][j.at("solver").get<std::string>()] =
            j.at("cost").get<int>();
        if (j.at("solver") == "ptas") {
            CHECK(j.at("k").get<int>() == 4);
            CHECK(j.at("ratio").is_number());
        }
    }
    CHECK(records == 6);
    CHECK(costs["a.ei"]["brute"] == 1);
    CHECK(costs["a.ei"]["tw"] == 1);
    CHECK(costs["b.ei"]["brute"] == 2);
    CHECK(costs["b.ei"]["tw"] == 2);

    CHECK(run({"bench", "--corpus", corpus.string(), "--solvers", "sorcery"}).code == cli_input);
    CHECK(run({"bench", "--corpus", (scratch_dir() / "nowhere").string()}).code == cli_input);
}
