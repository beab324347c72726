#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "illusolve/errors.hpp"
#include "illusolve/instance.hpp"

namespace illusolve {

namespace detail {

// Splits a line into whitespace-separated tokens.
inline std::vector<std::string> tokens_of(const std::string & line)
{
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t)
        out.push_back(t);
    return out;
}

inline long long parse_int(const std::string & tok, int line_no, const char * what)
{
    size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &pos);
    }
    catch (const std::exception &) {
        throw parse_error(line_no, std::string("expected integer for ") + what + ", got '" + tok + "'");
    }
    if (pos != tok.size())
        throw parse_error(line_no, std::string("expected integer for ") + what + ", got '" + tok + "'");
    return v;
}

inline vertex_t parse_vertex(const std::string & tok, int line_no, long long n)
{
    long long v = parse_int(tok, line_no, "vertex id");
    if (v < 1 || v > n)
        throw parse_error(line_no, "vertex id " + tok + " out of range 1.." + std::to_string(n));
    return static_cast<vertex_t>(v - 1);
}

} // namespace detail

// Line-oriented instance text. 1-indexed vertices. Lines:
//   c <comment>
//   p ei <n> <m>        (or: p tvd <n> <m>)
//   l <v> <0|1>         (labeled instances: one per vertex)
//   k <v> <demand>      (demand instances: one per vertex)
//   e <u> <v>
template <bool Tvd>
struct parsed_graph_text {
    int n = 0;
    std::vector<std::pair<vertex_t, vertex_t>> edges;
    std::vector<int> values; // labels or demands
};

template <bool Tvd>
inline parsed_graph_text<Tvd> parse_graph_text(std::istream & in)
{
    const char * kind = Tvd ? "tvd" : "ei";
    const char value_directive = Tvd ? 'k' : 'l';
    parsed_graph_text<Tvd> out;
    bool have_header = false;
    long long n = 0, m = 0;
    std::vector<char> have_value;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = detail::tokens_of(line);
        if (toks.empty() || toks[0] == "c")
            continue;
        if (toks[0] == "p") {
            if (have_header)
                throw parse_error(line_no, "duplicate problem line");
            if (toks.size() != 4 || toks[1] != kind)
                throw parse_error(line_no, std::string("malformed problem line, expected 'p ") +
                                               kind + " <n> <m>'");
            n = detail::parse_int(toks[2], line_no, "vertex count");
            m = detail::parse_int(toks[3], line_no, "edge count");
            if (n < 0 || m < 0)
                throw parse_error(line_no, "vertex and edge counts must be nonnegative");
            have_header = true;
            out.n = static_cast<int>(n);
            out.values.assign(out.n, 0);
            have_value.assign(out.n, 0);
            continue;
        }
        if (!have_header)
            throw parse_error(line_no, "expected problem line before '" + toks[0] + "'");
        if (toks[0].size() == 1 && toks[0][0] == value_directive) {
            if (toks.size() != 3)
                throw parse_error(line_no, std::string("malformed '") + value_directive +
                                               "' line, expected 2 fields");
            vertex_t v = detail::parse_vertex(toks[1], line_no, n);
            long long val = detail::parse_int(toks[2], line_no, Tvd ? "demand" : "label");
            if (!Tvd && val != 0 && val != 1)
                throw parse_error(line_no, "label must be 0 or 1");
            if (Tvd && val < 0)
                throw parse_error(line_no, "demand must be nonnegative");
            if (have_value[v])
                throw parse_error(line_no, "duplicate value for vertex " + toks[1]);
            have_value[v] = 1;
            out.values[v] = static_cast<int>(val);
            continue;
        }
        if (toks[0] == "e") {
            if (toks.size() != 3)
                throw parse_error(line_no, "malformed 'e' line, expected 2 fields");
            vertex_t u = detail::parse_vertex(toks[1], line_no, n);
            vertex_t v = detail::parse_vertex(toks[2], line_no, n);
            if (u == v)
                throw parse_error(line_no, "self loop at vertex " + toks[1]);
            out.edges.push_back({u, v});
            continue;
        }
        throw parse_error(line_no, "unknown directive '" + toks[0] + "'");
    }
    if (!have_header)
        throw parse_error(line_no == 0 ? 1 : line_no, "missing problem line");
    if (static_cast<long long>(out.edges.size()) != m)
        throw parse_error(line_no, "edge count mismatch: header says " + std::to_string(m) +
                                       ", found " + std::to_string(out.edges.size()));
    for (vertex_t v = 0; v < out.n; ++v)
        if (!have_value[v])
            throw parse_error(line_no, std::string("missing ") + (Tvd ? "demand" : "label") +
                                           " for vertex " + std::to_string(v + 1));
    return out;
}

inline ei_instance parse_ei(std::istream & in)
{
    auto p = parse_graph_text<false>(in);
    ei_instance inst;
    inst.g = graph(p.n, std::move(p.edges)); // throws input_error on duplicates
    inst.label.assign(p.values.begin(), p.values.end());
    inst.validate();
    return inst;
}

inline ei_instance parse_ei_string(const std::string & text)
{
    std::istringstream ss(text);
    return parse_ei(ss);
}

inline tvd_instance parse_tvd(std::istream & in)
{
    auto p = parse_graph_text<true>(in);
    tvd_instance inst;
    inst.g = graph(p.n, std::move(p.edges));
    inst.k = std::move(p.values);
    inst.validate();
    return inst;
}

inline tvd_instance parse_tvd_string(const std::string & text)
{
    std::istringstream ss(text);
    return parse_tvd(ss);
}

inline void serialize_ei(const ei_instance & inst, std::ostream & out)
{
    out << "p ei " << inst.g.n << " " << inst.g.m() << "\n";
    for (vertex_t v = 0; v < inst.g.n; ++v)
        out << "l " << (v + 1) << " " << int(inst.label[v]) << "\n";
    for (auto [u, v] : inst.g.edges)
        out << "e " << (u + 1) << " " << (v + 1) << "\n";
}

inline std::string serialize_ei_string(const ei_instance & inst)
{
    std::ostringstream ss;
    serialize_ei(inst, ss);
    return ss.str();
}

inline void serialize_tvd(const tvd_instance & inst, std::ostream & out)
{
    out << "p tvd " << inst.g.n << " " << inst.g.m() << "\n";
    for (vertex_t v = 0; v < inst.g.n; ++v)
        out << "k " << (v + 1) << " " << inst.k[v] << "\n";
    for (auto [u, v] : inst.g.edges)
        out << "e " << (u + 1) << " " << (v + 1) << "\n";
}

inline std::string serialize_tvd_string(const tvd_instance & inst)
{
    std::ostringstream ss;
    serialize_tvd(inst, ss);
    return ss.str();
}

// Solution JSON: {"cost", "flipped" (1-indexed), "solver", "feasible", "time_ms"}.
inline nlohmann::json solution_to_json(const solution & sol)
{
    nlohmann::json j;
    j["cost"] = sol.cost;
    auto arr = nlohmann::json::array();
    for (vertex_t v : sol.flipped)
        arr.push_back(v + 1);
    j["flipped"] = arr;
    j["solver"] = sol.solver;
    j["feasible"] = sol.feasible;
    j["time_ms"] = sol.time_ms;
    return j;
}

inline solution solution_from_json(const nlohmann::json & j, int n)
{
    solution sol;
    try {
        if (!j.at("flipped").is_array())
            throw input_error("malformed solution JSON: 'flipped' must be an array");
        for (auto & x : j.at("flipped")) {
            long long v = x.get<long long>();
            if (v < 1 || v > n)
                throw input_error("flipped vertex id " + std::to_string(v) +
                                  " out of range 1.." + std::to_string(n));
            sol.flipped.push_back(static_cast<vertex_t>(v - 1));
        }
        sol.cost = j.value("cost", static_cast<int>(sol.flipped.size()));
        sol.solver = j.value("solver", std::string());
        sol.feasible = j.value("feasible", false);
        sol.time_ms = j.value("time_ms", 0.0);
    }
    catch (const nlohmann::json::exception & e) {
        throw input_error(std::string("malformed solution JSON: ") + e.what());
    }
    std::sort(sol.flipped.begin(), sol.flipped.end());
    return sol;
}

inline solution parse_solution_json(std::istream & in, int n)
{
    nlohmann::json j;
    try {
        in >> j;
    }
    catch (const nlohmann::json::exception & e) {
        throw input_error(std::string("malformed solution JSON: ") + e.what());
    }
    return solution_from_json(j, n);
}

// Subset file: one 1-indexed vertex per line; 'c' comments and blanks allowed.
inline subset_spec parse_subset(std::istream & in, int n)
{
    std::vector<vertex_t> verts;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = detail::tokens_of(line);
        if (toks.empty() || toks[0] == "c")
            continue;
        if (toks.size() != 1)
            throw parse_error(line_no, "expected a single vertex id per line");
        verts.push_back(detail::parse_vertex(toks[0], line_no, n));
    }
    return subset_spec::of(n, verts);
}

// Layer file: "<vertex> <layer>" per line, every vertex assigned exactly once.
inline std::vector<int> parse_layers(std::istream & in, int n)
{
    std::vector<int> layer(n, -1);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = detail::tokens_of(line);
        if (toks.empty() || toks[0] == "c")
            continue;
        if (toks.size() != 2)
            throw parse_error(line_no, "expected '<vertex> <layer>'");
        vertex_t v = detail::parse_vertex(toks[0], line_no, n);
        long long l = detail::parse_int(toks[1], line_no, "layer");
        if (l < 0)
            throw parse_error(line_no, "layers must be nonnegative");
        if (layer[v] != -1)
            throw parse_error(line_no, "duplicate layer for vertex " + toks[0]);
        layer[v] = static_cast<int>(l);
    }
    for (vertex_t v = 0; v < n; ++v)
        if (layer[v] == -1)
            throw input_error("missing layer for vertex " + std::to_string(v + 1));
    return layer;
}

} // namespace illusolve
