#pragma once

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "frog/core.hpp"
#include "frog/validate.hpp"

// Canonical line-oriented text formats. Serialization is byte-deterministic:
// fixed key order, dense ascending ids, "\n" line endings, no trailing spaces.
//
//   frog-1
//   vertices <n>
//   edges <m>
//   edge id=<i> tail=<v> head=<v> capacity=<c> delay=<d>      (m lines)
//   agents <k>
//   agent id=<i> source=<v> sink=<v> release_time=<t>         (k lines)
//   priority <a0> <a1> ...                                    (highest first)
//
//   frog-profile-1
//   paths <k>
//   path agent=<i> edges=<e0,e1,...>        (missing agents are profile holes)
//
//   ugraph-1
//   vertices <n>
//   edges <m>
//   pair <a> <b>                                              (m lines)

namespace frog {

namespace detail {

struct LineReader {
    std::string_view text;
    std::size_t pos = 0;
    int line_no = 0;

    bool next(std::string_view& line) {
        if (pos >= text.size()) return false;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        ++line_no;
        return true;
    }

    std::string_view expect_line(const char* what) {
        std::string_view line;
        while (next(line)) {
            if (!line.empty()) return line;
        }
        throw FormatError(std::string("unexpected end of document, expected ") + what);
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw FormatError("line " + std::to_string(line_no) + ": " + msg);
    }
};

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::int64_t parse_int(LineReader& r, std::string_view tok, const char* field) {
    std::int64_t v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        r.fail(std::string("field '") + field + "': not an integer: '" + std::string(tok) + "'");
    return v;
}

// key=value token, key checked exactly; unknown fields are rejected by callers
// via positional matching.
inline std::int64_t parse_kv(LineReader& r, std::string_view tok, const char* key) {
    std::size_t eq = tok.find('=');
    if (eq == std::string_view::npos) r.fail("expected '" + std::string(key) + "=<int>', got '" + std::string(tok) + "'");
    if (tok.substr(0, eq) != key) r.fail("expected field '" + std::string(key) + "', got '" + std::string(tok.substr(0, eq)) + "'");
    return parse_int(r, tok.substr(eq + 1), key);
}

inline std::vector<int> parse_id_list(LineReader& r, std::string_view csv, const char* field) {
    std::vector<int> ids;
    if (csv.empty()) return ids;
    std::size_t i = 0;
    while (i <= csv.size()) {
        std::size_t j = csv.find(',', i);
        if (j == std::string_view::npos) j = csv.size();
        ids.push_back(static_cast<int>(parse_int(r, csv.substr(i, j - i), field)));
        if (j == csv.size()) break;
        i = j + 1;
    }
    return ids;
}

}  // namespace detail

inline constexpr std::string_view kInstanceHeader = "frog-1";
inline constexpr std::string_view kProfileHeader = "frog-profile-1";
inline constexpr std::string_view kUGraphHeader = "ugraph-1";
inline constexpr std::string_view kResultHeader = "frog-result-1";

inline Instance parse_instance(std::string_view text, const ValidationOptions& opt = {}) {
    using namespace detail;
    LineReader r{text};

    if (r.expect_line("header") != kInstanceHeader) r.fail("expected header 'frog-1'");

    auto vline = split_ws(r.expect_line("vertices"));
    if (vline.size() != 2 || vline[0] != "vertices") r.fail("expected 'vertices <n>'");
    Instance inst;
    inst.vertex_count = static_cast<int>(parse_int(r, vline[1], "vertices"));

    auto eline = split_ws(r.expect_line("edges"));
    if (eline.size() != 2 || eline[0] != "edges") r.fail("expected 'edges <m>'");
    auto edge_count = parse_int(r, eline[1], "edges");
    if (edge_count < 0) r.fail("edge count is negative");

    for (std::int64_t i = 0; i < edge_count; ++i) {
        auto toks = split_ws(r.expect_line("edge record"));
        if (toks.size() != 6 || toks[0] != "edge") r.fail("expected 'edge id=.. tail=.. head=.. capacity=.. delay=..'");
        Edge e;
        e.id = static_cast<int>(parse_kv(r, toks[1], "id"));
        e.tail = static_cast<int>(parse_kv(r, toks[2], "tail"));
        e.head = static_cast<int>(parse_kv(r, toks[3], "head"));
        e.capacity = static_cast<int>(parse_kv(r, toks[4], "capacity"));
        e.delay = parse_kv(r, toks[5], "delay");
        if (e.id != static_cast<int>(i)) r.fail("edge ids must be dense and ascending");
        inst.edges.push_back(e);
    }

    auto aline = split_ws(r.expect_line("agents"));
    if (aline.size() != 2 || aline[0] != "agents") r.fail("expected 'agents <n>'");
    auto agent_count = parse_int(r, aline[1], "agents");
    if (agent_count < 0) r.fail("agent count is negative");

    for (std::int64_t i = 0; i < agent_count; ++i) {
        auto toks = split_ws(r.expect_line("agent record"));
        if (toks.size() != 5 || toks[0] != "agent") r.fail("expected 'agent id=.. source=.. sink=.. release_time=..'");
        Agent a;
        a.id = static_cast<int>(parse_kv(r, toks[1], "id"));
        a.source = static_cast<int>(parse_kv(r, toks[2], "source"));
        a.sink = static_cast<int>(parse_kv(r, toks[3], "sink"));
        a.release_time = parse_kv(r, toks[4], "release_time");
        if (a.id != static_cast<int>(i)) r.fail("agent ids must be dense and ascending");
        inst.agents.push_back(a);
    }

    auto ptoks = split_ws(r.expect_line("priority"));
    if (ptoks.empty() || ptoks[0] != "priority") r.fail("expected 'priority <ids...>'");
    if (static_cast<std::int64_t>(ptoks.size()) - 1 != agent_count) r.fail("priority list must name every agent once");
    std::vector<int> order;
    for (std::size_t k = 1; k < ptoks.size(); ++k)
        order.push_back(static_cast<int>(parse_int(r, ptoks[k], "priority")));

    std::string_view trailing;
    while (r.next(trailing)) {
        if (!trailing.empty()) r.fail("unexpected trailing content: '" + std::string(trailing) + "'");
    }

    try {
        inst.priority = PriorityOrder::from_list(order);
    } catch (const std::invalid_argument& e) {
        r.fail(e.what());
    }
    finalize(inst);

    auto rep = validate_instance(inst, opt);
    if (!rep.ok()) throw FormatError("invalid instance: " + rep.joined());
    return inst;
}

inline std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << kInstanceHeader << "\n";
    out << "vertices " << inst.vertex_count << "\n";
    out << "edges " << inst.edges.size() << "\n";
    for (const Edge& e : inst.edges)
        out << "edge id=" << e.id << " tail=" << e.tail << " head=" << e.head
            << " capacity=" << e.capacity << " delay=" << e.delay << "\n";
    out << "agents " << inst.agents.size() << "\n";
    for (const Agent& a : inst.agents)
        out << "agent id=" << a.id << " source=" << a.source << " sink=" << a.sink
            << " release_time=" << a.release_time << "\n";
    out << "priority";
    for (int a : inst.priority.to_list()) out << " " << a;
    out << "\n";
    return out.str();
}

inline Profile parse_profile(std::string_view text, const Instance& inst) {
    using namespace detail;
    LineReader r{text};
    if (r.expect_line("header") != kProfileHeader) r.fail("expected header 'frog-profile-1'");

    auto cline = split_ws(r.expect_line("paths"));
    if (cline.size() != 2 || cline[0] != "paths") r.fail("expected 'paths <k>'");
    auto count = parse_int(r, cline[1], "paths");

    Profile profile = Profile::empty(inst.num_agents());
    for (std::int64_t i = 0; i < count; ++i) {
        auto toks = split_ws(r.expect_line("path record"));
        if (toks.size() != 3 || toks[0] != "path") r.fail("expected 'path agent=<i> edges=<e0,e1,...>'");
        Path p;
        p.agent = static_cast<int>(parse_kv(r, toks[1], "agent"));
        std::string_view etok = toks[2];
        std::size_t eq = etok.find('=');
        if (eq == std::string_view::npos || etok.substr(0, eq) != "edges") r.fail("expected field 'edges'");
        p.edges = parse_id_list(r, etok.substr(eq + 1), "edges");
        if (!inst.agent_ok(p.agent)) r.fail("path names unknown agent " + std::to_string(p.agent));
        if (profile.paths[static_cast<std::size_t>(p.agent)]) r.fail("duplicate path for agent " + std::to_string(p.agent));
        profile.paths[static_cast<std::size_t>(p.agent)] = std::move(p);
    }

    std::string_view trailing;
    while (r.next(trailing)) {
        if (!trailing.empty()) r.fail("unexpected trailing content: '" + std::string(trailing) + "'");
    }
    return profile;
}

inline std::string serialize_profile(const Profile& profile) {
    std::ostringstream out;
    out << kProfileHeader << "\n";
    int present = 0;
    for (const auto& p : profile.paths)
        if (p) ++present;
    out << "paths " << present << "\n";
    for (const auto& p : profile.paths) {
        if (!p) continue;
        out << "path agent=" << p->agent << " edges=";
        for (std::size_t k = 0; k < p->edges.size(); ++k) {
            if (k) out << ",";
            out << p->edges[k];
        }
        out << "\n";
    }
    return out.str();
}

struct UndirectedGraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;  // unordered pairs, stored (min,max)

    int degree(int v) const {
        int d = 0;
        for (auto& [a, b] : edges)
            if (a == v || b == v) ++d;
        return d;
    }

    int max_degree() const {
        int m = 0;
        for (int v = 0; v < vertex_count; ++v) m = std::max(m, degree(v));
        return m;
    }
};

inline UndirectedGraph parse_ugraph(std::string_view text) {
    using namespace detail;
    LineReader r{text};
    if (r.expect_line("header") != kUGraphHeader) r.fail("expected header 'ugraph-1'");

    auto vline = split_ws(r.expect_line("vertices"));
    if (vline.size() != 2 || vline[0] != "vertices") r.fail("expected 'vertices <n>'");
    UndirectedGraph g;
    g.vertex_count = static_cast<int>(parse_int(r, vline[1], "vertices"));

    auto eline = split_ws(r.expect_line("edges"));
    if (eline.size() != 2 || eline[0] != "edges") r.fail("expected 'edges <m>'");
    auto m = parse_int(r, eline[1], "edges");

    for (std::int64_t i = 0; i < m; ++i) {
        auto toks = split_ws(r.expect_line("pair"));
        if (toks.size() != 3 || toks[0] != "pair") r.fail("expected 'pair <a> <b>'");
        int a = static_cast<int>(parse_int(r, toks[1], "pair"));
        int b = static_cast<int>(parse_int(r, toks[2], "pair"));
        if (a < 0 || b < 0 || a >= g.vertex_count || b >= g.vertex_count) r.fail("pair vertex out of range");
        if (a == b) r.fail("self-loop pair rejected");
        if (a > b) std::swap(a, b);
        for (auto& [x, y] : g.edges)
            if (x == a && y == b) r.fail("duplicate pair");
        g.edges.emplace_back(a, b);
    }
    std::string_view trailing;
    while (r.next(trailing)) {
        if (!trailing.empty()) r.fail("unexpected trailing content: '" + std::string(trailing) + "'");
    }
    return g;
}

inline std::string serialize_ugraph(const UndirectedGraph& g) {
    std::ostringstream out;
    out << kUGraphHeader << "\n";
    out << "vertices " << g.vertex_count << "\n";
    out << "edges " << g.edges.size() << "\n";
    for (auto& [a, b] : g.edges) out << "pair " << a << " " << b << "\n";
    return out.str();
}

// Instance export in DOT for external visualization.
inline std::string to_dot(const Instance& inst) {
    std::ostringstream out;
    out << "digraph frog {\n";
    out << "  rankdir=LR;\n";
    for (int v = 0; v < inst.vertex_count; ++v) out << "  v" << v << " [shape=circle];\n";
    for (const Edge& e : inst.edges)
        out << "  v" << e.tail << " -> v" << e.head << " [label=\"e" << e.id << " c=" << e.capacity
            << " d=" << e.delay << "\"];\n";
    for (const Agent& a : inst.agents)
        out << "  // agent " << a.id << ": " << a.source << " -> " << a.sink << " @" << a.release_time << "\n";
    out << "}\n";
    return out.str();
}

}  // namespace frog
