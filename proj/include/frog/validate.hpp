#pragma once

#include <deque>
#include <string>
#include <vector>

#include "frog/core.hpp"

namespace frog {

struct ValidationReport {
    std::vector<std::string> problems;

    bool ok() const { return problems.empty(); }
    void add(std::string p) { problems.push_back(std::move(p)); }

    std::string joined() const {
        std::string s;
        for (const auto& p : problems) {
            if (!s.empty()) s += "; ";
            s += p;
        }
        return s;
    }
};

struct ValidationOptions {
    bool allow_self_loops = false;
};

namespace detail {

// Vertices reachable from `from` over usable edges.
inline std::vector<char> reachable_from(const Instance& inst, int from) {
    std::vector<char> seen(static_cast<std::size_t>(std::max(inst.vertex_count, 0)), 0);
    if (!inst.vertex_ok(from)) return seen;
    std::deque<int> work{from};
    seen[static_cast<std::size_t>(from)] = 1;
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        for (int e : inst.out_edges[static_cast<std::size_t>(v)]) {
            int h = inst.edges[static_cast<std::size_t>(e)].head;
            if (!seen[static_cast<std::size_t>(h)]) {
                seen[static_cast<std::size_t>(h)] = 1;
                work.push_back(h);
            }
        }
    }
    return seen;
}

}  // namespace detail

inline ValidationReport validate_instance(const Instance& inst, const ValidationOptions& opt = {}) {
    ValidationReport rep;
    if (inst.vertex_count < 0) rep.add("vertex count is negative");

    for (std::size_t i = 0; i < inst.edges.size(); ++i) {
        const Edge& e = inst.edges[i];
        std::string tag = "edge " + std::to_string(e.id);
        if (e.id != static_cast<int>(i)) rep.add(tag + ": id not dense at position " + std::to_string(i));
        if (!inst.vertex_ok(e.tail)) rep.add(tag + ": dangling vertex reference (tail " + std::to_string(e.tail) + ")");
        if (!inst.vertex_ok(e.head)) rep.add(tag + ": dangling vertex reference (head " + std::to_string(e.head) + ")");
        if (e.capacity < 1) rep.add(tag + ": capacity must be >= 1");
        if (e.delay < 0) rep.add(tag + ": delay must be >= 0");
        if (e.tail == e.head && !opt.allow_self_loops) rep.add(tag + ": self-loop rejected");
    }

    if (inst.priority.rank.size() != inst.agents.size()) {
        rep.add("priority order does not cover all agents");
    } else {
        std::vector<char> seen(inst.agents.size(), 0);
        for (std::size_t a = 0; a < inst.priority.rank.size(); ++a) {
            int r = inst.priority.rank[a];
            if (r < 0 || r >= static_cast<int>(seen.size()) || seen[static_cast<std::size_t>(r)]) {
                rep.add("priority order is not a bijection over agents");
                break;
            }
            seen[static_cast<std::size_t>(r)] = 1;
        }
    }

    for (std::size_t i = 0; i < inst.agents.size(); ++i) {
        const Agent& a = inst.agents[i];
        std::string tag = "agent " + std::to_string(a.id);
        if (a.id != static_cast<int>(i)) rep.add(tag + ": id not dense at position " + std::to_string(i));
        bool src_ok = inst.vertex_ok(a.source);
        bool snk_ok = inst.vertex_ok(a.sink);
        if (!src_ok) rep.add(tag + ": dangling vertex reference (source)");
        if (!snk_ok) rep.add(tag + ": dangling vertex reference (sink)");
        if (a.release_time < 0) rep.add(tag + ": release_time must be >= 0");
        if (src_ok && snk_ok) {
            auto seen = detail::reachable_from(inst, a.source);
            if (!seen[static_cast<std::size_t>(a.sink)]) rep.add(tag + ": unreachable sink");
        }
    }
    return rep;
}

inline ValidationReport validate_path(const Instance& inst, const Path& path) {
    ValidationReport rep;
    if (!inst.agent_ok(path.agent)) {
        rep.add("path: unknown agent " + std::to_string(path.agent));
        return rep;
    }
    const Agent& a = inst.agents[static_cast<std::size_t>(path.agent)];
    std::string tag = "path of agent " + std::to_string(path.agent);

    if (path.edges.empty()) {
        if (a.source != a.sink) rep.add(tag + ": does not reach sink (empty path, source != sink)");
        return rep;
    }

    int at = a.source;
    std::vector<char> visited(static_cast<std::size_t>(std::max(inst.vertex_count, 0)), 0);
    if (inst.vertex_ok(at)) visited[static_cast<std::size_t>(at)] = 1;
    for (std::size_t k = 0; k < path.edges.size(); ++k) {
        int eid = path.edges[k];
        if (!inst.edge_ok(eid)) {
            rep.add(tag + ": unknown edge " + std::to_string(eid));
            return rep;
        }
        const Edge& e = inst.edges[static_cast<std::size_t>(eid)];
        if (e.tail != at) {
            rep.add(tag + ": edge " + std::to_string(eid) + " does not continue from vertex " + std::to_string(at));
            return rep;
        }
        at = e.head;
        if (inst.vertex_ok(at)) {
            if (visited[static_cast<std::size_t>(at)]) rep.add(tag + ": not simple (revisits vertex " + std::to_string(at) + ")");
            visited[static_cast<std::size_t>(at)] = 1;
        }
    }
    if (at != a.sink) rep.add(tag + ": does not reach sink");
    return rep;
}

// Validates every present path; a complete profile additionally has no holes.
inline ValidationReport validate_profile(const Instance& inst, const Profile& profile,
                                         bool require_complete = true) {
    ValidationReport rep;
    if (profile.paths.size() != inst.agents.size()) {
        rep.add("profile: expected " + std::to_string(inst.agents.size()) + " path slots, got " +
                std::to_string(profile.paths.size()));
        return rep;
    }
    for (std::size_t i = 0; i < profile.paths.size(); ++i) {
        const auto& p = profile.paths[i];
        if (!p) {
            if (require_complete) rep.add("profile: missing path for agent " + std::to_string(i));
            continue;
        }
        if (p->agent != static_cast<int>(i)) {
            rep.add("profile: slot " + std::to_string(i) + " holds path of agent " + std::to_string(p->agent));
            continue;
        }
        auto sub = validate_path(inst, *p);
        for (auto& s : sub.problems) rep.add(std::move(s));
    }
    if (require_complete && profile.hole_count() > 1)
        rep.add("profile: more than one hole");
    return rep;
}

}  // namespace frog
