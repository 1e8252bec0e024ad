#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core data model: instances of the FIFO routing game over discrete time.
// All types are plain values, immutable by convention after finalize();
// distinct simulations may share one Instance across threads.

namespace frog {

using Time = std::int64_t;

struct Edge {
    int id = 0;
    int tail = 0;
    int head = 0;
    int capacity = 1;   // agents per time-step popped from the queue head
    Time delay = 0;     // fixed transit delay after leaving the queue
};

struct Agent {
    int id = 0;
    int source = 0;
    int sink = 0;
    Time release_time = 0;  // step at which the agent queues on its first edge
};

// Global strict tie-break order. rank[agent] = position, lower pops first.
struct PriorityOrder {
    std::vector<int> rank;

    static PriorityOrder from_list(const std::vector<int>& highest_to_lowest) {
        PriorityOrder p;
        p.rank.assign(highest_to_lowest.size(), -1);
        for (std::size_t pos = 0; pos < highest_to_lowest.size(); ++pos) {
            int a = highest_to_lowest[pos];
            if (a < 0 || a >= static_cast<int>(p.rank.size()) || p.rank[a] != -1)
                throw std::invalid_argument("priority list is not a permutation of agent ids");
            p.rank[a] = static_cast<int>(pos);
        }
        return p;
    }

    std::vector<int> to_list() const {
        std::vector<int> order(rank.size(), -1);
        for (std::size_t a = 0; a < rank.size(); ++a) {
            if (rank[a] < 0 || rank[a] >= static_cast<int>(order.size())) return {};
            order[rank[a]] = static_cast<int>(a);
        }
        return order;
    }

    bool operator==(const PriorityOrder&) const = default;
};

struct Instance {
    int vertex_count = 0;
    std::vector<Edge> edges;
    std::vector<Agent> agents;
    PriorityOrder priority;
    // Derived, rebuilt by finalize(): out_edges[v] lists edge ids sorted ascending.
    std::vector<std::vector<int>> out_edges;

    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_agents() const { return static_cast<int>(agents.size()); }

    bool vertex_ok(int v) const { return v >= 0 && v < vertex_count; }
    bool edge_ok(int e) const { return e >= 0 && e < num_edges(); }
    bool agent_ok(int a) const { return a >= 0 && a < num_agents(); }

    bool operator==(const Instance& o) const {
        auto edge_eq = [](const Edge& x, const Edge& y) {
            return x.id == y.id && x.tail == y.tail && x.head == y.head &&
                   x.capacity == y.capacity && x.delay == y.delay;
        };
        auto agent_eq = [](const Agent& x, const Agent& y) {
            return x.id == y.id && x.source == y.source && x.sink == y.sink &&
                   x.release_time == y.release_time;
        };
        if (vertex_count != o.vertex_count || edges.size() != o.edges.size() ||
            agents.size() != o.agents.size() || !(priority == o.priority))
            return false;
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (!edge_eq(edges[i], o.edges[i])) return false;
        for (std::size_t i = 0; i < agents.size(); ++i)
            if (!agent_eq(agents[i], o.agents[i])) return false;
        return true;
    }
};

// Rebuilds adjacency. Tolerates dangling references (validation reports them);
// only structurally usable edges are indexed.
inline void finalize(Instance& inst) {
    inst.out_edges.assign(static_cast<std::size_t>(std::max(inst.vertex_count, 0)), {});
    for (const Edge& e : inst.edges) {
        if (e.tail >= 0 && e.tail < inst.vertex_count && e.head >= 0 && e.head < inst.vertex_count)
            inst.out_edges[static_cast<std::size_t>(e.tail)].push_back(e.id);
    }
}

inline Instance make_instance(int vertices, std::vector<Edge> edges, std::vector<Agent> agents,
                              const std::vector<int>& priority_highest_first) {
    Instance inst;
    inst.vertex_count = vertices;
    inst.edges = std::move(edges);
    inst.agents = std::move(agents);
    inst.priority = PriorityOrder::from_list(priority_highest_first);
    finalize(inst);
    return inst;
}

// A strategy: ordered edge ids from the agent's source to its sink.
// Empty is the one strategy of an agent with source == sink.
struct Path {
    int agent = 0;
    std::vector<int> edges;

    bool operator==(const Path&) const = default;
};

// One path per agent; at most one hole (std::nullopt) when standing in for an
// adversary profile with the deviating agent removed.
struct Profile {
    std::vector<std::optional<Path>> paths;

    static Profile empty(int n) {
        Profile p;
        p.paths.assign(static_cast<std::size_t>(n), std::nullopt);
        return p;
    }

    bool complete() const {
        for (const auto& p : paths)
            if (!p) return false;
        return true;
    }

    int hole_count() const {
        int h = 0;
        for (const auto& p : paths)
            if (!p) ++h;
        return h;
    }

    bool operator==(const Profile&) const = default;
};

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

struct SimulationError : std::runtime_error {
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

struct SearchError : std::runtime_error {
    explicit SearchError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace frog
