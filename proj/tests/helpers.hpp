#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "frog/core.hpp"
#include "frog/strategy.hpp"

// Shared test utilities: a deterministic RNG, a random-instance generator
// whose agents always have reachable sinks, and small independent oracles.

namespace frogtest {

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

// Vertices are chained by a random permutation backbone so that every agent
// sourced earlier in the chain reaches every later vertex; extra edges add
// parallel routes and joins.
inline frog::Instance random_instance(Rng& rng, int max_vertices, int max_agents, int max_extra_edges,
                                      frog::Time max_delay = 3, int max_capacity = 2,
                                      frog::Time max_release = 2) {
    int nv = 2 + rng.below(std::max(1, max_vertices - 1));
    std::vector<int> order(static_cast<std::size_t>(nv));
    std::iota(order.begin(), order.end(), 0);
    for (int i = nv - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)],
                                               order[static_cast<std::size_t>(rng.below(i + 1))]);
    std::vector<int> pos(static_cast<std::size_t>(nv));
    for (int i = 0; i < nv; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

    std::vector<frog::Edge> edges;
    auto add_edge = [&](int t, int h) {
        edges.push_back(frog::Edge{static_cast<int>(edges.size()), t, h,
                                   1 + rng.below(max_capacity),
                                   static_cast<frog::Time>(rng.below(static_cast<int>(max_delay) + 1))});
    };
    for (int i = 0; i + 1 < nv; ++i)
        add_edge(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)]);
    int extra = rng.below(max_extra_edges + 1);
    for (int k = 0; k < extra; ++k) {
        int a = rng.below(nv), b = rng.below(nv);
        if (pos[static_cast<std::size_t>(a)] < pos[static_cast<std::size_t>(b)]) add_edge(a, b);
    }

    int na = 1 + rng.below(max_agents);
    std::vector<frog::Agent> agents;
    for (int i = 0; i < na; ++i) {
        int s = rng.below(nv - 1);
        int t = s + 1 + rng.below(nv - s - 1);
        agents.push_back(frog::Agent{i, order[static_cast<std::size_t>(s)],
                                     order[static_cast<std::size_t>(t)],
                                     static_cast<frog::Time>(rng.below(static_cast<int>(max_release) + 1))});
    }
    std::vector<int> prio(static_cast<std::size_t>(na));
    std::iota(prio.begin(), prio.end(), 0);
    for (int i = na - 1; i > 0; --i) std::swap(prio[static_cast<std::size_t>(i)],
                                               prio[static_cast<std::size_t>(rng.below(i + 1))]);
    return frog::make_instance(nv, std::move(edges), std::move(agents), prio);
}

inline frog::Profile random_profile(Rng& rng, const frog::Instance& inst, std::int64_t cap = 4096) {
    frog::Profile p = frog::Profile::empty(inst.num_agents());
    for (int i = 0; i < inst.num_agents(); ++i) {
        frog::PathSet set = frog::enumerate_simple_paths(inst, i, cap);
        p.paths[static_cast<std::size_t>(i)] =
            set.paths[static_cast<std::size_t>(rng.below(static_cast<int>(set.paths.size())))];
    }
    return p;
}

// Independent path counter: fresh adjacency, no sharing with the enumerator.
inline std::int64_t naive_simple_path_count(const frog::Instance& inst, int agent) {
    const frog::Agent& a = inst.agents[static_cast<std::size_t>(agent)];
    if (a.source == a.sink) return 1;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(inst.vertex_count));
    for (const frog::Edge& e : inst.edges)
        if (e.tail != e.head) adj[static_cast<std::size_t>(e.tail)].push_back(e.head);
    std::vector<char> seen(static_cast<std::size_t>(inst.vertex_count), 0);
    std::int64_t count = 0;
    auto rec = [&](auto&& self, int v) -> void {
        if (v == a.sink) {
            ++count;
            return;
        }
        seen[static_cast<std::size_t>(v)] = 1;
        for (int h : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(h)]) self(self, h);
        seen[static_cast<std::size_t>(v)] = 0;
    };
    rec(rec, a.source);
    return count;
}

// Free-flow distance by exhaustive path enumeration (oracle for Dijkstra).
inline std::optional<frog::Time> naive_free_flow(const frog::Instance& inst, int from, int to) {
    std::vector<char> seen(static_cast<std::size_t>(inst.vertex_count), 0);
    std::optional<frog::Time> best;
    auto rec = [&](auto&& self, int v, frog::Time acc) -> void {
        if (v == to) {
            if (!best || acc < *best) best = acc;
            return;
        }
        seen[static_cast<std::size_t>(v)] = 1;
        for (int e : inst.out_edges[static_cast<std::size_t>(v)]) {
            const frog::Edge& ed = inst.edges[static_cast<std::size_t>(e)];
            if (ed.head == v || seen[static_cast<std::size_t>(ed.head)]) continue;
            self(self, ed.head, acc + ed.delay);
        }
        seen[static_cast<std::size_t>(v)] = 0;
    };
    rec(rec, from, 0);
    return best;
}

}  // namespace frogtest
