#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "frog/core.hpp"
#include "frog/engine.hpp"

// Strategy sets and exact best responses. Best response is depth-first
// branch-and-bound over simple paths. Waits are nonnegative, so fixed-delay
// distance is an admissible completion bound; and an agent's arrival time
// along a prefix does not depend on how the path continues (events only reach
// forward in time), so one simulated candidate yields exact arrival times that
// bound every sibling sharing its prefix. No incremental replay is attempted:
// every candidate is costed by a full simulation of the completed profile.

namespace frog {

inline constexpr Time kUnreachable = std::numeric_limits<Time>::max() / 4;

// d_e-shortest distances from every vertex to `to` (reverse Dijkstra).
inline std::vector<Time> free_flow_to_sink(const Instance& inst, int to) {
    std::vector<std::vector<std::pair<int, Time>>> rin(static_cast<std::size_t>(inst.vertex_count));
    for (const Edge& e : inst.edges)
        if (inst.vertex_ok(e.head) && inst.vertex_ok(e.tail))
            rin[static_cast<std::size_t>(e.head)].emplace_back(e.tail, e.delay);
    std::vector<Time> dist(static_cast<std::size_t>(inst.vertex_count), kUnreachable);
    if (!inst.vertex_ok(to)) return dist;
    using Item = std::pair<Time, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(to)] = 0;
    pq.emplace(0, to);
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[static_cast<std::size_t>(v)]) continue;
        for (auto [u, w] : rin[static_cast<std::size_t>(v)]) {
            if (d + w < dist[static_cast<std::size_t>(u)]) {
                dist[static_cast<std::size_t>(u)] = d + w;
                pq.emplace(d + w, u);
            }
        }
    }
    return dist;
}

inline std::optional<Time> free_flow_distance(const Instance& inst, int from, int to) {
    if (!inst.vertex_ok(from) || !inst.vertex_ok(to)) return std::nullopt;
    Time d = free_flow_to_sink(inst, to)[static_cast<std::size_t>(from)];
    if (d >= kUnreachable) return std::nullopt;
    return d;
}

struct PathSet {
    int agent = 0;
    std::vector<Path> paths;
    bool truncated = false;
};

// Depth-first enumeration of simple source-to-sink paths, lexicographic by
// edge id. An agent with source == sink has exactly the empty path.
inline PathSet enumerate_simple_paths(const Instance& inst, int agent, std::int64_t cap) {
    if (cap < 1) throw SearchError("enumeration cap must be >= 1");
    const Agent& a = inst.agents[static_cast<std::size_t>(agent)];
    PathSet set;
    set.agent = agent;
    if (a.source == a.sink) {
        set.paths.push_back(Path{agent, {}});
        return set;
    }
    std::vector<char> visited(static_cast<std::size_t>(inst.vertex_count), 0);
    std::vector<int> stack;
    visited[static_cast<std::size_t>(a.source)] = 1;

    auto dfs = [&](auto&& self, int v) -> bool {
        for (int e : inst.out_edges[static_cast<std::size_t>(v)]) {
            int h = inst.edges[static_cast<std::size_t>(e)].head;
            if (h == v || visited[static_cast<std::size_t>(h)]) continue;
            stack.push_back(e);
            if (h == a.sink) {
                set.paths.push_back(Path{agent, stack});
                if (static_cast<std::int64_t>(set.paths.size()) >= cap) {
                    stack.pop_back();
                    return false;
                }
            } else {
                visited[static_cast<std::size_t>(h)] = 1;
                bool keep = self(self, h);
                visited[static_cast<std::size_t>(h)] = 0;
                stack.pop_back();
                if (!keep) return false;
                continue;
            }
            stack.pop_back();
        }
        return true;
    };
    set.truncated = !dfs(dfs, a.source);
    return set;
}

struct BestResponse {
    Path path;
    Time cost = 0;
    std::int64_t explored = 0;  // candidates costed by simulation
    std::int64_t pruned = 0;    // children cut by the admissible bound
};

struct BestResponseOptions {
    std::int64_t max_candidates = 1'000'000;
    // Stop as soon as the incumbent reaches this cost (decision-problem mode;
    // the returned path is then a witness, not necessarily the optimum).
    std::optional<Time> stop_at;
    // Debug cross-check: prefix arrival + free flow must never exceed the
    // candidate's final cost, or the pruning rule would be unsound.
    bool check_bound = false;
};

namespace brdetail {

struct CandidateEval {
    Time cost = kUnreachable;
    std::vector<Time> arrival;  // arrival[k]: time the agent reaches the head of edge k
    bool aborted = false;
    Time stuck_lb = -1;  // on abort: a lower bound on the next unrecorded arrival
};

// Adversary seed events, sorted by release so evaluations bounded by an abort
// time can skip agents that cannot act before it.
inline std::vector<detail::HeapEntry> adversary_seeds(const Instance& inst, const Profile& profile,
                                                      int agent) {
    std::vector<detail::HeapEntry> seeds;
    for (int i = 0; i < inst.num_agents(); ++i) {
        if (i == agent) continue;
        const Path& p = *profile.paths[static_cast<std::size_t>(i)];
        if (p.edges.empty()) continue;
        seeds.push_back({inst.agents[static_cast<std::size_t>(i)].release_time,
                         detail::HeapEntry::pack(0, inst.priority.rank[static_cast<std::size_t>(i)]),
                         i, p.edges.front(), 0});
    }
    std::sort(seeds.begin(), seeds.end(),
              [](const detail::HeapEntry& a, const detail::HeapEntry& b) { return a.time < b.time; });
    return seeds;
}

// Costs one candidate path by simulating the completed profile. Stops as soon
// as the deviating agent finishes, or once the clock proves its delay can no
// longer beat `abort_above`. Arrival times already observed stay exact.
inline CandidateEval eval_candidate(const Instance& inst, Profile& profile, int agent,
                                    const std::vector<int>& edges, Time abort_above,
                                    const std::vector<detail::HeapEntry>& seeds) {
    CandidateEval ev;
    ev.arrival.assign(edges.size(), kUnreachable);
    const Agent& me = inst.agents[static_cast<std::size_t>(agent)];
    if (edges.empty()) {
        ev.cost = 0;
        return ev;
    }
    profile.paths[static_cast<std::size_t>(agent)] = Path{agent, edges};

    // adversaries released at or after the abort clock can never move first
    std::vector<detail::HeapEntry> initial;
    if (abort_above < kUnreachable) {
        Time cutoff = me.release_time + abort_above;
        auto end = std::upper_bound(seeds.begin(), seeds.end(), cutoff,
                                    [](Time t, const detail::HeapEntry& e) { return t < e.time; });
        initial.assign(seeds.begin(), end);
    } else {
        initial = seeds;
    }
    initial.push_back({me.release_time,
                       detail::HeapEntry::pack(0, inst.priority.rank[static_cast<std::size_t>(agent)]),
                       agent, edges.front(), 0});
    detail::EventHeap heap(std::move(initial));
    // queue slots persist until their pop step has passed (same-step arrivals
    // count leaving agents as congestion); only counts matter here
    std::vector<std::deque<Time>> queues(inst.edges.size());
    while (!heap.empty()) {
        detail::HeapEntry e = heap.top();
        heap.pop();
        if (abort_above < kUnreachable && e.time - me.release_time >= abort_above) {
            ev.aborted = true;
            ev.stuck_lb = e.time;  // clocks only advance; pending arrivals are at least this
            break;
        }
        const Edge& edge = inst.edges[static_cast<std::size_t>(e.edge)];
        auto& q = queues[static_cast<std::size_t>(e.edge)];
        if (e.kind() == 0) {
            while (!q.empty() && q.front() < e.time) q.pop_front();
            Time pop_at = e.time + queue_wait(static_cast<Time>(q.size()) + 1, edge.capacity);
            q.push_back(pop_at);
            heap.push({pop_at, detail::HeapEntry::pack(1, e.rank()), e.agent, e.edge, e.path_pos});
        } else {
            const Path& p = *profile.paths[static_cast<std::size_t>(e.agent)];
            Time arrive = e.time + edge.delay;
            if (e.agent == agent) ev.arrival[static_cast<std::size_t>(e.path_pos)] = arrive;
            if (e.path_pos + 1 == static_cast<int>(p.edges.size())) {
                if (e.agent == agent) {
                    ev.cost = arrive - me.release_time;
                    break;  // later adversary events cannot change this agent's past
                }
            } else {
                heap.push({arrive, detail::HeapEntry::pack(0, e.rank()), e.agent,
                           p.edges[static_cast<std::size_t>(e.path_pos + 1)], e.path_pos + 1});
            }
        }
    }
    profile.paths[static_cast<std::size_t>(agent)] = std::nullopt;
    return ev;
}

}  // namespace brdetail

// Exact best response of `agent` against a fixed adversary profile.
// Deterministic: among minimum-cost paths, the lexicographically smallest edge
// sequence wins (DFS explores in that order and keeps strict improvements).
inline BestResponse best_response(const Instance& inst, int agent, const Profile& adversary,
                                  const BestResponseOptions& opt = {}) {
    for (int j = 0; j < inst.num_agents(); ++j) {
        if (j == agent) continue;
        if (!adversary.paths[static_cast<std::size_t>(j)])
            throw SearchError("adversary profile misses agent " + std::to_string(j));
    }
    const Agent& me = inst.agents[static_cast<std::size_t>(agent)];

    BestResponse best;
    best.cost = kUnreachable;
    if (me.source == me.sink) {
        best.path = Path{agent, {}};
        best.cost = 0;
        best.explored = 1;
        return best;
    }

    const std::vector<Time> ff = free_flow_to_sink(inst, me.sink);
    if (ff[static_cast<std::size_t>(me.source)] >= kUnreachable)
        throw SearchError("agent sink unreachable from source");

    Profile work = adversary;
    work.paths[static_cast<std::size_t>(agent)] = std::nullopt;
    const std::vector<detail::HeapEntry> seeds = brdetail::adversary_seeds(inst, work, agent);

    std::vector<char> visited(static_cast<std::size_t>(inst.vertex_count), 0);
    std::vector<int> prefix;
    std::vector<int> vstack{me.source};  // vertices along the prefix
    // prefix_arrival[d]: exact arrival at the vertex after d prefix edges,
    // valid for d <= arrival_valid (learned from the last simulated candidate;
    // the entry at a stuck edge is a lower bound, still safe for pruning).
    std::vector<Time> prefix_arrival{me.release_time};
    std::size_t arrival_valid = 0;
    Time prefix_dsum = 0;
    std::int64_t candidates = 0;
    bool cap_hit = false;
    bool stop_all = false;
    // evaluations can prove the whole current prefix hopeless some levels up;
    // the search then unwinds to just above that depth
    std::size_t cut_depth = static_cast<std::size_t>(-1);

    visited[static_cast<std::size_t>(me.source)] = 1;

    auto evaluate = [&](const std::vector<int>& edges) {
        auto ev = brdetail::eval_candidate(inst, work, agent, edges, best.cost, seeds);
        ++best.explored;
        if (ev.cost < best.cost) {
            best.cost = ev.cost;
            best.path = Path{agent, edges};
        }
        // learn exact prefix arrivals for sibling bounds; an aborted run still
        // lower-bounds the arrival where the agent got stuck, which is enough
        // to prune (the bound only ever underestimates)
        if (prefix_arrival.size() < edges.size() + 1) prefix_arrival.resize(edges.size() + 1, kUnreachable);
        arrival_valid = 0;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (ev.arrival[k] >= kUnreachable) break;
            prefix_arrival[k + 1] = ev.arrival[k];
            arrival_valid = k + 1;
        }
        if (ev.aborted && ev.stuck_lb >= 0 && arrival_valid < edges.size()) {
            prefix_arrival[arrival_valid + 1] = ev.stuck_lb;
            ++arrival_valid;
        }
        // find the shallowest depth at which this prefix already costs too much
        for (std::size_t d = 1; d <= arrival_valid && d < vstack.size() + 1; ++d) {
            if (d > prefix.size()) break;
            int v_at = vstack[d];
            if ((prefix_arrival[d] - me.release_time) + ff[static_cast<std::size_t>(v_at)] >= best.cost) {
                cut_depth = d;
                break;
            }
        }
        if (opt.check_bound && !ev.aborted && ev.cost < kUnreachable) {
            int v = me.source;
            for (std::size_t k = 0; k < edges.size(); ++k) {
                v = inst.edges[static_cast<std::size_t>(edges[k])].head;
                if (ev.arrival[k] < kUnreachable &&
                    (ev.arrival[k] - me.release_time) + ff[static_cast<std::size_t>(v)] > ev.cost)
                    throw SearchError("admissible bound violated during search");
            }
        }
    };

    auto dfs = [&](auto&& self, int v) -> void {
        std::size_t depth = prefix.size();
        for (int e : inst.out_edges[static_cast<std::size_t>(v)]) {
            const Edge& edge = inst.edges[static_cast<std::size_t>(e)];
            if (edge.head == v || visited[static_cast<std::size_t>(edge.head)]) continue;

            if (best.cost < kUnreachable) {
                Time lb = prefix_dsum + edge.delay + ff[static_cast<std::size_t>(edge.head)];
                if (depth <= arrival_valid)
                    lb = std::max(lb, (prefix_arrival[depth] - me.release_time) + edge.delay +
                                          ff[static_cast<std::size_t>(edge.head)]);
                if (lb >= best.cost) {
                    ++best.pruned;
                    continue;
                }
            }
            if (ff[static_cast<std::size_t>(edge.head)] >= kUnreachable) continue;

            prefix.push_back(e);
            vstack.push_back(edge.head);
            prefix_dsum += edge.delay;
            if (edge.head == me.sink) {
                if (++candidates > opt.max_candidates) {
                    cap_hit = true;
                    stop_all = true;
                } else {
                    evaluate(prefix);
                }
            } else {
                visited[static_cast<std::size_t>(edge.head)] = 1;
                self(self, edge.head);
                visited[static_cast<std::size_t>(edge.head)] = 0;
            }
            prefix_dsum -= edge.delay;
            prefix.pop_back();
            vstack.pop_back();
            arrival_valid = std::min(arrival_valid, prefix.size());
            if (opt.stop_at && best.cost <= *opt.stop_at) stop_all = true;
            if (stop_all) return;
            if (prefix.size() >= cut_depth) return;  // prefix proven hopeless upstream
            cut_depth = static_cast<std::size_t>(-1);
        }
    };
    dfs(dfs, me.source);
    if (opt.stop_at && best.cost <= *opt.stop_at) return best;  // witness found

    if (best.cost >= kUnreachable)
        throw SearchError(cap_hit ? "best-response candidate cap exceeded without any optimum"
                                  : "no source-to-sink path exists for agent " + std::to_string(agent));
    if (cap_hit) throw SearchError("best-response candidate cap exceeded; optimum not certified");
    return best;
}

inline bool best_response_decision(const Instance& inst, int agent, const Profile& adversary,
                                   Time threshold, const BestResponseOptions& opt = {}) {
    // quick no: waits are nonnegative, so free flow bounds every strategy
    const Agent& me = inst.agents[static_cast<std::size_t>(agent)];
    auto ff = free_flow_distance(inst, me.source, me.sink);
    if (ff && *ff > threshold) return false;
    BestResponseOptions o = opt;
    o.stop_at = threshold;  // first witness suffices
    BestResponse br = best_response(inst, agent, adversary, o);
    return br.cost <= threshold;
}

}  // namespace frog
