#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "frog/core.hpp"
#include "frog/equilibrium.hpp"
#include "frog/stepwise.hpp"
#include "frog/strategy.hpp"

// GPS-agents replan at every vertex from last-step congestion: edge cost is
// the fixed delay plus floor(|q_e| / c_e) observed over the previous step.
// Walk mode plans over the raw digraph and may cycle forever; SimplePath mode
// plans over the digraph minus the agent's visited vertices, which keeps every
// walk simple and guarantees termination.

namespace frog {

enum class GpsMode { Walk, SimplePath };

enum class TiePolicy {
    Lexicographic,  // smallest tied edge id
    KeepHeading,    // stick to the previously planned first edge when tied
    Procrastinate,  // largest tied edge id; generators order circulating edges last
    Seeded,         // deterministic hash of (seed, agent, vertex, tie set)
    Branching,      // explore every tie resolution (pogps only)
};

struct TieConfig {
    TiePolicy policy = TiePolicy::Lexicographic;
    std::uint64_t seed = 0;
};

inline Time gps_edge_cost(const Snapshot& snap, const Instance& inst, int edge) {
    const Edge& e = inst.edges[static_cast<std::size_t>(edge)];
    return e.delay + snap.at(edge) / e.capacity;
}

// All minimum-cost first edges out of `current` toward the agent's sink under
// snapshot costs, ascending edge id. Empty means no admissible continuation.
inline std::vector<int> gps_plan_candidates(const Instance& inst, int agent, int current,
                                            const std::vector<char>& excluded, const Snapshot& snap) {
    const Agent& me = inst.agents[static_cast<std::size_t>(agent)];
    // backward Dijkstra from the sink over non-excluded vertices
    std::vector<std::vector<std::pair<int, int>>> rin(static_cast<std::size_t>(inst.vertex_count));
    for (const Edge& e : inst.edges)
        rin[static_cast<std::size_t>(e.head)].emplace_back(e.tail, e.id);
    std::vector<Time> dist(static_cast<std::size_t>(inst.vertex_count), kUnreachable);
    using Item = std::pair<Time, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(me.sink)] = 0;
    pq.emplace(0, me.sink);
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[static_cast<std::size_t>(v)]) continue;
        for (auto [u, eid] : rin[static_cast<std::size_t>(v)]) {
            if (u != current && excluded[static_cast<std::size_t>(u)]) continue;
            Time nd = d + gps_edge_cost(snap, inst, eid);
            if (nd < dist[static_cast<std::size_t>(u)]) {
                dist[static_cast<std::size_t>(u)] = nd;
                pq.emplace(nd, u);
            }
        }
    }
    std::vector<int> best;
    Time best_cost = kUnreachable;
    for (int e : inst.out_edges[static_cast<std::size_t>(current)]) {
        int h = inst.edges[static_cast<std::size_t>(e)].head;
        if (h == current || excluded[static_cast<std::size_t>(h)]) continue;
        if (dist[static_cast<std::size_t>(h)] >= kUnreachable) continue;
        Time c = gps_edge_cost(snap, inst, e) + dist[static_cast<std::size_t>(h)];
        if (c < best_cost) {
            best_cost = c;
            best.clear();
        }
        if (c == best_cost) best.push_back(e);
    }
    return best;
}

namespace gpsdetail {

inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Policy pick among tied candidates. Depends only on the configuration, never
// on the absolute clock, so repeated configurations repeat their choices.
inline int pick(const std::vector<int>& tied, const TieConfig& tie, int agent, int vertex,
                std::optional<int> prev_heading) {
    switch (tie.policy) {
        case TiePolicy::Lexicographic:
            return tied.front();
        case TiePolicy::Procrastinate:
            return tied.back();
        case TiePolicy::KeepHeading:
            if (prev_heading)
                for (int e : tied)
                    if (e == *prev_heading) return e;
            return tied.front();
        case TiePolicy::Seeded: {
            std::uint64_t h = mix(tie.seed ^ mix(static_cast<std::uint64_t>(agent) << 32 ^
                                                 static_cast<std::uint64_t>(vertex)));
            for (int e : tied) h = mix(h ^ static_cast<std::uint64_t>(e));
            return tied[static_cast<std::size_t>(h % tied.size())];
        }
        case TiePolicy::Branching:
            throw SearchError("Branching tie policy has no single pick");
    }
    return tied.front();
}

}  // namespace gpsdetail

// Mutable per-run replanner state, copied alongside the engine when branching.
struct GpsRunState {
    GpsMode mode = GpsMode::SimplePath;
    std::vector<std::vector<char>> visited;     // per agent, SimplePath exclusions
    std::vector<std::optional<int>> heading;    // per agent, previous planned edge
    bool stranded = false;
    int stranded_agent = -1;

    static GpsRunState make(const Instance& inst, GpsMode mode) {
        GpsRunState st;
        st.mode = mode;
        st.visited.assign(inst.agents.size(),
                          std::vector<char>(static_cast<std::size_t>(inst.vertex_count), 0));
        st.heading.assign(inst.agents.size(), std::nullopt);
        return st;
    }
};

// Router for a fixed (non-branching) tie policy. In walk mode the visited
// vector stays all-zero, so one code path covers both planning modes.
inline Router gps_router(const Instance& inst, GpsRunState& st, const TieConfig& tie) {
    if (tie.policy == TiePolicy::Branching)
        throw SearchError("gps_simulate requires a non-branching tie policy");
    return [&inst, &st, tie](int agent, int vertex, const Snapshot& snap, Time) -> RouterChoice {
        if (vertex == inst.agents[static_cast<std::size_t>(agent)].sink) return RouterFinish{};
        auto& vis = st.visited[static_cast<std::size_t>(agent)];
        if (st.mode == GpsMode::SimplePath) vis[static_cast<std::size_t>(vertex)] = 1;
        auto tied = gps_plan_candidates(inst, agent, vertex, vis, snap);
        if (tied.empty()) {
            st.stranded = true;
            st.stranded_agent = agent;
            throw SimulationError("gps agent " + std::to_string(agent) + " stranded at vertex " +
                                  std::to_string(vertex));
        }
        int e = gpsdetail::pick(tied, tie, agent, vertex,
                                st.heading[static_cast<std::size_t>(agent)]);
        st.heading[static_cast<std::size_t>(agent)] = e;
        return RouterEdge{e};
    };
}

// Single planning query (one replanning decision), mostly a test surface.
inline int gps_plan(const Instance& inst, int agent, int current, const std::vector<char>& visited,
                    const Snapshot& snap, const TieConfig& tie, GpsMode mode) {
    std::vector<char> none(static_cast<std::size_t>(inst.vertex_count), 0);
    auto tied = gps_plan_candidates(inst, agent, current, mode == GpsMode::Walk ? none : visited, snap);
    if (tied.empty()) throw SearchError("stranded: no admissible continuation");
    return gpsdetail::pick(tied, tie, agent, current, std::nullopt);
}

struct CycleEvidence {
    Time first_seen = 0;
    Time repeated_at = 0;
};

struct GpsOutcome {
    enum class Status { Finished, NonTermination, HorizonReached };
    Status status = Status::HorizonReached;
    std::vector<std::vector<int>> walks;
    std::vector<Time> delays;       // meaningful when Finished
    std::vector<Time> completions;  // meaningful when Finished
    std::optional<CycleEvidence> cycle;
    Time last_step = 0;
};

struct GpsKey {
    StepwiseStateKey engine;
    std::vector<std::vector<char>> visited;
    std::vector<std::optional<int>> heading;

    bool operator<(const GpsKey& o) const {
        if (engine.words != o.engine.words) return engine.words < o.engine.words;
        if (visited != o.visited) return visited < o.visited;
        return heading < o.heading;
    }
};

inline Time default_gps_horizon(const Instance& inst) {
    Time maxd = 0;
    for (const Edge& e : inst.edges) maxd = std::max(maxd, e.delay);
    Time n = std::max<Time>(inst.num_agents(), 1);
    Time v = std::max<Time>(inst.vertex_count, 1);
    Time releases = 0;
    for (const Agent& a : inst.agents) releases = std::max(releases, a.release_time);
    return releases + n * v * (maxd + n) + 1;
}

inline GpsOutcome gps_simulate(const Instance& inst, const TieConfig& tie, GpsMode mode, Time horizon,
                               const StepwiseOptions& opt = {}) {
    if (horizon < 1) throw SearchError("horizon must be >= 1");
    GpsRunState st = GpsRunState::make(inst, mode);
    StepwiseEngine eng(inst, opt);
    Router route = gps_router(inst, st, tie);

    Time last_release = 0;
    for (const Agent& a : inst.agents) last_release = std::max(last_release, a.release_time);

    std::map<GpsKey, Time> seen;
    GpsOutcome out;
    while (!eng.done() && eng.clock() < horizon) {
        eng.step(route);
        out.last_step = eng.clock() - 1;
        if (!eng.done() && eng.clock() > last_release) {
            GpsKey key{StepwiseStateKey::of(eng), st.visited, st.heading};
            auto [it, fresh] = seen.emplace(std::move(key), eng.clock());
            if (!fresh) {
                out.status = GpsOutcome::Status::NonTermination;
                out.cycle = CycleEvidence{it->second, eng.clock()};
                out.walks = eng.outcome().walks;
                return out;
            }
        }
    }
    out.walks = eng.outcome().walks;
    if (eng.done()) {
        out.status = GpsOutcome::Status::Finished;
        out.delays = eng.outcome().result.delay;
        out.completions = eng.outcome().result.completion;
    } else {
        out.status = GpsOutcome::Status::HorizonReached;
    }
    return out;
}

struct PogpsReport {
    Time worst_gps_total = 0;
    Time optimum_total = 0;
    bool exact = false;                  // both sides exhausted
    bool numerator_exact = false;        // branching exploration exhausted
    bool denominator_exact = false;      // social optimum exhausted
    std::int64_t states_explored = 0;
    // replayable evidence: per-decision (step, agent, vertex, chosen edge)
    std::vector<std::array<int, 4>> witness_choices;

    double ratio() const {
        return optimum_total == 0 ? 0.0
                                  : static_cast<double>(worst_gps_total) /
                                        static_cast<double>(optimum_total);
    }
    // exact rational comparison: this->ratio > other.ratio
    bool ratio_greater_than(const PogpsReport& o) const {
        return static_cast<__int128>(worst_gps_total) * o.optimum_total >
               static_cast<__int128>(o.worst_gps_total) * optimum_total;
    }
};

namespace gpsdetail {

struct BranchState {
    StepwiseEngine eng;
    GpsRunState st;
    std::vector<std::array<int, 4>> choices;
};

// Scripted router: follows `script` for this step's decisions; when the script
// runs out at a decision with several tied candidates, records the tie set and
// keeps going with the first candidate (the rerun discards that trajectory).
struct ScriptProbe {
    const std::vector<int>* script;
    std::size_t cursor = 0;
    std::optional<std::vector<int>> first_unscripted;
    std::vector<std::array<int, 4>> taken;  // (step, agent, vertex, edge)
};

inline Router scripted_router(const Instance& inst, GpsRunState& st, ScriptProbe& probe) {
    return [&inst, &st, &probe](int agent, int vertex, const Snapshot& snap, Time step) -> RouterChoice {
        if (vertex == inst.agents[static_cast<std::size_t>(agent)].sink) return RouterFinish{};
        auto& vis = st.visited[static_cast<std::size_t>(agent)];
        vis[static_cast<std::size_t>(vertex)] = 1;
        auto tied = gps_plan_candidates(inst, agent, vertex, vis, snap);
        if (tied.empty())
            throw SimulationError("gps agent stranded during branching exploration");
        int chosen;
        if (tied.size() == 1) {
            chosen = tied.front();
        } else if (probe.cursor < probe.script->size()) {
            chosen = (*probe.script)[probe.cursor++];
        } else {
            if (!probe.first_unscripted) probe.first_unscripted = tied;
            chosen = tied.front();
        }
        probe.taken.push_back({static_cast<int>(step), agent, vertex, chosen});
        st.heading[static_cast<std::size_t>(agent)] = chosen;
        return RouterEdge{chosen};
    };
}

}  // namespace gpsdetail

// Exact worst total delay obtainable by GPS agents over all tie resolutions,
// SimplePath mode. Depth-first over whole steps: each step is re-executed from
// a pre-step copy once per distinct choice script, and configurations memoize
// the worst remaining cost (time-shifted, so repeats across clocks collapse).
struct BranchingResult {
    Time worst_total = 0;
    bool exhausted = true;
    std::int64_t states = 0;
    std::vector<std::array<int, 4>> witness;
};

inline BranchingResult gps_branching_worst(const Instance& inst, const SearchBudget& budget,
                                           const StepwiseOptions& opt = {}) {
    Time releases = 0;
    for (const Agent& a : inst.agents) releases = std::max(releases, a.release_time);
    const Time horizon = default_gps_horizon(inst);

    std::map<GpsKey, Time> memo;  // config -> worst future cost (see recursion note)
    BranchingResult out;
    std::int64_t state_budget = budget.max_profiles;

    // future(C) = max over step scripts of future(C') + alive(C'), where alive
    // counts released, unfinished agents after the step; finished configs are 0.
    // Summed from the start this telescopes to the total delay.
    auto rec = [&](auto&& self, gpsdetail::BranchState& cur,
                   std::vector<std::array<int, 4>>& path_choices) -> std::optional<Time> {
        if (cur.eng.done()) return Time{0};
        if (cur.eng.clock() >= horizon)
            throw SearchError("branching exploration exceeded the termination horizon");
        GpsKey key{StepwiseStateKey::of(cur.eng), cur.st.visited, cur.st.heading};
        if (cur.eng.clock() > releases) {
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
        }
        if (++out.states > state_budget) return std::nullopt;  // budget exhausted

        std::optional<Time> best;
        std::vector<std::vector<int>> scripts{{}};
        std::vector<std::array<int, 4>> best_suffix;
        for (std::size_t si = 0; si < scripts.size(); ++si) {
            if (scripts.size() > 4096)
                throw SearchError("branching fan-out exceeded sanity bound");
            gpsdetail::BranchState child = cur;
            gpsdetail::ScriptProbe probe;
            probe.script = &scripts[si];
            Router route = gpsdetail::scripted_router(inst, child.st, probe);
            child.eng.step(route);
            if (probe.first_unscripted) {
                // incomplete script: spawn one script per tied choice, drop this run
                for (int e : *probe.first_unscripted) {
                    std::vector<int> s = scripts[si];
                    s.push_back(e);
                    scripts.push_back(std::move(s));
                }
                continue;
            }
            int alive = 0;
            for (int i = 0; i < inst.num_agents(); ++i)
                if (!child.eng.outcome().finished[static_cast<std::size_t>(i)] &&
                    inst.agents[static_cast<std::size_t>(i)].release_time < child.eng.clock())
                    ++alive;
            std::vector<std::array<int, 4>> sub_choices;
            auto sub = self(self, child, sub_choices);
            if (!sub) return std::nullopt;
            Time value = *sub + alive;
            if (!best || value > *best) {
                best = value;
                best_suffix = probe.taken;
                best_suffix.insert(best_suffix.end(), sub_choices.begin(), sub_choices.end());
            }
        }
        if (!best) throw SearchError("branching step produced no completed script");
        if (cur.eng.clock() > releases) memo.emplace(std::move(key), *best);
        path_choices = std::move(best_suffix);
        return best;
    };

    gpsdetail::BranchState root{StepwiseEngine(inst, opt), GpsRunState::make(inst, GpsMode::SimplePath), {}};
    std::vector<std::array<int, 4>> witness;
    auto value = rec(rec, root, witness);
    if (!value) {
        out.exhausted = false;
        return out;
    }
    // value counts per-step liveness from t=0; convert to sum of delays:
    // each agent contributes one unit per step in [release, completion).
    out.worst_total = *value;
    out.witness = std::move(witness);
    return out;
}

// Price of GPS navigation: worst obtainable GPS total over the social optimum.
inline PogpsReport pogps(const Instance& inst, const SearchBudget& budget, GpsMode mode,
                         const TieConfig& seeded_probe = {}) {
    if (mode != GpsMode::SimplePath)
        throw SearchError("pogps requires SimplePath mode (Walk mode may not terminate)");

    PogpsReport rep;

    // numerator: exact branching when it fits the budget, else the best
    // certified lower bound over the fixed tie policies
    BranchingResult br = gps_branching_worst(inst, budget);
    rep.states_explored = br.states;
    if (br.exhausted) {
        rep.worst_gps_total = br.worst_total;
        rep.numerator_exact = true;
        rep.witness_choices = std::move(br.witness);
    } else {
        Time worst = -1;
        for (TiePolicy p :
             {TiePolicy::Lexicographic, TiePolicy::KeepHeading, TiePolicy::Procrastinate, TiePolicy::Seeded}) {
            TieConfig tie{p, seeded_probe.seed};
            GpsOutcome o = gps_simulate(inst, tie, GpsMode::SimplePath, default_gps_horizon(inst));
            if (o.status != GpsOutcome::Status::Finished) continue;
            Time t = 0;
            for (Time d : o.delays) t += d;
            if (t > worst) worst = t;
        }
        if (worst < 0) throw SearchError("no fixed-policy GPS run finished; cannot bound pogps");
        rep.worst_gps_total = worst;
        rep.numerator_exact = false;
    }

    // denominator: exhaustive social optimum when the product space fits,
    // else the achieved total of the profile of free-flow shortest paths
    // (an upper bound on the optimum, keeping the reported ratio a lower bound)
    std::int64_t space = 1;
    bool fits = true;
    for (int i = 0; i < inst.num_agents() && fits; ++i) {
        PathSet s = enumerate_simple_paths(inst, i, budget.max_paths_per_agent);
        if (s.truncated || s.paths.empty()) fits = false;
        if (fits && space > budget.max_profiles / std::max<std::int64_t>(1, static_cast<std::int64_t>(s.paths.size())))
            fits = false;
        if (fits) space *= static_cast<std::int64_t>(s.paths.size());
    }
    if (fits) {
        SocialOptimum so = social_optimum(inst, budget);
        rep.optimum_total = so.total;
        rep.denominator_exact = !so.exhausted_budget;
    } else {
        Profile greedy = Profile::empty(inst.num_agents());
        for (int i = 0; i < inst.num_agents(); ++i) {
            // lexicographically smallest free-flow shortest path
            PathSet s = enumerate_simple_paths(inst, i, budget.max_paths_per_agent);
            const Agent& a = inst.agents[static_cast<std::size_t>(i)];
            Time bestff = kUnreachable;
            for (const Path& p : s.paths) {
                Time d = 0;
                for (int e : p.edges) d += inst.edges[static_cast<std::size_t>(e)].delay;
                if (d < bestff) {
                    bestff = d;
                    greedy.paths[static_cast<std::size_t>(i)] = p;
                }
            }
        }
        SimOptions sopt;
        sopt.record_waits = false;
        rep.optimum_total = total_delay(simulate(inst, greedy, sopt));
        rep.denominator_exact = false;
    }
    rep.exact = rep.numerator_exact && rep.denominator_exact;
    return rep;
}

}  // namespace frog
