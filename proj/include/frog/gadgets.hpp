#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "frog/core.hpp"
#include "frog/format.hpp"
#include "frog/validate.hpp"

// Deterministic generators for the gadget instances, plus the brute-force
// oracles used to verify them. Figure transcription is calibrated against the
// stated behavioral facts (payoffs, lemma properties, cost correspondences),
// not against drawing geometry; each generator documents its reading where the
// figure alone is ambiguous.

namespace frog {

// Tie-break classes used across the gadgets: runners beat multipliers beat
// blockers beat the optimizing agent. Within a class, insertion order decides.
enum GadgetClass : int {
    kClassRunner = 0,
    kClassMult = 1,
    kClassBlocker = 2,
    kClassX = 3,
};

struct GadgetAgent {
    int source = 0;
    int sink = 0;
    Time release = 0;
    std::vector<int> path;  // fixed route, edge ids
    int cls = kClassX;
};

// Accumulates vertices, edges and routed agents; emits an Instance whose
// priority order is (class, insertion index), plus the fixed profile.
class GadgetBuilder {
  public:
    int add_vertex() { return vertices_++; }

    int add_edge(int tail, int head, int capacity, Time delay) {
        int id = static_cast<int>(edges_.size());
        edges_.push_back(Edge{id, tail, head, capacity, delay});
        return id;
    }

    int add_agent(GadgetAgent a) {
        agents_.push_back(std::move(a));
        return static_cast<int>(agents_.size()) - 1;
    }

    int vertex_count() const { return vertices_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int agent_count() const { return static_cast<int>(agents_.size()); }
    const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

    std::vector<int> priority_list() const {
        std::vector<int> order(agents_.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return agents_[static_cast<std::size_t>(a)].cls < agents_[static_cast<std::size_t>(b)].cls;
        });
        return order;
    }

    Instance instance() const {
        std::vector<Agent> as;
        for (std::size_t i = 0; i < agents_.size(); ++i)
            as.push_back(Agent{static_cast<int>(i), agents_[i].source, agents_[i].sink,
                               agents_[i].release});
        return make_instance(vertices_, edges_, as, priority_list());
    }

    Profile profile() const {
        Profile p = Profile::empty(static_cast<int>(agents_.size()));
        for (std::size_t i = 0; i < agents_.size(); ++i)
            p.paths[i] = Path{static_cast<int>(i), agents_[i].path};
        return p;
    }

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<GadgetAgent>& agents() const { return agents_; }

  private:
    int vertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<GadgetAgent> agents_;
};

// A partial game: vertices/edges/agents in fragment-local ids, with named
// handles for splicing into a host under construction.
struct Fragment {
    int vertices = 0;
    std::vector<Edge> edges;
    std::vector<GadgetAgent> agents;
    std::optional<int> trigger_edge;
    std::vector<int> bomb_edges;
    std::map<std::string, int> ports;                    // name -> local vertex
    std::map<std::string, std::vector<int>> edge_groups; // name -> local edges
};

struct Attachment {
    std::map<std::string, int> ports;  // fragment port -> host vertex
    std::map<int, int> edge_map;       // fragment edge -> host edge (shared; host attributes win)
    std::set<int> shared_hosts;        // host vertices that several ports may legally share
};

struct SpliceResult {
    std::vector<int> vertex_ids;  // fragment-local -> host
    std::vector<int> edge_ids;    // fragment-local -> host
    std::vector<int> agent_ids;   // fragment-local -> host
};

// Injectively remaps a fragment into the builder. Port vertices land on their
// mapped host vertices; everything else is fresh. Mapping two ports onto one
// host vertex is rejected unless that vertex is declared shared.
inline SpliceResult splice(GadgetBuilder& host, const Fragment& frag, const Attachment& attach) {
    SpliceResult out;
    out.vertex_ids.assign(static_cast<std::size_t>(frag.vertices), -1);

    std::map<int, std::string> port_of;
    for (const auto& [name, local] : frag.ports) port_of[local] = name;

    std::map<int, std::string> used_host;  // host vertex -> first port name
    for (const auto& [name, local] : frag.ports) {
        auto it = attach.ports.find(name);
        if (it == attach.ports.end()) continue;
        int hv = it->second;
        auto [uit, fresh] = used_host.try_emplace(hv, name);
        if (!fresh && !attach.shared_hosts.count(hv))
            throw SearchError("splice: ports '" + uit->second + "' and '" + name +
                              "' map to host vertex " + std::to_string(hv) +
                              " which is not declared shared");
        out.vertex_ids[static_cast<std::size_t>(local)] = hv;
    }
    for (int v = 0; v < frag.vertices; ++v)
        if (out.vertex_ids[static_cast<std::size_t>(v)] < 0)
            out.vertex_ids[static_cast<std::size_t>(v)] = host.add_vertex();

    out.edge_ids.assign(frag.edges.size(), -1);
    for (const Edge& e : frag.edges) {
        auto it = attach.edge_map.find(e.id);
        if (it != attach.edge_map.end()) {
            const Edge& he = host.edge(it->second);
            int t = out.vertex_ids[static_cast<std::size_t>(e.tail)];
            int h = out.vertex_ids[static_cast<std::size_t>(e.head)];
            if (t != he.tail || h != he.head)
                throw SearchError("splice: mapped edge endpoints disagree with host edge " +
                                  std::to_string(it->second));
            out.edge_ids[static_cast<std::size_t>(e.id)] = it->second;
        } else {
            out.edge_ids[static_cast<std::size_t>(e.id)] =
                host.add_edge(out.vertex_ids[static_cast<std::size_t>(e.tail)],
                              out.vertex_ids[static_cast<std::size_t>(e.head)], e.capacity, e.delay);
        }
    }

    for (const GadgetAgent& a : frag.agents) {
        GadgetAgent h = a;
        h.source = out.vertex_ids[static_cast<std::size_t>(a.source)];
        h.sink = out.vertex_ids[static_cast<std::size_t>(a.sink)];
        for (int& e : h.path) e = out.edge_ids[static_cast<std::size_t>(e)];
        out.agent_ids.push_back(host.add_agent(std::move(h)));
    }
    return out;
}

// -------------------------------------------------------------------------
// Brute-force vertex cover (oracle)

inline int brute_force_vertex_cover(const UndirectedGraph& g) {
    if (g.vertex_count > 25) throw SearchError("vertex cover oracle limited to 25 vertices");
    if (g.edges.empty()) return 0;
    int best = g.vertex_count;
    for (std::uint32_t mask = 0; mask < (1u << g.vertex_count); ++mask) {
        int size = __builtin_popcount(mask);
        if (size >= best) continue;
        bool covers = true;
        for (auto& [a, b] : g.edges) {
            if (!(mask >> a & 1) && !(mask >> b & 1)) {
                covers = false;
                break;
            }
        }
        if (covers) best = size;
    }
    return best;
}

// -------------------------------------------------------------------------
// Pursuer-Evader game (the no-PNE example)
//
// Reading of the figure, fixed by the payoff table in the proof: the thin
// long transfer edges (Evader side to Pursuer side) carry delay 10 and the
// doubled capacity-2 edges (Pursuer side to Evader side) carry delay 8. With
// these delays the same-choice profile costs (12, 13) and the different-
// choice profile costs (13, 12), reproducing the proof's collision timing.

struct PursuerEvader {
    Instance inst;
    int pursuer = 0;  // two strategies: up/down
    int evader = 1;
    std::vector<Path> degenerate_paths;  // fixed routes of agents 2..7
    int p_up_first = 0, p_down_first = 0, e_up_first = 0, e_down_first = 0;
};

inline PursuerEvader gen_pursuer_evader() {
    // vertices
    enum {
        PFork, PUpA, PDownA, PUpB, PDownB, PUpC, PDownC, PJoin,
        EFork, EUpA, EDownA, EUpB, EDownB, EUpC, EDownC, EJoin,
        S7, S8, kVertices
    };
    std::vector<Edge> es;
    auto E = [&](int tail, int head, int cap, Time d) {
        es.push_back(Edge{static_cast<int>(es.size()), tail, head, cap, d});
        return es.back().id;
    };
    int e0 = E(PFork, PUpA, 1, 1);    // pursuer fork up
    int e1 = E(PFork, PDownA, 1, 1);  // pursuer fork down
    int e2 = E(PUpA, PUpB, 1, 10);
    int e3 = E(PDownA, PDownB, 1, 10);
    int e4 = E(PUpB, PUpC, 1, 1);
    int e5 = E(PDownB, PDownC, 1, 1);
    int e6 = E(PUpC, PJoin, 1, 0);
    int e7 = E(PDownC, PJoin, 1, 0);
    int e8 = E(EFork, EUpA, 1, 1);
    int e9 = E(EFork, EDownA, 1, 1);
    int e10 = E(EUpA, EUpB, 1, 10);
    int e11 = E(EDownA, EDownB, 1, 10);
    int e12 = E(EUpB, EUpC, 1, 1);
    int e13 = E(EDownB, EDownC, 1, 1);
    int e14 = E(EUpC, EJoin, 1, 0);
    int e15 = E(EDownC, EJoin, 1, 0);
    int e16 = E(EUpA, PUpB, 1, 10);    // transfer carrying agent three
    int e17 = E(EDownA, PDownB, 1, 10);
    int e18 = E(S7, PUpA, 1, 2);
    int e19 = E(S8, PDownA, 1, 2);
    int e20 = E(PUpA, EUpB, 2, 8);     // capacity-two transfer
    int e21 = E(PDownA, EDownB, 2, 8);

    std::vector<Agent> as = {
        {0, PFork, PJoin, 0},  // Pursuer
        {1, EFork, EJoin, 0},  // Evader
        {2, EFork, PUpC, 0},   {3, EFork, PDownC, 0},
        {4, PFork, EUpC, 0},   {5, PFork, EDownC, 0},
        {6, S7, EUpC, 0},      {7, S8, EDownC, 0},
    };
    // 2 > 3 ~ 4 > 1 > 5 ~ 6 > 7 ~ 8 in the paper's 1-based labels,
    // ties resolved by lower id first
    std::vector<int> priority = {1, 2, 3, 0, 4, 5, 6, 7};

    PursuerEvader pe;
    pe.inst = make_instance(kVertices, es, as, priority);
    pe.degenerate_paths = {
        Path{2, {e8, e16, e4}},  Path{3, {e9, e17, e5}},
        Path{4, {e0, e20, e12}}, Path{5, {e1, e21, e13}},
        Path{6, {e18, e20, e12}}, Path{7, {e19, e21, e13}},
    };
    pe.p_up_first = e0;
    pe.p_down_first = e1;
    pe.e_up_first = e8;
    pe.e_down_first = e9;
    (void)e2; (void)e3; (void)e6; (void)e7; (void)e10; (void)e11; (void)e14; (void)e15;
    return pe;
}

inline Profile pursuer_evader_profile(const PursuerEvader& pe, bool pursuer_up, bool evader_up) {
    Profile p = Profile::empty(pe.inst.num_agents());
    p.paths[0] = pursuer_up ? Path{0, {0, 2, 4, 6}} : Path{0, {1, 3, 5, 7}};
    p.paths[1] = evader_up ? Path{1, {8, 10, 12, 14}} : Path{1, {9, 11, 13, 15}};
    for (const Path& d : pe.degenerate_paths) p.paths[static_cast<std::size_t>(d.agent)] = d;
    return p;
}

// -------------------------------------------------------------------------
// Filter (one agent delayed by at least M, a prior agent not delayed at all)
//
// Chain u_0..u_M of capacity-1 zero-delay edges. For every position i and
// every t in [0,M) a blocker enters at u_{i-1}, crosses one chain edge and
// leaves at u_i. The dotted source-to-sink bypass edges of the figure are
// included in the graph but the fixed routes send every blocker through the
// chain; the caption does not settle their role, and the lemma tests validate
// this reading behaviorally.

struct GadgetCounts {
    std::int64_t vertices = 0;
    std::int64_t edges = 0;
    std::int64_t agents = 0;
};

inline GadgetCounts filter_counts(int m) {
    return {3L * m + 1, 4L * m, static_cast<std::int64_t>(m) * m};
}

inline Fragment gen_filter(int m) {
    if (m < 1) throw SearchError("filter requires M >= 1");
    GadgetBuilder b;
    std::vector<int> u(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i) u[static_cast<std::size_t>(i)] = b.add_vertex();
    std::vector<int> src(static_cast<std::size_t>(m + 1)), snk(static_cast<std::size_t>(m + 1));
    for (int i = 1; i <= m; ++i) {
        src[static_cast<std::size_t>(i)] = b.add_vertex();
        snk[static_cast<std::size_t>(i)] = b.add_vertex();
    }
    std::vector<int> chain;
    for (int i = 1; i <= m; ++i)
        chain.push_back(b.add_edge(u[static_cast<std::size_t>(i - 1)], u[static_cast<std::size_t>(i)], 1, 0));
    for (int i = 1; i <= m; ++i) {
        int entry = b.add_edge(src[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(i - 1)], 1, 0);
        int exit = b.add_edge(u[static_cast<std::size_t>(i)], snk[static_cast<std::size_t>(i)], 1, 0);
        b.add_edge(src[static_cast<std::size_t>(i)], snk[static_cast<std::size_t>(i)], 1, 0);  // dotted bypass
        for (Time t = 0; t < m; ++t)
            b.add_agent(GadgetAgent{src[static_cast<std::size_t>(i)], snk[static_cast<std::size_t>(i)], t,
                                    {entry, chain[static_cast<std::size_t>(i - 1)], exit}, kClassBlocker});
    }

    Fragment f;
    f.vertices = b.vertex_count();
    f.edges = b.edges();
    f.agents = b.agents();
    f.ports["in"] = u.front();
    f.ports["out"] = u.back();
    f.edge_groups["chain"] = chain;
    return f;
}

// Harness for the filter property tests: y and x enter u_0 through a shared
// zero-delay edge at time 0 with priority y > blockers > x.
struct FilterHarness {
    Instance inst;
    Profile profile;
    int x = 0, y = 0;
};

inline FilterHarness filter_harness(int m) {
    GadgetBuilder b;
    int entry_v = b.add_vertex();
    int exit_v = b.add_vertex();
    Fragment f = gen_filter(m);
    SpliceResult sp = splice(b, f, {});
    int in_v = sp.vertex_ids[static_cast<std::size_t>(f.ports.at("in"))];
    int out_v = sp.vertex_ids[static_cast<std::size_t>(f.ports.at("out"))];
    int entry_e = b.add_edge(entry_v, in_v, 1, 0);
    int exit_e = b.add_edge(out_v, exit_v, 1, 0);
    std::vector<int> through{entry_e};
    for (int ce : f.edge_groups.at("chain"))
        through.push_back(sp.edge_ids[static_cast<std::size_t>(ce)]);
    through.push_back(exit_e);

    FilterHarness h;
    h.y = b.add_agent(GadgetAgent{entry_v, exit_v, 0, through, kClassRunner});
    h.x = b.add_agent(GadgetAgent{entry_v, exit_v, 0, through, kClassX});
    h.inst = b.instance();
    h.profile = b.profile();
    return h;
}

// -------------------------------------------------------------------------
// Backfires
//
// One sub-backfire is armed for a single trigger time tau: its runner queues
// the trigger at tau+1 and, when undisturbed, sweeps the zero-delay chain in
// that same step and sets every blocker one step back, where M multiplier
// agents park it for M steps. If the crossing agent occupied the trigger at
// tau, the runner is one step late, the blockers pass untouched and all M of
// them line up on a bomb edge at tau+1, one step ahead of the crosser. The
// multiplier entry edges carry capacity M so that all copies of one class
// reach their collision vertex in the same step; the figure draws one source
// box per class and leaves the simultaneous entry implicit.

namespace gadget_detail {

struct BackfireLayout {
    int runner_agent = -1;
};

// Appends one sub-backfire keyed to trigger time tau. `bomb_edges` are host
// edge ids (already present); blocker k targets bomb_edges[(k-1) % size].
inline BackfireLayout add_sub_backfire(GadgetBuilder& b, int m, Time tau, int trigger_edge,
                                       const std::vector<int>& bomb_edges) {
    const Edge trig = b.edge(trigger_edge);
    BackfireLayout out;

    Fragment filter = gen_filter(m);
    SpliceResult fs = splice(b, filter, {});
    int f_in = fs.vertex_ids[static_cast<std::size_t>(filter.ports.at("in"))];
    int f_out = fs.vertex_ids[static_cast<std::size_t>(filter.ports.at("out"))];
    int fentry = b.add_edge(trig.head, f_in, 1, 0);

    std::vector<int> u(static_cast<std::size_t>(m + 1)), c(static_cast<std::size_t>(m)),
        v(static_cast<std::size_t>(m + 1));
    for (int k = 0; k <= m; ++k) u[static_cast<std::size_t>(k)] = b.add_vertex();
    for (int k = 0; k < m; ++k) c[static_cast<std::size_t>(k)] = b.add_vertex();
    for (int k = 1; k <= m; ++k) v[static_cast<std::size_t>(k)] = b.add_vertex();
    int fexit = b.add_edge(f_out, u[0], 1, 0);

    std::vector<int> chain_edges;
    for (int k = 0; k < m; ++k) {
        chain_edges.push_back(b.add_edge(u[static_cast<std::size_t>(k)], c[static_cast<std::size_t>(k)], 1, 0));
        chain_edges.push_back(b.add_edge(c[static_cast<std::size_t>(k)], u[static_cast<std::size_t>(k + 1)], 1, 0));
    }
    std::vector<int> drop(static_cast<std::size_t>(m + 1));
    for (int k = 1; k <= m; ++k)
        drop[static_cast<std::size_t>(k)] = b.add_edge(u[static_cast<std::size_t>(k)], v[static_cast<std::size_t>(k)], 1, 0);

    // runner: trigger at tau+1, then filter and the whole chain
    std::vector<int> rpath{trigger_edge, fentry};
    for (int ce : filter.edge_groups.at("chain"))
        rpath.push_back(fs.edge_ids[static_cast<std::size_t>(ce)]);
    rpath.push_back(fexit);
    for (int ce : chain_edges) rpath.push_back(ce);
    out.runner_agent =
        b.add_agent(GadgetAgent{trig.tail, u[static_cast<std::size_t>(m)], tau + 1, rpath, kClassRunner});

    // blockers: enter at c_{k-1}, one chain edge, drop, connector, bomb
    for (int k = 1; k <= m; ++k) {
        int bomb = bomb_edges[static_cast<std::size_t>((k - 1) % bomb_edges.size())];
        const Edge be = b.edge(bomb);
        int sb = b.add_vertex();
        int entry = b.add_edge(sb, c[static_cast<std::size_t>(k - 1)], 1, 0);
        int connector = b.add_edge(v[static_cast<std::size_t>(k)], be.tail, 1, 0);
        b.add_agent(GadgetAgent{sb, be.head, tau + 1,
                                {entry, chain_edges[static_cast<std::size_t>(2 * k - 1)],
                                 drop[static_cast<std::size_t>(k)], connector, bomb},
                                kClassBlocker});
    }

    // multipliers: M copies per position, simultaneous entry, sink at v_k
    for (int k = 1; k <= m; ++k) {
        int sm = b.add_vertex();
        int entry = b.add_edge(sm, u[static_cast<std::size_t>(k)], m, 0);
        for (int copy = 0; copy < m; ++copy)
            b.add_agent(GadgetAgent{sm, v[static_cast<std::size_t>(k)], tau + 2,
                                    {entry, drop[static_cast<std::size_t>(k)]}, kClassMult});
    }
    return out;
}

}  // namespace gadget_detail

inline Fragment gen_backfire(int m, Time t) {
    if (m < 1) throw SearchError("backfire requires M >= 1");
    if (t < 0) throw SearchError("backfire requires t >= 0");
    GadgetBuilder b;
    int w1 = b.add_vertex(), w2 = b.add_vertex(), w3 = b.add_vertex(), w4 = b.add_vertex();
    int trigger = b.add_edge(w1, w2, 1, 0);
    int bomb = b.add_edge(w3, w4, 1, 0);
    b.add_agent(GadgetAgent{w1, w2, t, {trigger}, kClassRunner});  // r0
    gadget_detail::add_sub_backfire(b, m, t, trigger, {bomb});

    Fragment f;
    f.vertices = b.vertex_count();
    f.edges = b.edges();
    f.agents = b.agents();
    f.trigger_edge = trigger;
    f.bomb_edges = {bomb};
    f.ports["x_in"] = w1;
    f.ports["trigger_head"] = w2;
    f.ports["bomb_tail"] = w3;
    f.ports["x_out"] = w4;
    return f;
}

// Sequence of sub-backfires sharing trigger and bomb, one armed per trigger
// time in [0, M]; r0 exists only for t = 0, later runners double as it.
inline Fragment gen_m_backfire(int m) {
    if (m < 1) throw SearchError("m-backfire requires M >= 1");
    GadgetBuilder b;
    int w1 = b.add_vertex(), w2 = b.add_vertex(), w3 = b.add_vertex(), w4 = b.add_vertex();
    int trigger = b.add_edge(w1, w2, 1, 0);
    int bomb = b.add_edge(w3, w4, 1, 0);
    b.add_agent(GadgetAgent{w1, w2, 0, {trigger}, kClassRunner});  // r0 at t = 0 only
    for (Time tau = 0; tau <= m; ++tau) gadget_detail::add_sub_backfire(b, m, tau, trigger, {bomb});

    Fragment f;
    f.vertices = b.vertex_count();
    f.edges = b.edges();
    f.agents = b.agents();
    f.trigger_edge = trigger;
    f.bomb_edges = {bomb};
    f.ports["x_in"] = w1;
    f.ports["trigger_head"] = w2;
    f.ports["bomb_tail"] = w3;
    f.ports["x_out"] = w4;
    return f;
}

// Completion for the lemma tests: x queues the trigger at `x_time` (or slips
// past it on a bypass edge) and crosses the bomb. The figure reserves a
// minimum delay of one between trigger head and bomb tail for spliced host
// graphs; the standalone connector uses delay zero so that the M blockers
// line up exactly one pop ahead of x, making "massively delayed" the exact
// bomb-edge wait M.
struct BackfireHarness {
    Instance inst;
    Profile profile;
    int x = 0;
    int bomb_edge = 0;
    std::size_t bomb_position = 0;  // index of the bomb edge in x's path
};

inline BackfireHarness backfire_harness(const Fragment& frag, Time x_time, bool via_trigger) {
    GadgetBuilder b;
    SpliceResult sp = splice(b, frag, {});
    int w1 = sp.vertex_ids[static_cast<std::size_t>(frag.ports.at("x_in"))];
    int w2 = sp.vertex_ids[static_cast<std::size_t>(frag.ports.at("trigger_head"))];
    int w3 = sp.vertex_ids[static_cast<std::size_t>(frag.ports.at("bomb_tail"))];
    int w4 = sp.vertex_ids[static_cast<std::size_t>(frag.ports.at("x_out"))];
    int trigger = sp.edge_ids[static_cast<std::size_t>(*frag.trigger_edge)];
    int bomb = sp.edge_ids[static_cast<std::size_t>(frag.bomb_edges.front())];
    int connector = b.add_edge(w2, w3, 1, 0);
    int bypass = b.add_edge(w1, w3, 1, 0);

    BackfireHarness h;
    std::vector<int> xpath = via_trigger ? std::vector<int>{trigger, connector, bomb}
                                         : std::vector<int>{bypass, bomb};
    h.bomb_position = xpath.size() - 1;
    h.x = b.add_agent(GadgetAgent{w1, w4, x_time, xpath, kClassX});
    h.bomb_edge = bomb;
    h.inst = b.instance();
    h.profile = b.profile();
    return h;
}

// -------------------------------------------------------------------------
// Vertex-cover reduction
//
// Block i of the chain offers a take lane (cost 4) and a skip lane (cost 3),
// so a route taking k lanes costs 3*eta + k plus any bomb punishment. For a
// graph vertex with later neighbors, the skip middle edge is the shared
// trigger of one backfire stack whose waves split round-robin over the
// neighbors' skip exit edges. Waves travel to the skip EXIT edge (w̄_j, u_j)
// rather than the skip middle edge: landing them on the middle edge would let
// one triggered stack drown the runner stream of vertex j's own stack and arm
// it spuriously, punishing honestly covered routes. The exit edge sits on
// exactly the same skip lane, which keeps the cover correspondence intact.

struct ReductionMap {
    int eta = 0;
    int m = 0;
    std::vector<int> take_edge;      // per graph vertex (0-based): the take lane middle
    std::vector<int> skip_edge;      // skip lane middle (trigger when armed)
    std::vector<int> skip_out_edge;  // skip lane exit (bomb target)
    Time threshold(Time kappa) const { return 3 * static_cast<Time>(eta) + kappa; }
};

struct VcReduction {
    Instance inst;
    Profile adversary;  // hole at x
    int x = 0;
    ReductionMap map;
};

inline VcReduction gen_vc_reduction(const UndirectedGraph& g, std::optional<int> m_opt = {}) {
    const int eta = g.vertex_count;
    if (eta < 1) throw SearchError("vertex cover reduction requires a nonempty graph");
    if (g.max_degree() > 3) throw SearchError("vertex cover reduction requires degree <= 3");
    const int m = m_opt.value_or(6 * eta);
    if (m < 1) throw SearchError("vertex cover reduction requires M >= 1");

    // later neighbors per graph vertex (block i corresponds to vertex i-1)
    std::vector<std::vector<int>> later(static_cast<std::size_t>(eta));
    for (auto& [a, bb] : g.edges) later[static_cast<std::size_t>(a)].push_back(bb);
    for (auto& l : later) std::sort(l.begin(), l.end());

    GadgetBuilder b;
    int sx = b.add_vertex();
    std::vector<int> u(static_cast<std::size_t>(eta + 1));
    for (int i = 0; i <= eta; ++i) u[static_cast<std::size_t>(i)] = b.add_vertex();
    int tx = b.add_vertex();

    ReductionMap map;
    map.eta = eta;
    map.m = m;
    map.take_edge.assign(static_cast<std::size_t>(eta), -1);
    map.skip_edge.assign(static_cast<std::size_t>(eta), -1);
    map.skip_out_edge.assign(static_cast<std::size_t>(eta), -1);

    int entry_e = b.add_edge(sx, u[0], 1, 0);
    std::vector<int> up_in(static_cast<std::size_t>(eta)), up_out(static_cast<std::size_t>(eta));
    std::vector<int> down_in(static_cast<std::size_t>(eta));
    for (int i = 1; i <= eta; ++i) {
        std::size_t gi = static_cast<std::size_t>(i - 1);
        bool armed = !later[gi].empty();
        int vi = b.add_vertex(), wi = b.add_vertex(), vbar = b.add_vertex(), wbar = b.add_vertex();
        up_in[gi] = b.add_edge(u[static_cast<std::size_t>(i - 1)], vi, 1, 1);
        map.take_edge[gi] = b.add_edge(vi, wi, 1, 2);
        up_out[gi] = b.add_edge(wi, u[static_cast<std::size_t>(i)], 1, 1);
        down_in[gi] = b.add_edge(u[static_cast<std::size_t>(i - 1)], vbar, 1, 1);
        // a runner already makes the crosser wait one step on a trigger
        map.skip_edge[gi] = b.add_edge(vbar, wbar, 1, armed ? 0 : 1);
        map.skip_out_edge[gi] = b.add_edge(wbar, u[static_cast<std::size_t>(i)], 1, 1);
    }
    int exit_e = b.add_edge(u[static_cast<std::size_t>(eta)], tx, 1, 0);
    (void)entry_e;
    (void)exit_e;

    // One backfire stack per armed vertex, waves split over later neighbors.
    // Any route that could still win reaches this trigger no earlier than
    // 3i-2 (all skips, no waits; later crossings have already paid a filter
    // or a bomb and lost), and once triggered the cascade must keep waves on
    // every bomb until the crosser's latest possible arrival there (4j-2 for
    // neighbor j). Only that window of trigger times is armed, with the
    // runner stream covering it.
    for (int i = 1; i <= eta; ++i) {
        std::size_t gi = static_cast<std::size_t>(i - 1);
        if (later[gi].empty()) continue;
        int trigger = map.skip_edge[gi];
        std::vector<int> bombs;
        for (int j : later[gi]) bombs.push_back(map.skip_out_edge[static_cast<std::size_t>(j)]);
        const Edge trig = b.edge(trigger);
        const Time lo = 3 * static_cast<Time>(i) - 2;
        const Time hi = 4 * static_cast<Time>(later[gi].back() + 1) - 2;
        b.add_agent(GadgetAgent{trig.tail, trig.head, lo, {trigger}, kClassRunner});  // r0
        for (Time tau = lo; tau <= hi; ++tau)
            gadget_detail::add_sub_backfire(b, m, tau, trigger, bombs);
    }

    VcReduction vc;
    vc.x = b.add_agent(GadgetAgent{sx, tx, 0, {}, kClassX});  // path decided by the solver
    vc.inst = b.instance();
    vc.adversary = b.profile();
    vc.adversary.paths[static_cast<std::size_t>(vc.x)] = std::nullopt;
    vc.map = map;
    return vc;
}

// Honest route of x for a chosen subset: take lanes of W, skip the rest.
inline Path vc_route(const VcReduction& vc, const std::vector<char>& take) {
    const int eta = vc.map.eta;
    Path p{vc.x, {}};
    const Instance& inst = vc.inst;
    // entry edge is the unique out-edge of x's source
    const Agent& ax = inst.agents[static_cast<std::size_t>(vc.x)];
    p.edges.push_back(inst.out_edges[static_cast<std::size_t>(ax.source)].front());
    for (int i = 0; i < eta; ++i) {
        int mid = take[static_cast<std::size_t>(i)] ? vc.map.take_edge[static_cast<std::size_t>(i)]
                                                    : vc.map.skip_edge[static_cast<std::size_t>(i)];
        const Edge& me = inst.edges[static_cast<std::size_t>(mid)];
        // lane entry from the current chain vertex
        int tail_chain = me.tail;
        for (int e : inst.out_edges[static_cast<std::size_t>(inst.edges[static_cast<std::size_t>(p.edges.back())].head)]) {
            if (inst.edges[static_cast<std::size_t>(e)].head == tail_chain) {
                p.edges.push_back(e);
                break;
            }
        }
        p.edges.push_back(mid);
        int out = take[static_cast<std::size_t>(i)] ? -1 : vc.map.skip_out_edge[static_cast<std::size_t>(i)];
        if (out < 0) {
            for (int e : inst.out_edges[static_cast<std::size_t>(me.head)]) {
                p.edges.push_back(e);
                break;
            }
        } else {
            p.edges.push_back(out);
        }
    }
    const Agent& a = inst.agents[static_cast<std::size_t>(vc.x)];
    int last_head = inst.edges[static_cast<std::size_t>(p.edges.back())].head;
    for (int e : inst.out_edges[static_cast<std::size_t>(last_head)]) {
        if (inst.edges[static_cast<std::size_t>(e)].head == a.sink) {
            p.edges.push_back(e);
            break;
        }
    }
    return p;
}

// -------------------------------------------------------------------------
// Double cycle of procrastination
//
// corners = 4 reproduces the figure: per corner, four zero-delay capacity-1
// edges between {u_{c,0}, v_{c,0}} and {u_{c,1}, v_{c,1}}, delay-1 edges to
// the next corner, inner agents sourced at odd corners' u_{c,1} and outer
// agents at even corners' v_{c,1}, with zero-delay exits for inner agents off
// every v_{c,0} and for outer agents off every u_{c,0}. Larger corner counts
// replicate the same pattern with one agent per corner, alternating rings.
// Per corner the edge order is exits, ring switches, ring continuations, then
// the inter-corner edges, so that the largest tied edge id keeps circulating
// (the adversarial tie policy).

struct DoubleCycle {
    Instance inst;
    int inner_sink = 0;
    int outer_sink = 0;
};

inline DoubleCycle gen_double_cycle(int corners) {
    if (corners < 3) throw SearchError("double cycle requires at least 3 corners");
    GadgetBuilder b;
    const int k = corners;
    std::vector<int> u0(static_cast<std::size_t>(k)), u1(static_cast<std::size_t>(k)),
        v0(static_cast<std::size_t>(k)), v1(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        u0[static_cast<std::size_t>(c)] = b.add_vertex();
        u1[static_cast<std::size_t>(c)] = b.add_vertex();
        v0[static_cast<std::size_t>(c)] = b.add_vertex();
        v1[static_cast<std::size_t>(c)] = b.add_vertex();
    }
    int t_inner = b.add_vertex();
    int t_outer = b.add_vertex();

    for (int c = 0; c < k; ++c) {
        int n = (c + 1) % k;
        b.add_edge(u0[static_cast<std::size_t>(c)], t_outer, 1, 0);  // outer agents exit inside
        b.add_edge(v0[static_cast<std::size_t>(c)], t_inner, 1, 0);  // inner agents exit outside
        b.add_edge(u0[static_cast<std::size_t>(c)], v1[static_cast<std::size_t>(c)], 1, 0);  // switch
        b.add_edge(v0[static_cast<std::size_t>(c)], u1[static_cast<std::size_t>(c)], 1, 0);  // switch
        b.add_edge(u0[static_cast<std::size_t>(c)], u1[static_cast<std::size_t>(c)], 1, 0);  // stay
        b.add_edge(v0[static_cast<std::size_t>(c)], v1[static_cast<std::size_t>(c)], 1, 0);  // stay
        b.add_edge(u1[static_cast<std::size_t>(c)], u0[static_cast<std::size_t>(n)], 1, 1);
        b.add_edge(v1[static_cast<std::size_t>(c)], v0[static_cast<std::size_t>(n)], 1, 1);
    }
    for (int c = 1; c < k; c += 2)
        b.add_agent(GadgetAgent{u1[static_cast<std::size_t>(c)], t_inner, 0, {}, kClassX});
    for (int c = 0; c < k; c += 2)
        b.add_agent(GadgetAgent{v1[static_cast<std::size_t>(c)], t_outer, 0, {}, kClassX});

    DoubleCycle dc;
    dc.inst = b.instance();
    dc.inner_sink = t_inner;
    dc.outer_sink = t_outer;
    return dc;
}

// Exact generated sizes, asserted by the tests.
inline GadgetCounts backfire_counts_exact(int m) {
    auto f = filter_counts(m);
    GadgetCounts c;
    c.vertices = 4 + f.vertices + (3L * m + 1) + m + m;        // w's, filter, chain u/c/v, sb, sm
    c.edges = 2 + f.edges + 2 + 2L * m + m + m + m + m;        // trigger+bomb, filter, links, chain, drops, entries, connectors
    c.agents = 1 + 1 + f.agents + m + static_cast<std::int64_t>(m) * m;  // r0, r1, fb, b, m-copies
    return c;
}

inline GadgetCounts m_backfire_counts_exact(int m) {
    auto f = filter_counts(m);
    GadgetCounts c;
    std::int64_t per_sub_v = f.vertices + (3L * m + 1) + m + m;
    std::int64_t per_sub_e = f.edges + 2 + 2L * m + m + m + m + m;
    std::int64_t per_sub_a = 1 + f.agents + m + static_cast<std::int64_t>(m) * m;
    c.vertices = 4 + (m + 1) * per_sub_v;
    c.edges = 2 + (m + 1) * per_sub_e;
    c.agents = 1 + (m + 1) * per_sub_a;
    return c;
}

}  // namespace frog
