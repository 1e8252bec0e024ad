#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "frog/core.hpp"
#include "frog/engine.hpp"

// Time-stepped engine with a routing callback. One global integer clock; per
// step: transit completions, then decisions (priority order, all reading the
// same end-of-previous-step Snapshot), then queue insertions (priority order),
// then queue releases. Zero-delay edges let an agent progress several times
// within one step, so the phases iterate in micro-rounds; within a round,
// insertions still precede releases and lower-rank pops yield to the queue
// events they unlock, which makes a fixed-profile router reproduce the event
// engine's results exactly.

namespace frog {

// Per-edge congestion as observed over the previous time-step: the peak queue
// length while that step ran. Agents queued and released within one step are
// counted; this is what keeps last-step traffic visible to replanners.
struct Snapshot {
    std::vector<Time> queue_len;

    Time at(int edge) const { return queue_len[static_cast<std::size_t>(edge)]; }
};

struct RouterFinish {};
struct RouterEdge {
    int edge;
};
using RouterChoice = std::variant<RouterEdge, RouterFinish>;

// router(agent, standing vertex, snapshot, step) -> next edge or finish.
using Router = std::function<RouterChoice(int, int, const Snapshot&, Time)>;

struct StepwiseOptions {
    bool record_waits = true;
    bool record_trace = false;
    Time max_time = 1'000'000'000;
};

struct StepwiseOutcome {
    bool timed_out = false;
    SimResult result;                    // delays/waits; waits aligned with walks
    std::vector<std::vector<int>> walks; // edge sequence actually traversed per agent
    std::vector<char> finished;
};

namespace stepdetail {

enum class Phase : std::uint8_t { Unreleased, Standing, Queued, InTransit, Finished };

struct AgentState {
    Phase phase = Phase::Unreleased;
    int vertex = -1;      // standing vertex
    int edge = -1;        // queued or transiting edge
    Time pop_time = 0;    // scheduled release from the queue
    Time arrive_time = 0; // end of fixed-delay transit
    Time queue_time = 0;
};

// A queue slot outlives its pop by the rest of that step: later same-step
// arrivals count the leaving agent as congestion.
struct Slot {
    int agent;
    Time pop_time;
};

}  // namespace stepdetail

// Full engine state, copyable so searches can branch mid-run.
class StepwiseEngine {
  public:
    StepwiseEngine(const Instance& inst, const StepwiseOptions& opt = {})
        : inst_(&inst), opt_(opt) {
        const int n = inst.num_agents();
        agents_.resize(static_cast<std::size_t>(n));
        queues_.resize(inst.edges.size());
        peak_.assign(inst.edges.size(), 0);
        snapshot_.queue_len.assign(inst.edges.size(), 0);
        out_.result.delay.assign(static_cast<std::size_t>(n), 0);
        out_.result.completion.assign(static_cast<std::size_t>(n), 0);
        out_.result.total_wait.assign(static_cast<std::size_t>(n), 0);
        if (opt.record_waits) out_.result.waits.assign(static_cast<std::size_t>(n), {});
        out_.walks.assign(static_cast<std::size_t>(n), {});
        out_.finished.assign(static_cast<std::size_t>(n), 0);
        by_rank_ = inst.priority.to_list();
        clock_ = 0;
        unfinished_ = 0;
        for (int i = 0; i < n; ++i) {
            const Agent& a = inst.agents[static_cast<std::size_t>(i)];
            if (a.source == a.sink) {
                agents_[static_cast<std::size_t>(i)].phase = stepdetail::Phase::Finished;
                out_.result.completion[static_cast<std::size_t>(i)] = a.release_time;
                out_.finished[static_cast<std::size_t>(i)] = 1;
            } else {
                ++unfinished_;
            }
        }
    }

    Time clock() const { return clock_; }
    bool done() const { return unfinished_ == 0; }
    const Snapshot& snapshot() const { return snapshot_; }
    const StepwiseOutcome& outcome() const { return out_; }
    StepwiseOutcome take_outcome() { return std::move(out_); }
    const Instance& instance() const { return *inst_; }

    bool standing(int agent) const {
        return agents_[static_cast<std::size_t>(agent)].phase == stepdetail::Phase::Standing;
    }
    int standing_vertex(int agent) const { return agents_[static_cast<std::size_t>(agent)].vertex; }

    // Runs one whole time-step. The router is consulted for every agent that
    // stands at a vertex during the step; every call sees the same snapshot.
    void step(const Router& route) {
        if (clock_ > opt_.max_time)
            throw SimulationError("stepwise simulation exceeded max_time");

        // phase 1 seed: transits that end now, plus fresh releases
        for (int i : by_rank_) {
            auto& st = agents_[static_cast<std::size_t>(i)];
            if (st.phase == stepdetail::Phase::Unreleased &&
                (*inst_).agents[static_cast<std::size_t>(i)].release_time == clock_) {
                st.phase = stepdetail::Phase::Standing;
                st.vertex = (*inst_).agents[static_cast<std::size_t>(i)].source;
            } else if (st.phase == stepdetail::Phase::InTransit && st.arrive_time == clock_) {
                arrive(i);
            }
        }

        // Micro-rounds: decisions and insertions for every standing agent come
        // first (priority order); then exactly one due pop runs, highest
        // priority first. A zero-delay transit puts its agent back in the
        // decision pool, which outranks the remaining pops of this step — the
        // same discipline as the event heap, where a freshly scheduled queue
        // event at time t precedes every pending pop at time t.
        long rounds = 0;
        const long round_cap =
            (2L * std::max(inst_->vertex_count, 1) + 2) * std::max(inst_->num_agents(), 1);
        for (;;) {
            if (++rounds > round_cap)
                throw SimulationError("zero-delay progress exceeded the per-step round budget");

            // phases 2+3: route all standing agents, then insert in priority order
            std::vector<std::pair<int, int>> inserts;  // (agent, edge), rank order
            for (int i : by_rank_) {
                auto& st = agents_[static_cast<std::size_t>(i)];
                if (st.phase != stepdetail::Phase::Standing) continue;
                RouterChoice choice = route(i, st.vertex, snapshot_, clock_);
                if (std::holds_alternative<RouterFinish>(choice)) {
                    if (st.vertex != (*inst_).agents[static_cast<std::size_t>(i)].sink)
                        throw SimulationError("router finished agent " + std::to_string(i) +
                                              " away from its sink");
                    finish(i, clock_);
                } else {
                    int e = std::get<RouterEdge>(choice).edge;
                    if (!inst_->edge_ok(e) || inst_->edges[static_cast<std::size_t>(e)].tail != st.vertex)
                        throw SimulationError("router returned an edge not incident to the agent's vertex");
                    inserts.emplace_back(i, e);
                }
            }
            for (auto [i, e] : inserts) {
                auto& st = agents_[static_cast<std::size_t>(i)];
                auto& q = queues_[static_cast<std::size_t>(e)];
                while (!q.empty() && q.front().pop_time < clock_) q.pop_front();
                Time w = queue_wait(static_cast<Time>(q.size()) + 1,
                                    inst_->edges[static_cast<std::size_t>(e)].capacity);
                q.push_back({i, clock_ + w});
                peak_[static_cast<std::size_t>(e)] =
                    std::max<Time>(peak_[static_cast<std::size_t>(e)], static_cast<Time>(q.size()));
                st.phase = stepdetail::Phase::Queued;
                st.edge = e;
                st.queue_time = clock_;
                st.pop_time = clock_ + w;
                out_.walks[static_cast<std::size_t>(i)].push_back(e);
                if (opt_.record_trace)
                    out_.result.trace.push_back({clock_, EventKind::Queue, i, e});
            }
            if (!inserts.empty()) continue;

            // phase 4: one due pop, highest priority first; the slot stays in
            // the queue so later same-step arrivals still count it
            int popper = -1;
            for (int i : by_rank_) {
                auto& st = agents_[static_cast<std::size_t>(i)];
                if (st.phase == stepdetail::Phase::Queued && st.pop_time == clock_) {
                    popper = i;
                    break;
                }
            }
            if (popper < 0) break;
            auto& st = agents_[static_cast<std::size_t>(popper)];
            auto& q = queues_[static_cast<std::size_t>(st.edge)];
            const Edge& e = inst_->edges[static_cast<std::size_t>(st.edge)];
            std::size_t pos = 0;
            while (pos < q.size() && q[pos].agent != popper) {
                if (q[pos].pop_time != clock_)
                    throw SimulationError("stepwise pop skips a non-due agent on edge " +
                                          std::to_string(st.edge));
                ++pos;
            }
            if (pos >= q.size() || static_cast<int>(pos) >= e.capacity)
                throw SimulationError("stepwise pop is not within the queue head block on edge " +
                                      std::to_string(st.edge));
            out_.result.total_wait[static_cast<std::size_t>(popper)] += clock_ - st.queue_time;
            if (opt_.record_waits)
                out_.result.waits[static_cast<std::size_t>(popper)].push_back(clock_ - st.queue_time);
            if (opt_.record_trace)
                out_.result.trace.push_back({clock_, EventKind::Pop, popper, st.edge});
            st.phase = stepdetail::Phase::InTransit;
            st.arrive_time = clock_ + e.delay;
            if (e.delay == 0) arrive(popper);
        }

        // close the step: the peaks observed here become the next snapshot;
        // slots that popped this step disappear from the residual occupancy
        for (std::size_t e = 0; e < queues_.size(); ++e) {
            snapshot_.queue_len[e] = peak_[e];
            auto& q = queues_[e];
            while (!q.empty() && q.front().pop_time <= clock_) q.pop_front();
            peak_[e] = static_cast<Time>(q.size());
        }
        ++clock_;
    }

  private:
    void arrive(int i) {
        auto& st = agents_[static_cast<std::size_t>(i)];
        st.phase = stepdetail::Phase::Standing;
        st.vertex = inst_->edges[static_cast<std::size_t>(st.edge)].head;
        st.edge = -1;
    }

    void finish(int i, Time t) {
        auto& st = agents_[static_cast<std::size_t>(i)];
        st.phase = stepdetail::Phase::Finished;
        out_.result.completion[static_cast<std::size_t>(i)] = t;
        out_.result.delay[static_cast<std::size_t>(i)] =
            t - inst_->agents[static_cast<std::size_t>(i)].release_time;
        out_.result.max_time = std::max(out_.result.max_time, t);
        out_.finished[static_cast<std::size_t>(i)] = 1;
        --unfinished_;
    }

    friend struct StepwiseStateKey;

    const Instance* inst_;
    StepwiseOptions opt_;
    std::vector<stepdetail::AgentState> agents_;
    std::vector<std::deque<stepdetail::Slot>> queues_;
    std::vector<Time> peak_;
    Snapshot snapshot_;
    std::vector<int> by_rank_;
    Time clock_ = 0;
    int unfinished_ = 0;
    StepwiseOutcome out_;
};

// Clock-independent encoding of the live configuration: agent phases with
// remaining times, queue contents in order, and the last snapshot. Two equal
// keys after the last release evolve identically, so a repeat proves a cycle.
struct StepwiseStateKey {
    std::vector<std::int64_t> words;

    static StepwiseStateKey of(const StepwiseEngine& eng) {
        StepwiseStateKey k;
        const Time now = eng.clock();
        for (const auto& st : eng.agents_) {
            k.words.push_back(static_cast<std::int64_t>(st.phase));
            k.words.push_back(st.vertex);
            k.words.push_back(st.edge);
            k.words.push_back(st.phase == stepdetail::Phase::Queued ? st.pop_time - now : 0);
            k.words.push_back(st.phase == stepdetail::Phase::InTransit ? st.arrive_time - now : 0);
        }
        for (const auto& q : eng.queues_) {
            k.words.push_back(-1);
            for (const auto& slot : q)
                if (slot.pop_time >= now) k.words.push_back(slot.agent);
        }
        k.words.push_back(-2);
        for (Time v : eng.snapshot_.queue_len) k.words.push_back(v);
        return k;
    }

    bool operator==(const StepwiseStateKey&) const = default;
    bool operator<(const StepwiseStateKey& o) const { return words < o.words; }
};

// Runs the stepwise engine to completion under a router.
inline std::variant<SimResult, StepwiseOutcome> run_stepwise(const Instance& inst, const Router& route,
                                                             Time horizon,
                                                             const StepwiseOptions& opt = {}) {
    if (horizon < 1) throw SimulationError("horizon must be >= 1");
    StepwiseEngine eng(inst, opt);
    while (!eng.done() && eng.clock() < horizon) eng.step(route);
    StepwiseOutcome out = eng.take_outcome();
    if (!eng.done()) {
        out.timed_out = true;
        return out;
    }
    return out.result;
}

// Router that follows a fixed complete profile.
inline Router profile_router(const Instance& inst, const Profile& profile) {
    auto positions = std::make_shared<std::vector<std::size_t>>(inst.agents.size(), 0);
    return [&inst, &profile, positions](int agent, int vertex, const Snapshot&, Time) -> RouterChoice {
        const Path& p = *profile.paths[static_cast<std::size_t>(agent)];
        auto& pos = (*positions)[static_cast<std::size_t>(agent)];
        if (pos >= p.edges.size()) {
            if (vertex != inst.agents[static_cast<std::size_t>(agent)].sink)
                throw SimulationError("profile ended before the sink");
            return RouterFinish{};
        }
        return RouterEdge{p.edges[pos++]};
    };
}

// simulate_stepwise: the fixed-profile entry point mirroring simulate().
inline std::variant<SimResult, StepwiseOutcome> simulate_stepwise(const Instance& inst,
                                                                  const Profile& profile, Time horizon,
                                                                  const StepwiseOptions& opt = {}) {
    auto rep = validate_profile(inst, profile, true);
    if (!rep.ok()) throw SimulationError("invalid profile: " + rep.joined());
    return run_stepwise(inst, profile_router(inst, profile), horizon, opt);
}

}  // namespace frog
