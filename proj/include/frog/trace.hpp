#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "frog/core.hpp"
#include "frog/engine.hpp"

// Independent replay check of a recorded simulation trace. Replays the event
// list against fresh queues and re-derives every waiting time, so it shares no
// state with the engine that produced the trace.

namespace frog {

inline ValidationReport validate_trace(const SimResult& res, const Instance& inst,
                                       const Profile& profile) {
    ValidationReport rep;
    if (res.trace.empty()) {
        bool any_events = false;
        for (const auto& p : profile.paths)
            if (p && !p->edges.empty()) any_events = true;
        if (any_events) rep.add("trace: empty (was the run recorded with record_trace?)");
        return rep;
    }

    const int n = inst.num_agents();
    struct Slot {
        int agent;
        Time pop_time;
    };
    std::vector<std::deque<Slot>> queues(inst.edges.size());
    std::vector<Time> queue_time(static_cast<std::size_t>(n), -1);
    std::vector<Time> expected_pop(static_cast<std::size_t>(n), -1);
    std::vector<Time> wait_sum(static_cast<std::size_t>(n), 0);
    std::vector<int> event_count(static_cast<std::size_t>(n), 0);
    std::map<std::pair<int, Time>, int> pops_per_step;

    // FIFO at time granularity: along each edge's entry order, pop times never
    // decrease (same-step ties are fine, overtaking across steps is not).
    {
        std::map<int, std::vector<int>> entries;
        std::map<std::pair<int, int>, Time> pop_at;
        for (const Event& ev : res.trace) {
            if (ev.kind == EventKind::Queue)
                entries[ev.edge].push_back(ev.agent);
            else
                pop_at[{ev.edge, ev.agent}] = ev.time;
        }
        for (auto& [edge, order] : entries) {
            Time last = -1;
            for (int a : order) {
                auto it = pop_at.find({edge, a});
                if (it == pop_at.end()) continue;
                if (it->second < last)
                    rep.add("trace: crossover (entry order and pop order disagree) on edge " +
                            std::to_string(edge));
                last = std::max(last, it->second);
            }
        }
    }

    Time prev_time = -1;
    for (const Event& ev : res.trace) {
        if (ev.time < prev_time) rep.add("trace: event times decrease at t=" + std::to_string(ev.time));
        prev_time = std::max(prev_time, ev.time);
        if (!inst.edge_ok(ev.edge) || !inst.agent_ok(ev.agent)) {
            rep.add("trace: dangling event reference");
            continue;
        }
        ++event_count[static_cast<std::size_t>(ev.agent)];
        const Edge& e = inst.edges[static_cast<std::size_t>(ev.edge)];
        auto& q = queues[static_cast<std::size_t>(ev.edge)];
        // slots whose pop step has passed are gone; same-step leavers linger
        while (!q.empty() && q.front().pop_time < ev.time) q.pop_front();

        if (ev.kind == EventKind::Queue) {
            // independent wait recomputation from the replayed queue state
            Time w = queue_wait(static_cast<Time>(q.size()) + 1, e.capacity);
            q.push_back({ev.agent, ev.time + w});
            queue_time[static_cast<std::size_t>(ev.agent)] = ev.time;
            expected_pop[static_cast<std::size_t>(ev.agent)] = ev.time + w;
        } else {
            if (queue_time[static_cast<std::size_t>(ev.agent)] < 0) {
                rep.add("trace: pop without a preceding queue event (agent " + std::to_string(ev.agent) + ")");
                continue;
            }
            int& pops = pops_per_step[{ev.edge, ev.time}];
            if (++pops > e.capacity)
                rep.add("trace: capacity violated on edge " + std::to_string(ev.edge) + " at t=" +
                        std::to_string(ev.time));
            if (expected_pop[static_cast<std::size_t>(ev.agent)] != ev.time)
                rep.add("trace: pop time disagrees with the replayed wait (agent " +
                        std::to_string(ev.agent) + ", expected t=" +
                        std::to_string(expected_pop[static_cast<std::size_t>(ev.agent)]) + ", got t=" +
                        std::to_string(ev.time) + ")");
            // no-crossover: everyone still ahead must leave in this same step,
            // and the popping agent must sit within the first c_e positions
            std::size_t pos = 0;
            bool crossed = false;
            while (pos < q.size() && q[pos].agent != ev.agent) {
                if (q[pos].pop_time != ev.time) {
                    rep.add("trace: crossover (pop overtakes a staying agent) on edge " +
                            std::to_string(ev.edge) + " at t=" + std::to_string(ev.time));
                    crossed = true;
                    break;
                }
                ++pos;
            }
            if (crossed) continue;
            if (pos >= q.size() || static_cast<int>(pos) >= e.capacity) {
                rep.add("trace: pop is not within the queue head block on edge " +
                        std::to_string(ev.edge) + " at t=" + std::to_string(ev.time));
                continue;
            }
            wait_sum[static_cast<std::size_t>(ev.agent)] +=
                ev.time - queue_time[static_cast<std::size_t>(ev.agent)];
            queue_time[static_cast<std::size_t>(ev.agent)] = -1;
        }
    }

    const int budget_cap = 2 * std::max(inst.vertex_count, 1);
    for (int i = 0; i < n; ++i) {
        if (event_count[static_cast<std::size_t>(i)] > budget_cap)
            rep.add("trace: agent " + std::to_string(i) + " exceeds the 2|V| event budget");
        const auto& p = profile.paths[static_cast<std::size_t>(i)];
        if (!p) continue;
        Time fixed = 0;
        for (int e : p->edges) fixed += inst.edges[static_cast<std::size_t>(e)].delay;
        // delay identity: C_i = sum of waits plus fixed delays along the path
        if (res.delay[static_cast<std::size_t>(i)] != wait_sum[static_cast<std::size_t>(i)] + fixed)
            rep.add("trace: delay identity fails for agent " + std::to_string(i) + " (" +
                    std::to_string(res.delay[static_cast<std::size_t>(i)]) + " != " +
                    std::to_string(wait_sum[static_cast<std::size_t>(i)]) + "+" + std::to_string(fixed) + ")");
        if (res.total_wait[static_cast<std::size_t>(i)] != wait_sum[static_cast<std::size_t>(i)])
            rep.add("trace: recorded total_wait differs from replayed waits for agent " + std::to_string(i));
    }
    return rep;
}

}  // namespace frog
