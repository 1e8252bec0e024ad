#pragma once

#include <algorithm>
#include <deque>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "frog/core.hpp"
#include "frog/validate.hpp"

// Event-heap simulation of a fixed strategy profile. Heap order is
// (time, kind, priority): queue events precede pop events at equal times so
// that current congestion is counted, and simultaneous events of one kind run
// in tie-break priority order. An agent that pops at step t still occupies
// its queue slot for the rest of step t: agents arriving later within the
// same step (releases are seeded first, but zero-delay edges relay agents
// mid-step) count it as congestion, exactly as step-start arrivals would.
// Queue slots are therefore purged lazily, by timestamp, rather than removed
// when the pop executes. Same-step pops always form a prefix of the queue of
// at most c_e agents, which the pop handler checks (the runtime form of the
// no-crossover argument).

namespace frog {

enum class EventKind : std::uint8_t { Queue = 0, Pop = 1 };

struct Event {
    Time time = 0;
    EventKind kind = EventKind::Queue;
    int agent = 0;
    int edge = 0;
};

// Waiting time of the queue-tail agent: the arriving agent counts itself.
inline Time queue_wait(Time queue_length, int capacity) {
    return (queue_length - 1) / capacity;
}

struct SimOptions {
    bool record_waits = true;   // per-agent per-path-position waits
    bool record_trace = false;  // full executed event list (large)
    Time max_time = 1'000'000'000;  // abort guard for runaway clocks
};

struct SimResult {
    std::vector<Time> delay;        // completion_time - release_time
    std::vector<Time> completion;   // absolute completion time
    std::vector<Time> total_wait;   // sum of queue waits along the path
    // waits[i][k] = wait of agent i on the k-th edge of its path (if recorded).
    std::vector<std::vector<Time>> waits;
    std::vector<Event> trace;       // executed events in order (if recorded)
    Time max_time = 0;              // time of the last executed event

    bool operator==(const SimResult& o) const {
        return delay == o.delay && completion == o.completion && total_wait == o.total_wait;
    }
};

namespace detail {

// (time, kind, priority) packed for cheap heap comparisons: the kind bit sits
// above the rank so queue events order before pops at equal times.
struct HeapEntry {
    Time time;
    std::uint32_t key;  // (kind << 31) | priority rank
    int agent;
    int edge;
    int path_pos;

    static std::uint32_t pack(std::uint8_t kind, int rank) {
        return (static_cast<std::uint32_t>(kind) << 31) | static_cast<std::uint32_t>(rank);
    }
    std::uint8_t kind() const { return static_cast<std::uint8_t>(key >> 31); }
    int rank() const { return static_cast<int>(key & 0x7fffffffu); }
};

struct HeapAfter {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.key > b.key;
    }
};

// 4-ary min-heap over (time, key); shallower and more cache-friendly than the
// binary std::priority_queue at the event counts the engine works through.
class EventHeap {
  public:
    EventHeap() = default;
    explicit EventHeap(std::vector<HeapEntry> entries) : h_(std::move(entries)) {
        for (std::size_t i = h_.size(); i-- > 0;) sift_down(i);
    }

    bool empty() const { return h_.empty(); }
    std::size_t size() const { return h_.size(); }
    void reserve(std::size_t n) { h_.reserve(n); }
    const HeapEntry& top() const { return h_.front(); }

    void push(const HeapEntry& e) {
        h_.push_back(e);
        std::size_t i = h_.size() - 1;
        while (i > 0) {
            std::size_t parent = (i - 1) >> 2;
            if (!before(h_[i], h_[parent])) break;
            std::swap(h_[i], h_[parent]);
            i = parent;
        }
    }

    void pop() {
        h_.front() = h_.back();
        h_.pop_back();
        if (!h_.empty()) sift_down(0);
    }

  private:
    static bool before(const HeapEntry& a, const HeapEntry& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.key < b.key;
    }

    void sift_down(std::size_t i) {
        const std::size_t n = h_.size();
        for (;;) {
            std::size_t first = (i << 2) + 1;
            if (first >= n) return;
            std::size_t best = first;
            std::size_t last = std::min(first + 4, n);
            for (std::size_t c = first + 1; c < last; ++c)
                if (before(h_[c], h_[best])) best = c;
            if (!before(h_[best], h_[i])) return;
            std::swap(h_[i], h_[best]);
            i = best;
        }
    }

    std::vector<HeapEntry> h_;
};

}  // namespace detail

inline SimResult simulate(const Instance& inst, const Profile& profile, const SimOptions& opt = {}) {
    const int n = inst.num_agents();
    {
        auto rep = validate_profile(inst, profile, /*require_complete=*/true);
        if (!rep.ok()) throw SimulationError("invalid profile: " + rep.joined());
    }

    SimResult res;
    res.delay.assign(static_cast<std::size_t>(n), 0);
    res.completion.assign(static_cast<std::size_t>(n), 0);
    res.total_wait.assign(static_cast<std::size_t>(n), 0);
    if (opt.record_waits) res.waits.assign(static_cast<std::size_t>(n), {});

    struct Slot {
        int agent;
        Time pop_time;
    };
    detail::EventHeap heap;
    std::vector<std::deque<Slot>> queues(inst.edges.size());
    std::vector<Time> queue_time(static_cast<std::size_t>(n), 0);   // last queue-event time per agent
    std::vector<int> event_budget(static_cast<std::size_t>(n), 0);
    // per-edge pop throughput check for the current time-step
    std::vector<Time> last_pop_time(inst.edges.size(), -1);
    std::vector<int> pops_this_step(inst.edges.size(), 0);

    const int budget_cap = 2 * std::max(inst.vertex_count, 1);

    for (int i = 0; i < n; ++i) {
        const Agent& a = inst.agents[static_cast<std::size_t>(i)];
        const Path& p = *profile.paths[static_cast<std::size_t>(i)];
        if (opt.record_waits) res.waits[static_cast<std::size_t>(i)].assign(p.edges.size(), 0);
        if (p.edges.empty()) {
            res.completion[static_cast<std::size_t>(i)] = a.release_time;
            res.delay[static_cast<std::size_t>(i)] = 0;
            continue;
        }
        heap.push({a.release_time, detail::HeapEntry::pack(0, inst.priority.rank[static_cast<std::size_t>(i)]), i, p.edges.front(), 0});
    }

    while (!heap.empty()) {
        detail::HeapEntry ev = heap.top();
        heap.pop();
        if (ev.time > opt.max_time)
            throw SimulationError("simulation exceeded max_time " + std::to_string(opt.max_time));
        res.max_time = std::max(res.max_time, ev.time);
        if (++event_budget[static_cast<std::size_t>(ev.agent)] > budget_cap)
            throw SimulationError("agent " + std::to_string(ev.agent) + " exceeded the 2|V| event budget");
        if (opt.record_trace)
            res.trace.push_back({ev.time, static_cast<EventKind>(ev.kind()), ev.agent, ev.edge});

        const Edge& e = inst.edges[static_cast<std::size_t>(ev.edge)];
        auto& q = queues[static_cast<std::size_t>(ev.edge)];
        const Path& p = *profile.paths[static_cast<std::size_t>(ev.agent)];

        // agents whose pop step has passed have left for good
        while (!q.empty() && q.front().pop_time < ev.time) q.pop_front();

        if (ev.kind() == 0) {
            Time w = queue_wait(static_cast<Time>(q.size()) + 1, e.capacity);
            q.push_back({ev.agent, ev.time + w});
            queue_time[static_cast<std::size_t>(ev.agent)] = ev.time;
            heap.push({ev.time + w, detail::HeapEntry::pack(1, ev.rank()), ev.agent, ev.edge, ev.path_pos});
        } else {
            // the popping agent sits in the first c_e positions and everyone
            // ahead of it leaves in this very step
            std::size_t pos = 0;
            while (pos < q.size() && q[pos].agent != ev.agent) {
                if (q[pos].pop_time != ev.time)
                    throw SimulationError("pop skips a non-due agent on edge " + std::to_string(ev.edge));
                ++pos;
            }
            if (pos >= q.size() || static_cast<int>(pos) >= e.capacity)
                throw SimulationError("pop is not within the queue head block on edge " +
                                      std::to_string(ev.edge) + " (agent " + std::to_string(ev.agent) + ")");
            if (last_pop_time[static_cast<std::size_t>(ev.edge)] != ev.time) {
                last_pop_time[static_cast<std::size_t>(ev.edge)] = ev.time;
                pops_this_step[static_cast<std::size_t>(ev.edge)] = 0;
            }
            if (++pops_this_step[static_cast<std::size_t>(ev.edge)] > e.capacity)
                throw SimulationError("per-step capacity exceeded on edge " + std::to_string(ev.edge));

            Time w = ev.time - queue_time[static_cast<std::size_t>(ev.agent)];
            res.total_wait[static_cast<std::size_t>(ev.agent)] += w;
            if (opt.record_waits)
                res.waits[static_cast<std::size_t>(ev.agent)][static_cast<std::size_t>(ev.path_pos)] = w;

            if (ev.path_pos + 1 == static_cast<int>(p.edges.size())) {
                Time done = ev.time + e.delay;
                res.completion[static_cast<std::size_t>(ev.agent)] = done;
                res.delay[static_cast<std::size_t>(ev.agent)] =
                    done - inst.agents[static_cast<std::size_t>(ev.agent)].release_time;
                res.max_time = std::max(res.max_time, done);
            } else {
                heap.push({ev.time + e.delay, detail::HeapEntry::pack(0, ev.rank()), ev.agent,
                           p.edges[static_cast<std::size_t>(ev.path_pos + 1)], ev.path_pos + 1});
            }
        }
    }
    return res;
}

// Total delay of a complete profile.
inline Time total_delay(const SimResult& res) {
    Time t = 0;
    for (Time d : res.delay) t += d;
    return t;
}

}  // namespace frog
