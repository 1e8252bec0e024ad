#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frog/engine.hpp"
#include "frog/gadgets.hpp"
#include "frog/trace.hpp"
#include "frog/strategy.hpp"
#include "helpers.hpp"

using namespace frog;

TEST_CASE("queue_wait") {
    CHECK(queue_wait(1, 1) == 0);
    CHECK(queue_wait(1, 7) == 0);
    CHECK(queue_wait(5, 2) == 2);
    CHECK(queue_wait(2, 1) == 1);
    CHECK(queue_wait(6, 3) == 1);
}

TEST_CASE("simulate: single agent chain sums fixed delays") {
    Instance inst = make_instance(4, {Edge{0, 0, 1, 1, 1}, Edge{1, 1, 2, 1, 10}, Edge{2, 2, 3, 1, 1}},
                                  {Agent{0, 0, 3, 0}}, {0});
    Profile p = Profile::empty(1);
    p.paths[0] = Path{0, {0, 1, 2}};
    SimResult res = simulate(inst, p);
    CHECK(res.delay[0] == 12);
    CHECK(res.total_wait[0] == 0);
}

TEST_CASE("simulate: two agents share a capacity-1 edge") {
    Instance inst = make_instance(2, {Edge{0, 0, 1, 1, 5}}, {Agent{0, 0, 1, 0}, Agent{1, 0, 1, 0}}, {0, 1});
    Profile p = Profile::empty(2);
    p.paths[0] = Path{0, {0}};
    p.paths[1] = Path{1, {0}};
    SimResult res = simulate(inst, p);
    CHECK(res.delay[0] == 5);
    CHECK(res.delay[1] == 6);
}

TEST_CASE("simulate: priority swap swaps queue order") {
    Instance a = make_instance(2, {Edge{0, 0, 1, 1, 5}}, {Agent{0, 0, 1, 0}, Agent{1, 0, 1, 0}}, {0, 1});
    Instance b = make_instance(2, {Edge{0, 0, 1, 1, 5}}, {Agent{0, 0, 1, 0}, Agent{1, 0, 1, 0}}, {1, 0});
    Profile p = Profile::empty(2);
    p.paths[0] = Path{0, {0}};
    p.paths[1] = Path{1, {0}};
    SimOptions opt;
    opt.record_trace = true;
    SimResult ra = simulate(a, p, opt);
    SimResult rb = simulate(b, p, opt);
    CHECK(ra.delay[0] == 5);
    CHECK(ra.delay[1] == 6);
    CHECK(rb.delay[0] == 6);
    CHECK(rb.delay[1] == 5);
    // the first pop goes to the higher-priority agent in both runs
    for (const Event& ev : ra.trace)
        if (ev.kind == EventKind::Pop) {
            CHECK(ev.agent == 0);
            break;
        }
    for (const Event& ev : rb.trace)
        if (ev.kind == EventKind::Pop) {
            CHECK(ev.agent == 1);
            break;
        }
}

TEST_CASE("simulate: release time offsets are not charged to the agent") {
    Instance inst = make_instance(2, {Edge{0, 0, 1, 1, 4}}, {Agent{0, 0, 1, 7}}, {0});
    Profile p = Profile::empty(1);
    p.paths[0] = Path{0, {0}};
    SimResult res = simulate(inst, p);
    CHECK(res.completion[0] == 11);
    CHECK(res.delay[0] == 4);
}

TEST_CASE("simulate: empty path for source == sink") {
    Instance inst = make_instance(2, {Edge{0, 0, 1, 1, 1}}, {Agent{0, 1, 1, 3}}, {0});
    Profile p = Profile::empty(1);
    p.paths[0] = Path{0, {}};
    SimResult res = simulate(inst, p);
    CHECK(res.delay[0] == 0);
    CHECK(res.completion[0] == 3);
}

TEST_CASE("pursuer-evader payoff table") {
    auto pe = gen_pursuer_evader();
    SimOptions opt;
    opt.record_trace = true;

    auto run = [&](bool pu, bool eu) {
        Profile p = pursuer_evader_profile(pe, pu, eu);
        SimResult res = simulate(pe.inst, p, opt);
        CHECK(validate_trace(res, pe.inst, p).ok());
        return std::pair<Time, Time>{res.delay[0], res.delay[1]};
    };
    CHECK(run(true, true) == std::pair<Time, Time>{12, 13});
    CHECK(run(false, false) == std::pair<Time, Time>{12, 13});
    CHECK(run(true, false) == std::pair<Time, Time>{13, 12});
    CHECK(run(false, true) == std::pair<Time, Time>{13, 12});
}

TEST_CASE("simulate: determinism on random instances") {
    frogtest::Rng rng(33);
    for (int k = 0; k < 30; ++k) {
        Instance inst = frogtest::random_instance(rng, 8, 5, 8);
        Profile p = frogtest::random_profile(rng, inst);
        SimResult a = simulate(inst, p);
        SimResult b = simulate(inst, p);
        CHECK(a == b);
        CHECK(a.waits == b.waits);
    }
}

TEST_CASE("validate_trace: clean runs pass, corrupted traces fail") {
    frogtest::Rng rng(44);
    SimOptions opt;
    opt.record_trace = true;
    for (int k = 0; k < 60; ++k) {
        Instance inst = frogtest::random_instance(rng, 7, 4, 6);
        Profile p = frogtest::random_profile(rng, inst);
        SimResult res = simulate(inst, p, opt);
        CHECK(validate_trace(res, inst, p).ok());

        // delay identity: C_i equals waits plus fixed delays along the path
        for (int i = 0; i < inst.num_agents(); ++i) {
            Time fixed = 0;
            for (int e : p.paths[static_cast<std::size_t>(i)]->edges)
                fixed += inst.edges[static_cast<std::size_t>(e)].delay;
            CHECK(res.delay[static_cast<std::size_t>(i)] ==
                  res.total_wait[static_cast<std::size_t>(i)] + fixed);
            // lower bound: at least the free-flow distance
            auto ff = free_flow_distance(inst, inst.agents[static_cast<std::size_t>(i)].source,
                                         inst.agents[static_cast<std::size_t>(i)].sink);
            REQUIRE(ff.has_value());
            CHECK(res.delay[static_cast<std::size_t>(i)] >= *ff);
        }
    }
}

TEST_CASE("validate_trace: synthetic capacity violation") {
    Instance inst = make_instance(2, {Edge{0, 0, 1, 1, 1}}, {Agent{0, 0, 1, 0}, Agent{1, 0, 1, 0}}, {0, 1});
    Profile p = Profile::empty(2);
    p.paths[0] = Path{0, {0}};
    p.paths[1] = Path{1, {0}};
    SimOptions opt;
    opt.record_trace = true;
    SimResult res = simulate(inst, p, opt);
    REQUIRE(validate_trace(res, inst, p).ok());
    // force both pops into the same step on the capacity-1 edge
    SimResult corrupt = res;
    for (Event& ev : corrupt.trace)
        if (ev.kind == EventKind::Pop) ev.time = 0;
    corrupt.delay = {1, 1};
    corrupt.total_wait = {0, 0};
    auto rep = validate_trace(corrupt, inst, p);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.joined().find("capacity violated") != std::string::npos);
}

TEST_CASE("validate_trace: synthetic crossover") {
    Instance inst = make_instance(2, {Edge{0, 0, 1, 1, 1}}, {Agent{0, 0, 1, 0}, Agent{1, 0, 1, 0}}, {0, 1});
    Profile p = Profile::empty(2);
    p.paths[0] = Path{0, {0}};
    p.paths[1] = Path{1, {0}};
    SimOptions opt;
    opt.record_trace = true;
    SimResult res = simulate(inst, p, opt);
    SimResult corrupt = res;
    // swap the two queue events: pop order then disagrees with entry order
    int first_queue = -1;
    for (std::size_t i = 0; i < corrupt.trace.size(); ++i) {
        if (corrupt.trace[i].kind == EventKind::Queue) {
            if (first_queue < 0) {
                first_queue = static_cast<int>(i);
            } else {
                std::swap(corrupt.trace[static_cast<std::size_t>(first_queue)].agent,
                          corrupt.trace[i].agent);
                break;
            }
        }
    }
    auto rep = validate_trace(corrupt, inst, p);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.joined().find("crossover") != std::string::npos);
}

TEST_CASE("simulate: event budget guards runaway profiles") {
    // a valid profile cannot exceed the budget; rejecting an invalid one is
    // the profile validator's job
    Instance inst = make_instance(3, {Edge{0, 0, 1, 1, 0}, Edge{1, 1, 2, 1, 0}},
                                  {Agent{0, 0, 2, 0}}, {0});
    Profile p = Profile::empty(1);
    p.paths[0] = Path{0, {0, 1}};
    SimResult res = simulate(inst, p);
    CHECK(res.delay[0] == 0);  // zero-delay chain crossed within one step
}
