#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frog/gadgets.hpp"
#include "frog/stepwise.hpp"
#include "helpers.hpp"

using namespace frog;

namespace {

SimResult run_fixed(const Instance& inst, const Profile& p, bool waits = true) {
    StepwiseOptions opt;
    opt.record_waits = waits;
    auto r = simulate_stepwise(inst, p, 1'000'000, opt);
    REQUIRE(std::holds_alternative<SimResult>(r));
    return std::get<SimResult>(r);
}

}  // namespace

TEST_CASE("stepwise equals event engine on the pursuer-evader game") {
    auto pe = gen_pursuer_evader();
    for (bool pu : {true, false}) {
        for (bool eu : {true, false}) {
            Profile p = pursuer_evader_profile(pe, pu, eu);
            SimResult heap = simulate(pe.inst, p);
            SimResult step = run_fixed(pe.inst, p);
            CHECK(heap == step);
            CHECK(heap.waits == step.waits);
        }
    }
}

TEST_CASE("stepwise: single agent free flow") {
    Instance inst = make_instance(3, {Edge{0, 0, 1, 1, 2}, Edge{1, 1, 2, 1, 3}},
                                  {Agent{0, 0, 2, 1}}, {0});
    Profile p = Profile::empty(1);
    p.paths[0] = Path{0, {0, 1}};
    SimResult res = run_fixed(inst, p);
    CHECK(res.delay[0] == 5);
    CHECK(res.completion[0] == 6);
}

TEST_CASE("stepwise: timeout reported when an agent cannot finish in time") {
    Instance inst = make_instance(2, {Edge{0, 0, 1, 1, 50}}, {Agent{0, 0, 1, 0}}, {0});
    Profile p = Profile::empty(1);
    p.paths[0] = Path{0, {0}};
    auto r = simulate_stepwise(inst, p, 10);
    REQUIRE(std::holds_alternative<StepwiseOutcome>(r));
    CHECK(std::get<StepwiseOutcome>(r).timed_out);
}

TEST_CASE("stepwise: router contract violations rejected") {
    Instance inst = make_instance(3, {Edge{0, 0, 1, 1, 1}, Edge{1, 1, 2, 1, 1}},
                                  {Agent{0, 0, 2, 0}}, {0});
    Router bad_edge = [&](int, int, const Snapshot&, Time) -> RouterChoice {
        return RouterEdge{1};  // not incident to the start vertex
    };
    CHECK_THROWS_AS(run_stepwise(inst, bad_edge, 100), SimulationError);
    Router early_finish = [&](int, int, const Snapshot&, Time) -> RouterChoice {
        return RouterFinish{};  // away from the sink
    };
    CHECK_THROWS_AS(run_stepwise(inst, early_finish, 100), SimulationError);
}

TEST_CASE("stepwise: zero-delay cross-edge ordering matches the event heap") {
    // Agent 0 crosses a zero-delay edge and reaches edge 2's queue in the same
    // step in which lower-priority agent 1 is due to pop from it; the heap
    // discipline counts agent 1 as still queued.
    Instance inst = make_instance(
        4,
        {Edge{0, 0, 1, 1, 0}, Edge{1, 2, 1, 1, 1}, Edge{2, 1, 3, 1, 4}},
        {Agent{0, 0, 3, 1}, Agent{1, 2, 3, 0}}, {0, 1});
    Profile p = Profile::empty(2);
    p.paths[0] = Path{0, {0, 2}};
    p.paths[1] = Path{1, {1, 2}};
    SimResult heap = simulate(inst, p);
    SimResult step = run_fixed(inst, p);
    CHECK(heap == step);
    CHECK(heap.waits == step.waits);
    // agent 1 pops edge 1 at t=0, queues edge 2 at t=1; agent 0 releases at 1,
    // crosses edge 0 instantly and queues edge 2 at t=1 behind nobody... the
    // exact outcome is whatever the event heap says; equality is the contract.
}

TEST_CASE("engine equivalence: 200 random instances") {
    frogtest::Rng rng(55);
    int checked = 0;
    while (checked < 200) {
        Instance inst = frogtest::random_instance(rng, 8, 5, 8);
        Profile p = frogtest::random_profile(rng, inst);
        SimResult heap = simulate(inst, p);
        SimResult step = run_fixed(inst, p);
        CHECK(heap.delay == step.delay);
        CHECK(heap.completion == step.completion);
        CHECK(heap.total_wait == step.total_wait);
        CHECK(heap.waits == step.waits);
        ++checked;
    }
}

TEST_CASE("stepwise: snapshot sees peak congestion of the previous step") {
    // two agents queue and pop a capacity-1 zero-delay edge within one step;
    // the next step's snapshot still reports the transient queue of length 2
    Instance inst = make_instance(2, {Edge{0, 0, 1, 1, 0}},
                                  {Agent{0, 0, 1, 0}, Agent{1, 0, 1, 0}}, {0, 1});
    Profile p = Profile::empty(2);
    p.paths[0] = Path{0, {0}};
    p.paths[1] = Path{1, {0}};
    StepwiseEngine engine(inst);
    Router route = profile_router(inst, p);
    engine.step(route);
    CHECK(engine.snapshot().at(0) == 2);
}
