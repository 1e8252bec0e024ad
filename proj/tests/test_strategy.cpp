#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frog/engine.hpp"
#include "frog/gadgets.hpp"
#include "frog/strategy.hpp"
#include "helpers.hpp"

using namespace frog;

TEST_CASE("free_flow_distance: chain") {
    Instance inst = make_instance(4, {Edge{0, 0, 1, 1, 1}, Edge{1, 1, 2, 1, 10}, Edge{2, 2, 3, 1, 1}},
                                  {Agent{0, 0, 3, 0}}, {0});
    CHECK(free_flow_distance(inst, 0, 3) == Time{12});
    CHECK_FALSE(free_flow_distance(inst, 3, 0).has_value());
}

TEST_CASE("free_flow_distance: pursuer equals uncongested delay") {
    auto pe = gen_pursuer_evader();
    CHECK(free_flow_distance(pe.inst, pe.inst.agents[0].source, pe.inst.agents[0].sink) == Time{12});
}

TEST_CASE("free_flow_distance vs exhaustive enumeration") {
    frogtest::Rng rng(77);
    for (int k = 0; k < 60; ++k) {
        Instance inst = frogtest::random_instance(rng, 8, 3, 8);
        for (int a = 0; a < inst.num_agents(); ++a) {
            auto d = free_flow_distance(inst, inst.agents[static_cast<std::size_t>(a)].source,
                                        inst.agents[static_cast<std::size_t>(a)].sink);
            auto naive = frogtest::naive_free_flow(inst, inst.agents[static_cast<std::size_t>(a)].source,
                                                   inst.agents[static_cast<std::size_t>(a)].sink);
            CHECK(d == naive);
        }
    }
}

TEST_CASE("enumerate_simple_paths: chain has exactly one path") {
    Instance inst = make_instance(3, {Edge{0, 0, 1, 1, 1}, Edge{1, 1, 2, 1, 1}}, {Agent{0, 0, 2, 0}}, {0});
    PathSet set = enumerate_simple_paths(inst, 0, 100);
    REQUIRE(set.paths.size() == 1);
    CHECK(set.paths[0].edges == std::vector<int>{0, 1});
    CHECK_FALSE(set.truncated);
}

TEST_CASE("enumerate_simple_paths: pursuer and evader have two strategies each") {
    auto pe = gen_pursuer_evader();
    CHECK(enumerate_simple_paths(pe.inst, 0, 100).paths.size() == 2);
    CHECK(enumerate_simple_paths(pe.inst, 1, 100).paths.size() == 2);
    for (int a = 2; a < 8; ++a) CHECK(enumerate_simple_paths(pe.inst, a, 100).paths.size() == 1);
}

TEST_CASE("enumerate_simple_paths: count equals independent recursion") {
    frogtest::Rng rng(88);
    for (int k = 0; k < 80; ++k) {
        Instance inst = frogtest::random_instance(rng, 7, 3, 9);
        for (int a = 0; a < inst.num_agents(); ++a) {
            PathSet set = enumerate_simple_paths(inst, a, 1'000'000);
            REQUIRE_FALSE(set.truncated);
            CHECK(static_cast<std::int64_t>(set.paths.size()) ==
                  frogtest::naive_simple_path_count(inst, a));
            // lexicographic order and pairwise distinct
            for (std::size_t i = 1; i < set.paths.size(); ++i)
                CHECK(set.paths[i - 1].edges < set.paths[i].edges);
        }
    }
}

TEST_CASE("enumerate_simple_paths: cap sets the truncated flag") {
    auto pe = gen_pursuer_evader();
    PathSet set = enumerate_simple_paths(pe.inst, 0, 1);
    CHECK(set.paths.size() == 1);
    CHECK(set.truncated);
}

TEST_CASE("best_response: two parallel edges picks the shorter") {
    Instance inst = make_instance(2, {Edge{0, 0, 1, 1, 5}, Edge{1, 0, 1, 1, 3}}, {Agent{0, 0, 1, 0}}, {0});
    Profile adv = Profile::empty(1);
    BestResponse br = best_response(inst, 0, adv);
    CHECK(br.cost == 3);
    CHECK(br.path.edges == std::vector<int>{1});
}

TEST_CASE("best_response: evader answers pursuer-up with down at cost 12") {
    auto pe = gen_pursuer_evader();
    Profile adv = pursuer_evader_profile(pe, true, true);
    adv.paths[1] = std::nullopt;
    BestResponse br = best_response(pe.inst, 1, adv);
    CHECK(br.cost == 12);
    CHECK(br.path.edges == std::vector<int>{9, 11, 13, 15});  // the down route
    // cost agrees with a full simulation of the completed profile
    Profile full = adv;
    full.paths[1] = br.path;
    CHECK(simulate(pe.inst, full).delay[1] == br.cost);
}

TEST_CASE("best_response: lexicographic tie-break among equal-cost paths") {
    // two identical parallel routes
    Instance inst = make_instance(2, {Edge{0, 0, 1, 1, 4}, Edge{1, 0, 1, 1, 4}}, {Agent{0, 0, 1, 0}}, {0});
    Profile adv = Profile::empty(1);
    BestResponse br = best_response(inst, 0, adv);
    CHECK(br.cost == 4);
    CHECK(br.path.edges == std::vector<int>{0});
}

TEST_CASE("best_response: pruned search equals unpruned exhaustive evaluation") {
    frogtest::Rng rng(99);
    SimOptions so;
    so.record_waits = false;
    for (int k = 0; k < 40; ++k) {
        Instance inst = frogtest::random_instance(rng, 7, 4, 7);
        Profile prof = frogtest::random_profile(rng, inst);
        int agent = rng.below(inst.num_agents());
        Profile adv = prof;
        adv.paths[static_cast<std::size_t>(agent)] = std::nullopt;

        BestResponseOptions opt;
        opt.check_bound = true;  // assert bound admissibility along the way
        BestResponse br = best_response(inst, agent, adv, opt);

        // oracle: simulate every alternative path without pruning
        Time best = kUnreachable;
        for (const Path& p : enumerate_simple_paths(inst, agent, 100000).paths) {
            Profile full = adv;
            full.paths[static_cast<std::size_t>(agent)] = p;
            best = std::min(best, simulate(inst, full, so).delay[static_cast<std::size_t>(agent)]);
        }
        CHECK(br.cost == best);

        // best response never exceeds the agent's cost in any complete profile
        CHECK(br.cost <= simulate(inst, prof, so).delay[static_cast<std::size_t>(agent)]);

        // determinism
        CHECK(best_response(inst, agent, adv).path == br.path);
    }
}

TEST_CASE("best_response_decision: threshold below free flow is an instant no") {
    Instance inst = make_instance(3, {Edge{0, 0, 1, 1, 2}, Edge{1, 1, 2, 1, 2}}, {Agent{0, 0, 2, 0}}, {0});
    Profile adv = Profile::empty(1);
    CHECK_FALSE(best_response_decision(inst, 0, adv, 3));
    CHECK(best_response_decision(inst, 0, adv, 4));
}

TEST_CASE("vertex-cover reduction: single edge costs 3*eta + 1") {
    UndirectedGraph g;
    g.vertex_count = 2;
    g.edges = {{0, 1}};
    CHECK(brute_force_vertex_cover(g) == 1);
    VcReduction vc = gen_vc_reduction(g);
    CHECK(validate_instance(vc.inst).ok());
    BestResponse br = best_response(vc.inst, vc.x, vc.adversary);
    CHECK(br.cost == 3 * 2 + 1);
}

TEST_CASE("vertex-cover reduction: triangle costs 3*eta + 2 and thresholds split") {
    UndirectedGraph g;
    g.vertex_count = 3;
    g.edges = {{0, 1}, {0, 2}, {1, 2}};
    CHECK(brute_force_vertex_cover(g) == 2);
    VcReduction vc = gen_vc_reduction(g);
    BestResponse br = best_response(vc.inst, vc.x, vc.adversary);
    CHECK(br.cost == 11);
    CHECK(best_response_decision(vc.inst, vc.x, vc.adversary, 11));
    CHECK_FALSE(best_response_decision(vc.inst, vc.x, vc.adversary, 10));
}
