#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "frog/format.hpp"
#include "frog/gadgets.hpp"
#include "frog/strategy.hpp"
#include "frog/validate.hpp"
#include "helpers.hpp"

using namespace frog;

namespace {

Instance minimal_instance() {
    return make_instance(2, {Edge{0, 0, 1, 1, 3}}, {Agent{0, 0, 1, 0}}, {0});
}

std::string minimal_doc() {
    return "frog-1\n"
           "vertices 2\n"
           "edges 1\n"
           "edge id=0 tail=0 head=1 capacity=1 delay=3\n"
           "agents 1\n"
           "agent id=0 source=0 sink=1 release_time=0\n"
           "priority 0\n";
}

}  // namespace

TEST_CASE("parse: minimal document") {
    Instance inst = parse_instance(minimal_doc());
    CHECK(inst.vertex_count == 2);
    CHECK(inst.edges.size() == 1);
    CHECK(inst.edges[0].delay == 3);
    CHECK(inst.out_edges[0] == std::vector<int>{0});
    CHECK(inst.out_edges[1].empty());
}

TEST_CASE("parse: zero capacity rejected") {
    std::string doc = minimal_doc();
    auto pos = doc.find("capacity=1");
    doc.replace(pos, 10, "capacity=0");
    CHECK_THROWS_AS(parse_instance(doc), FormatError);
}

TEST_CASE("parse: unknown field rejected") {
    std::string doc = minimal_doc();
    auto pos = doc.find("delay=3");
    doc.replace(pos, 7, "weight=3");
    CHECK_THROWS_AS(parse_instance(doc), FormatError);
}

TEST_CASE("parse: trailing garbage rejected") {
    CHECK_THROWS_AS(parse_instance(minimal_doc() + "edge id=1 tail=0 head=1 capacity=1 delay=0\n"),
                    FormatError);
}

TEST_CASE("serialize: deterministic and inverse of parse") {
    Instance inst = minimal_instance();
    std::string a = serialize_instance(inst);
    std::string b = serialize_instance(inst);
    CHECK(a == b);
    CHECK(parse_instance(a) == inst);
    CHECK(a == minimal_doc());
}

TEST_CASE("round-trip: 100 random instances") {
    frogtest::Rng rng(11);
    for (int k = 0; k < 100; ++k) {
        Instance inst = frogtest::random_instance(rng, 9, 5, 8);
        Instance back = parse_instance(serialize_instance(inst));
        CHECK(back == inst);
        CHECK(serialize_instance(back) == serialize_instance(inst));
    }
}

TEST_CASE("validate: unreachable sink named") {
    Instance inst = make_instance(3, {Edge{0, 0, 1, 1, 1}}, {Agent{0, 0, 2, 0}}, {0});
    auto rep = validate_instance(inst);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.joined().find("agent 0") != std::string::npos);
    CHECK(rep.joined().find("unreachable sink") != std::string::npos);
}

TEST_CASE("validate: dangling vertex reference") {
    Instance inst;
    inst.vertex_count = 2;
    inst.edges = {Edge{0, 0, 3, 1, 1}};
    inst.agents = {Agent{0, 0, 1, 0}};
    inst.priority = PriorityOrder::from_list({0});
    finalize(inst);
    auto rep = validate_instance(inst);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.joined().find("dangling vertex reference") != std::string::npos);
}

TEST_CASE("validate: self-loop rejected by default, allowed by flag") {
    Instance inst = make_instance(2, {Edge{0, 0, 0, 1, 1}, Edge{1, 0, 1, 1, 1}},
                                  {Agent{0, 0, 1, 0}}, {0});
    CHECK_FALSE(validate_instance(inst).ok());
    ValidationOptions opt;
    opt.allow_self_loops = true;
    CHECK(validate_instance(inst, opt).ok());
}

TEST_CASE("validate: generated pursuer-evader instance is clean") {
    auto pe = gen_pursuer_evader();
    CHECK(validate_instance(pe.inst).ok());
}

TEST_CASE("validate_path: failure modes") {
    // diamond with a return edge so a vertex revisit is possible
    Instance inst = make_instance(
        4,
        {Edge{0, 0, 1, 1, 1}, Edge{1, 1, 2, 1, 1}, Edge{2, 2, 1, 1, 1}, Edge{3, 2, 3, 1, 1},
         Edge{4, 1, 3, 1, 1}},
        {Agent{0, 0, 3, 0}}, {0});
    CHECK(validate_path(inst, Path{0, {0, 1, 3}}).ok());
    auto not_simple = validate_path(inst, Path{0, {0, 1, 2, 4}});
    REQUIRE_FALSE(not_simple.ok());
    CHECK(not_simple.joined().find("not simple") != std::string::npos);
    auto short_path = validate_path(inst, Path{0, {0, 1}});
    REQUIRE_FALSE(short_path.ok());
    CHECK(short_path.joined().find("does not reach sink") != std::string::npos);
    auto disconnected = validate_path(inst, Path{0, {0, 3}});
    CHECK_FALSE(disconnected.ok());
}

TEST_CASE("validate_path: empty path only for source == sink") {
    Instance inst = make_instance(2, {Edge{0, 0, 1, 1, 1}}, {Agent{0, 1, 1, 0}}, {0});
    CHECK(validate_path(inst, Path{0, {}}).ok());
    Instance other = minimal_instance();
    CHECK_FALSE(validate_path(other, Path{0, {}}).ok());
}

TEST_CASE("validate_path accepts every enumerated path") {
    frogtest::Rng rng(22);
    for (int k = 0; k < 50; ++k) {
        Instance inst = frogtest::random_instance(rng, 8, 3, 6);
        for (int a = 0; a < inst.num_agents(); ++a) {
            PathSet set = enumerate_simple_paths(inst, a, 4096);
            for (const Path& p : set.paths) CHECK(validate_path(inst, p).ok());
            if (!set.paths.empty() && !set.paths[0].edges.empty()) {
                // mutating the endpoint off the sink must be rejected
                Path broken = set.paths[0];
                broken.edges.pop_back();
                if (!broken.edges.empty()) CHECK_FALSE(validate_path(inst, broken).ok());
            }
        }
    }
}

TEST_CASE("profile: serialization round-trip with hole") {
    auto pe = gen_pursuer_evader();
    Profile full = pursuer_evader_profile(pe, true, true);
    Profile hole = full;
    hole.paths[3] = std::nullopt;
    Profile back = parse_profile(serialize_profile(hole), pe.inst);
    CHECK(back == hole);
    CHECK(back.hole_count() == 1);
}

TEST_CASE("ugraph: parse and degree checks") {
    UndirectedGraph g = parse_ugraph("ugraph-1\nvertices 3\nedges 3\npair 0 1\npair 0 2\npair 1 2\n");
    CHECK(g.vertex_count == 3);
    CHECK(g.max_degree() == 2);
    CHECK(serialize_ugraph(g) == "ugraph-1\nvertices 3\nedges 3\npair 0 1\npair 0 2\npair 1 2\n");
    CHECK_THROWS_AS(parse_ugraph("ugraph-1\nvertices 2\nedges 1\npair 0 0\n"), FormatError);
    CHECK_THROWS_AS(parse_ugraph("ugraph-1\nvertices 2\nedges 2\npair 0 1\npair 1 0\n"), FormatError);
}

TEST_CASE("golden: serialized pursuer-evader matches the checked-in file") {
    std::ifstream f(std::string(TEST_DATA_DIR) + "/pursuer_evader.frog", std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    CHECK(serialize_instance(gen_pursuer_evader().inst) == ss.str());
}
