#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "frog/cli.hpp"
#include "frog/gadgets.hpp"

using namespace frog;

namespace {

struct Run {
    int exit;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    int code = cli::run_cli(std::move(args), {in, out, err});
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("cli: gen pursuer-evader | find-ne reports no PNE with exit 1") {
    Run gen = invoke({"gen", "pursuer-evader"});
    REQUIRE(gen.exit == 0);
    Run find = invoke({"find-ne"}, gen.out);
    CHECK(find.exit == 1);
    CHECK(find.out.find("none-exists") != std::string::npos);
    CHECK(find.out.find("checked=4") != std::string::npos);
}

TEST_CASE("cli: simulate a single-agent chain fixture") {
    std::string inst =
        "frog-1\nvertices 3\nedges 2\n"
        "edge id=0 tail=0 head=1 capacity=1 delay=4\n"
        "edge id=1 tail=1 head=2 capacity=1 delay=6\n"
        "agents 1\nagent id=0 source=0 sink=2 release_time=0\npriority 0\n";
    std::string prof = "frog-profile-1\npaths 1\npath agent=0 edges=0,1\n";
    std::ostringstream profile_file;
    // write the profile through a temp file path
    std::string ppath = "/tmp/frog_cli_test_profile.txt";
    {
        std::ofstream f(ppath);
        f << prof;
    }
    Run r = invoke({"simulate", "-p", ppath}, inst);
    REQUIRE(r.exit == 0);
    CHECK(r.out.find("result agent=0 delay=10 completion_time=10") != std::string::npos);
}

TEST_CASE("cli: gen vc | best-response costs 3*eta + cover") {
    std::string gpath = "/tmp/frog_cli_k3.ug";
    {
        std::ofstream f(gpath);
        f << "ugraph-1\nvertices 3\nedges 3\npair 0 1\npair 0 2\npair 1 2\n";
    }
    std::string mpath = "/tmp/frog_cli_k3.map";
    Run gen = invoke({"gen", "vc", "--graph", gpath, "--m", "8", "--map", mpath});
    REQUIRE(gen.exit == 0);

    // empty adversary profile: every agent but x is fixed by the instance
    // itself, so build the adversary from the generator for the cost check
    UndirectedGraph g = parse_ugraph("ugraph-1\nvertices 3\nedges 3\npair 0 1\npair 0 2\npair 1 2\n");
    VcReduction vc = gen_vc_reduction(g, 8);
    std::string ppath = "/tmp/frog_cli_k3_profile.txt";
    {
        std::ofstream f(ppath);
        f << serialize_profile(vc.adversary);
    }
    std::string ipath = "/tmp/frog_cli_k3_inst.txt";
    {
        std::ofstream f(ipath);
        f << serialize_instance(vc.inst);
    }
    Run br = invoke({"best-response", "-i", ipath, "-p", ppath, "--agent", std::to_string(vc.x)});
    REQUIRE(br.exit == 0);
    CHECK(br.out.find("cost 11") != std::string::npos);

    Run yes = invoke({"best-response", "-i", ipath, "-p", ppath, "--agent", std::to_string(vc.x),
                   "--threshold", "11"});
    CHECK(yes.exit == 0);
    CHECK(yes.out.find("decision yes") != std::string::npos);
    Run no = invoke({"best-response", "-i", ipath, "-p", ppath, "--agent", std::to_string(vc.x),
                  "--threshold", "10"});
    CHECK(no.exit == 1);
    CHECK(no.out.find("decision no") != std::string::npos);
}

TEST_CASE("cli: verify-ne witness and exit codes") {
    auto pe = gen_pursuer_evader();
    std::string ipath = "/tmp/frog_cli_pe_inst.txt", ppath = "/tmp/frog_cli_pe_prof.txt";
    {
        std::ofstream f(ipath);
        f << serialize_instance(pe.inst);
    }
    {
        std::ofstream f(ppath);
        f << serialize_profile(pursuer_evader_profile(pe, true, true));
    }
    Run r = invoke({"verify-ne", "-i", ipath, "-p", ppath});
    CHECK(r.exit == 1);
    CHECK(r.out.find("witness agent=1 old=13 new=12") != std::string::npos);
}

TEST_CASE("cli: gps on the double cycle") {
    Run gen = invoke({"gen", "double-cycle", "--corners", "4"});
    REQUIRE(gen.exit == 0);
    Run walk = invoke({"gps", "--mode", "walk", "--tie", "procrastinate", "--horizon", "400"}, gen.out);
    CHECK(walk.exit == 1);
    CHECK(walk.out.find("status nontermination") != std::string::npos);
    Run simple = invoke({"gps", "--mode", "simple", "--tie", "procrastinate"}, gen.out);
    CHECK(simple.exit == 0);
    CHECK(simple.out.find("status finished") != std::string::npos);
}

TEST_CASE("cli: identical invocations produce identical bytes") {
    Run a = invoke({"gen", "m-backfire", "--m", "2"});
    Run b = invoke({"gen", "m-backfire", "--m", "2"});
    CHECK(a.out == b.out);
    Run p1 = invoke({"pogps", "--max-profiles", "2000000"}, invoke({"gen", "double-cycle", "--corners", "4"}).out);
    Run p2 = invoke({"pogps", "--max-profiles", "2000000"}, invoke({"gen", "double-cycle", "--corners", "4"}).out);
    CHECK(p1.out == p2.out);
    CHECK(p1.exit == 0);  // exact at 4 corners
}

TEST_CASE("cli: usage errors exit 2 with a hint") {
    Run r = invoke({"simulate"});  // missing --profile
    CHECK(r.exit == 2);
    CHECK(r.err.find("hint") != std::string::npos);
    Run unknown = invoke({"frobnicate"});
    CHECK(unknown.exit == 2);
}

TEST_CASE("cli: validate reports problems with exit 1") {
    std::string bad =
        "frog-1\nvertices 2\nedges 1\n"
        "edge id=0 tail=0 head=1 capacity=0 delay=1\n"
        "agents 1\nagent id=0 source=0 sink=1 release_time=0\npriority 0\n";
    Run r = invoke({"validate"}, bad);
    CHECK(r.exit == 1);
    Run ok = invoke({"validate"}, invoke({"gen", "pursuer-evader"}).out);
    CHECK(ok.exit == 0);
    CHECK(ok.out == "ok\n");
}

TEST_CASE("cli: dot export mentions every edge") {
    Run gen = invoke({"gen", "double-cycle", "--corners", "4"});
    Run dot = invoke({"dot"}, gen.out);
    REQUIRE(dot.exit == 0);
    CHECK(dot.out.find("digraph frog") != std::string::npos);
    CHECK(dot.out.find("e31") != std::string::npos);
}

TEST_CASE("cli: paths subcommand lists simple paths") {
    Run gen = invoke({"gen", "pursuer-evader"});
    Run r = invoke({"paths", "--agent", "0"}, gen.out);
    REQUIRE(r.exit == 0);
    CHECK(r.out.find("paths 2") != std::string::npos);
    CHECK(r.out.find("truncated 0") != std::string::npos);
}
