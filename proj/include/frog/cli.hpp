#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frog/core.hpp"
#include "frog/engine.hpp"
#include "frog/equilibrium.hpp"
#include "frog/format.hpp"
#include "frog/gadgets.hpp"
#include "frog/gps.hpp"
#include "frog/stepwise.hpp"
#include "frog/strategy.hpp"
#include "frog/trace.hpp"
#include "frog/validate.hpp"

// Command-line front end. Machine-readable output by default; --pretty adds a
// human-oriented table. Exit codes: 0 success, 1 negative domain answer
// (documented per subcommand), 2 usage or input error, 3 budget or horizon
// exhaustion.

namespace frog::cli {

struct Io {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

namespace detail {

inline std::string slurp(const std::string& path, Io& io) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << io.in.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void emit(const std::string& text, const std::string& output_path, Io& io) {
    if (output_path.empty() || output_path == "-") {
        io.out << text;
        return;
    }
    std::ofstream f(output_path, std::ios::binary);
    if (!f) throw FormatError("cannot open output file: " + output_path);
    f << text;
}

inline std::string edges_csv(const std::vector<int>& edges) {
    std::string s;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(edges[i]);
    }
    return s;
}

inline std::string result_text(const Instance& inst, const SimResult& res, const Profile* profile,
                               bool with_waits, bool with_trace) {
    std::ostringstream out;
    out << kResultHeader << "\n";
    out << "agents " << inst.num_agents() << "\n";
    for (int i = 0; i < inst.num_agents(); ++i)
        out << "result agent=" << i << " delay=" << res.delay[static_cast<std::size_t>(i)]
            << " completion_time=" << res.completion[static_cast<std::size_t>(i)] << "\n";
    if (with_waits && !res.waits.empty() && profile) {
        for (int i = 0; i < inst.num_agents(); ++i) {
            const auto& p = profile->paths[static_cast<std::size_t>(i)];
            if (!p) continue;
            for (std::size_t k = 0; k < p->edges.size() && k < res.waits[static_cast<std::size_t>(i)].size(); ++k)
                if (res.waits[static_cast<std::size_t>(i)][k] != 0)
                    out << "wait agent=" << i << " edge=" << p->edges[k]
                        << " value=" << res.waits[static_cast<std::size_t>(i)][k] << "\n";
        }
    }
    if (with_trace) {
        for (const Event& ev : res.trace)
            out << "trace time=" << ev.time << " kind=" << (ev.kind == EventKind::Queue ? "queue" : "pop")
                << " agent=" << ev.agent << " edge=" << ev.edge << "\n";
    }
    out << "max_time " << res.max_time << "\n";
    return out.str();
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, Io io) {
    CLI::App app{"frog: FIFO routing games over discrete time"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::string instance_path, profile_path, output_path, graph_path, map_path;
    bool pretty = false, with_waits = false, with_trace = false, allow_self_loops = false;
    std::uint64_t seed = 0;
    int jobs = 1;

    app.add_option("--output,-o", output_path, "output file (default stdout)");
    app.add_flag("--pretty", pretty, "append a human-readable summary");
    app.add_option("--seed", seed, "seed for the seeded tie policy");
    app.add_option("--jobs", jobs, "worker threads for search subcommands")->check(CLI::PositiveNumber);

    auto add_instance_opt = [&](CLI::App* cmd) {
        cmd->add_option("--instance,-i", instance_path, "instance file ('-' or absent: stdin)");
    };

    // --- validate
    auto* c_validate = app.add_subcommand("validate", "validate an instance (and optional profile)");
    add_instance_opt(c_validate);
    c_validate->add_option("--profile,-p", profile_path, "profile file");
    c_validate->add_flag("--allow-self-loops", allow_self_loops, "accept self-loop edges");

    // --- simulate
    auto* c_sim = app.add_subcommand("simulate", "run a fixed strategy profile");
    add_instance_opt(c_sim);
    c_sim->add_option("--profile,-p", profile_path, "profile file")->required();
    c_sim->add_flag("--waits", with_waits, "emit nonzero per-edge waits");
    c_sim->add_flag("--trace", with_trace, "emit the full event trace");
    bool use_stepwise = false;
    c_sim->add_flag("--stepwise", use_stepwise, "use the time-stepped engine");

    // --- paths
    auto* c_paths = app.add_subcommand("paths", "enumerate an agent's simple paths");
    add_instance_opt(c_paths);
    int agent_id = 0;
    std::int64_t cap = 1'000'000;
    c_paths->add_option("--agent,-a", agent_id, "agent id")->required();
    c_paths->add_option("--cap", cap, "enumeration cap");

    // --- best-response
    auto* c_br = app.add_subcommand("best-response", "exact best response against a fixed profile");
    add_instance_opt(c_br);
    c_br->add_option("--profile,-p", profile_path, "adversary profile (agent's own entry ignored)")->required();
    c_br->add_option("--agent,-a", agent_id, "agent id")->required();
    std::optional<Time> threshold;
    c_br->add_option("--threshold", threshold, "decision variant: exit 0 iff cost <= threshold");
    c_br->add_option("--cap", cap, "candidate cap");

    // --- verify-ne
    auto* c_verify = app.add_subcommand("verify-ne", "decide whether a profile is a PNE");
    add_instance_opt(c_verify);
    c_verify->add_option("--profile,-p", profile_path, "profile file")->required();

    // --- find-ne / social-opt share budget options
    std::int64_t max_profiles = 10'000'000, max_paths = 100'000;
    std::int64_t time_limit_ms = 24LL * 3600 * 1000;
    auto add_budget = [&](CLI::App* cmd) {
        cmd->add_option("--max-profiles", max_profiles, "profile scan budget");
        cmd->add_option("--max-paths", max_paths, "per-agent path enumeration cap");
        cmd->add_option("--time-limit-ms", time_limit_ms, "wall-clock budget");
    };
    auto* c_find = app.add_subcommand("find-ne", "exhaustive PNE existence search");
    add_instance_opt(c_find);
    add_budget(c_find);
    auto* c_soc = app.add_subcommand("social-opt", "exhaustive social optimum");
    add_instance_opt(c_soc);
    add_budget(c_soc);

    // --- brd
    auto* c_brd = app.add_subcommand("brd", "best-response dynamics");
    add_instance_opt(c_brd);
    c_brd->add_option("--profile,-p", profile_path, "start profile")->required();
    int max_rounds = 1000;
    c_brd->add_option("--max-rounds", max_rounds, "round limit");

    // --- gps
    auto* c_gps = app.add_subcommand("gps", "simulate replanning GPS agents");
    add_instance_opt(c_gps);
    std::string mode_str = "simple", tie_str = "lex";
    Time horizon = 0;
    c_gps->add_option("--mode", mode_str, "walk|simple")->check(CLI::IsMember({"walk", "simple"}));
    c_gps->add_option("--tie", tie_str, "lex|keep|procrastinate|seeded")
        ->check(CLI::IsMember({"lex", "keep", "procrastinate", "seeded"}));
    c_gps->add_option("--horizon", horizon, "step limit (default: termination bound)");

    // --- pogps
    auto* c_pogps = app.add_subcommand("pogps", "price of GPS navigation (SimplePath mode)");
    add_instance_opt(c_pogps);
    add_budget(c_pogps);

    // --- gen
    auto* c_gen = app.add_subcommand("gen", "generate a gadget instance");
    int gen_m = 2;
    Time gen_t = 0;
    int corners = 4;
    Time x_time = 0;
    bool x_avoid = false;
    auto* g_pe = c_gen->add_subcommand("pursuer-evader", "the no-PNE example");
    auto* g_filter = c_gen->add_subcommand("filter", "filter harness (x and y through the chain)");
    g_filter->add_option("--m", gen_m, "filter strength")->required();
    auto* g_bf = c_gen->add_subcommand("backfire", "single (M,t)-backfire with crossing agent");
    g_bf->add_option("--m", gen_m, "backfire strength")->required();
    g_bf->add_option("--t", gen_t, "armed trigger time");
    g_bf->add_option("--x-time", x_time, "crossing agent's trigger arrival");
    g_bf->add_flag("--x-avoid", x_avoid, "route the crossing agent around the trigger");
    auto* g_mbf = c_gen->add_subcommand("m-backfire", "stacked backfires armed for [0,M]");
    g_mbf->add_option("--m", gen_m, "backfire strength")->required();
    g_mbf->add_option("--x-time", x_time, "crossing agent's trigger arrival");
    g_mbf->add_flag("--x-avoid", x_avoid, "route the crossing agent around the trigger");
    auto* g_vc = c_gen->add_subcommand("vc", "vertex-cover reduction instance");
    g_vc->add_option("--graph", graph_path, "undirected graph file")->required();
    std::optional<int> vc_m;
    g_vc->add_option("--m", vc_m, "backfire strength (default 6*eta)");
    g_vc->add_option("--map", map_path, "write the reduction map here");
    auto* g_dc = c_gen->add_subcommand("double-cycle", "double cycle of procrastination");
    g_dc->add_option("--corners", corners, "corner count (>= 3)");
    c_gen->require_subcommand(1);
    c_gen->fallthrough();

    // --- dot
    auto* c_dot = app.add_subcommand("dot", "export an instance as DOT");
    add_instance_opt(c_dot);

    try {
        std::vector<const char*> argv;
        argv.push_back("frog");
        for (auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            io.out << app.help();
            return 0;
        }
        io.err << "usage error: " << e.what() << "\n";
        io.err << "hint: run with --help for the subcommand grammar\n";
        return 2;
    }

    auto load_instance = [&]() {
        ValidationOptions vo;
        vo.allow_self_loops = allow_self_loops;
        return parse_instance(detail::slurp(instance_path, io), vo);
    };

    try {
        if (c_validate->parsed()) {
            Instance inst;
            try {
                inst = load_instance();
            } catch (const FormatError& e) {
                io.err << e.what() << "\n";
                return 1;
            }
            if (!profile_path.empty()) {
                Profile p = parse_profile(detail::slurp(profile_path, io), inst);
                auto rep = validate_profile(inst, p, true);
                if (!rep.ok()) {
                    for (auto& s : rep.problems) io.out << "problem " << s << "\n";
                    return 1;
                }
            }
            detail::emit("ok\n", output_path, io);
            return 0;
        }

        if (c_sim->parsed()) {
            Instance inst = load_instance();
            Profile p = parse_profile(detail::slurp(profile_path, io), inst);
            SimResult res;
            if (use_stepwise) {
                StepwiseOptions so;
                so.record_waits = with_waits;
                so.record_trace = with_trace;
                auto r = simulate_stepwise(inst, p, std::max<Time>(default_gps_horizon(inst), 16), so);
                if (std::holds_alternative<StepwiseOutcome>(r)) {
                    io.err << "stepwise simulation timed out\n";
                    return 3;
                }
                res = std::get<SimResult>(r);
            } else {
                SimOptions so;
                so.record_waits = with_waits;
                so.record_trace = with_trace;
                res = simulate(inst, p, so);
            }
            std::string text = detail::result_text(inst, res, &p, with_waits, with_trace);
            if (pretty) {
                std::ostringstream t;
                t << "# agent delay completion\n";
                for (int i = 0; i < inst.num_agents(); ++i)
                    t << "# " << i << " " << res.delay[static_cast<std::size_t>(i)] << " "
                      << res.completion[static_cast<std::size_t>(i)] << "\n";
                text += t.str();
            }
            detail::emit(text, output_path, io);
            return 0;
        }

        if (c_paths->parsed()) {
            Instance inst = load_instance();
            if (!inst.agent_ok(agent_id)) throw FormatError("unknown agent id");
            PathSet set = enumerate_simple_paths(inst, agent_id, cap);
            std::ostringstream out;
            out << "paths " << set.paths.size() << "\n";
            for (const Path& p : set.paths)
                out << "path agent=" << p.agent << " edges=" << detail::edges_csv(p.edges) << "\n";
            out << "truncated " << (set.truncated ? 1 : 0) << "\n";
            detail::emit(out.str(), output_path, io);
            return set.truncated ? 3 : 0;
        }

        if (c_br->parsed()) {
            Instance inst = load_instance();
            Profile p = parse_profile(detail::slurp(profile_path, io), inst);
            if (!inst.agent_ok(agent_id)) throw FormatError("unknown agent id");
            p.paths[static_cast<std::size_t>(agent_id)] = std::nullopt;
            BestResponseOptions o;
            o.max_candidates = cap;
            std::ostringstream out;
            if (threshold) {
                bool yes = best_response_decision(inst, agent_id, p, *threshold, o);
                out << "decision " << (yes ? "yes" : "no") << "\n";
                detail::emit(out.str(), output_path, io);
                return yes ? 0 : 1;
            }
            BestResponse br = best_response(inst, agent_id, p, o);
            out << "cost " << br.cost << "\n";
            out << "path agent=" << agent_id << " edges=" << detail::edges_csv(br.path.edges) << "\n";
            if (pretty)
                out << "# explored " << br.explored << " pruned " << br.pruned << "\n";
            detail::emit(out.str(), output_path, io);
            return 0;
        }

        if (c_verify->parsed()) {
            Instance inst = load_instance();
            Profile p = parse_profile(detail::slurp(profile_path, io), inst);
            Verdict v = verify_pne(inst, p);
            std::ostringstream out;
            if (v.status == Verdict::Status::Pne) {
                out << "pne\n";
                detail::emit(out.str(), output_path, io);
                return 0;
            }
            if (v.status == Verdict::Status::NotPne) {
                out << "witness agent=" << v.witness->agent << " old=" << v.witness->old_cost
                    << " new=" << v.witness->new_cost
                    << " edges=" << detail::edges_csv(v.witness->deviation.edges) << "\n";
                detail::emit(out.str(), output_path, io);
                return 1;
            }
            out << "unknown agent=" << v.unknown_agent << "\n";
            detail::emit(out.str(), output_path, io);
            return 3;
        }

        if (c_find->parsed() || c_soc->parsed()) {
            Instance inst = load_instance();
            SearchBudget budget;
            budget.max_profiles = max_profiles;
            budget.max_paths_per_agent = max_paths;
            budget.time_limit = std::chrono::milliseconds(time_limit_ms);
            budget.jobs = jobs;
            std::ostringstream out;
            if (c_find->parsed()) {
                PneSearchResult r = find_pne(inst, budget);
                if (r.kind == PneSearchResult::Kind::Found) {
                    out << "found checked=" << r.profiles_checked << "\n" << serialize_profile(*r.profile);
                    detail::emit(out.str(), output_path, io);
                    return 0;
                }
                if (r.kind == PneSearchResult::Kind::NoneExists) {
                    out << "none-exists checked=" << r.profiles_checked << "\n";
                    detail::emit(out.str(), output_path, io);
                    return 1;
                }
                out << "budget-exhausted checked=" << r.profiles_checked << "\n";
                detail::emit(out.str(), output_path, io);
                return 3;
            }
            SocialOptimum so = social_optimum(inst, budget);
            out << "total " << so.total << (so.exhausted_budget ? " partial" : "") << "\n"
                << serialize_profile(so.profile);
            detail::emit(out.str(), output_path, io);
            return so.exhausted_budget ? 3 : 0;
        }

        if (c_brd->parsed()) {
            Instance inst = load_instance();
            Profile p = parse_profile(detail::slurp(profile_path, io), inst);
            BrdResult r = best_response_dynamics(inst, p, max_rounds);
            std::ostringstream out;
            if (r.kind == BrdResult::Kind::Converged) {
                out << "converged rounds=" << r.rounds << "\n" << serialize_profile(r.profile);
                detail::emit(out.str(), output_path, io);
                return 0;
            }
            if (r.kind == BrdResult::Kind::Cycled) {
                out << "cycled period=" << r.cycle_period << " rounds=" << r.rounds << "\n";
                detail::emit(out.str(), output_path, io);
                return 1;
            }
            out << "round-limit rounds=" << r.rounds << "\n";
            detail::emit(out.str(), output_path, io);
            return 3;
        }

        if (c_gps->parsed()) {
            Instance inst = load_instance();
            TieConfig tie;
            tie.seed = seed;
            tie.policy = tie_str == "lex"             ? TiePolicy::Lexicographic
                         : tie_str == "keep"          ? TiePolicy::KeepHeading
                         : tie_str == "procrastinate" ? TiePolicy::Procrastinate
                                                      : TiePolicy::Seeded;
            GpsMode mode = mode_str == "walk" ? GpsMode::Walk : GpsMode::SimplePath;
            Time h = horizon > 0 ? horizon : default_gps_horizon(inst);
            GpsOutcome o = gps_simulate(inst, tie, mode, h);
            std::ostringstream out;
            out << "frog-gps-1\n";
            if (o.status == GpsOutcome::Status::Finished) {
                out << "status finished\n";
                for (int i = 0; i < inst.num_agents(); ++i)
                    out << "result agent=" << i << " delay=" << o.delays[static_cast<std::size_t>(i)]
                        << " completion_time=" << o.completions[static_cast<std::size_t>(i)] << "\n";
            } else if (o.status == GpsOutcome::Status::NonTermination) {
                out << "status nontermination\n";
                out << "cycle first=" << o.cycle->first_seen << " second=" << o.cycle->repeated_at << "\n";
            } else {
                out << "status horizon\n";
            }
            for (int i = 0; i < inst.num_agents(); ++i)
                out << "walk agent=" << i << " edges=" << detail::edges_csv(o.walks[static_cast<std::size_t>(i)])
                    << "\n";
            detail::emit(out.str(), output_path, io);
            return o.status == GpsOutcome::Status::Finished        ? 0
                   : o.status == GpsOutcome::Status::NonTermination ? 1
                                                                     : 3;
        }

        if (c_pogps->parsed()) {
            Instance inst = load_instance();
            SearchBudget budget;
            budget.max_profiles = max_profiles;
            budget.max_paths_per_agent = max_paths;
            budget.time_limit = std::chrono::milliseconds(time_limit_ms);
            budget.jobs = jobs;
            TieConfig probe;
            probe.seed = seed;
            PogpsReport rep = pogps(inst, budget, GpsMode::SimplePath, probe);
            std::ostringstream out;
            out << "frog-pogps-1\n";
            out << "worst_gps_total " << rep.worst_gps_total << "\n";
            out << "optimum_total " << rep.optimum_total << "\n";
            out << "ratio " << rep.ratio() << "\n";
            out << "exact " << (rep.exact ? 1 : 0) << "\n";
            detail::emit(out.str(), output_path, io);
            return rep.exact ? 0 : 3;
        }

        if (c_gen->parsed()) {
            std::string text;
            if (g_pe->parsed()) {
                text = serialize_instance(gen_pursuer_evader().inst);
            } else if (g_filter->parsed()) {
                text = serialize_instance(filter_harness(gen_m).inst);
            } else if (g_bf->parsed()) {
                text = serialize_instance(backfire_harness(gen_backfire(gen_m, gen_t), x_time, !x_avoid).inst);
            } else if (g_mbf->parsed()) {
                text = serialize_instance(backfire_harness(gen_m_backfire(gen_m), x_time, !x_avoid).inst);
            } else if (g_vc->parsed()) {
                UndirectedGraph g = parse_ugraph(detail::slurp(graph_path, io));
                VcReduction vc = gen_vc_reduction(g, vc_m);
                text = serialize_instance(vc.inst);
                if (!map_path.empty()) {
                    std::ostringstream mp;
                    mp << "frog-vcmap-1\n";
                    mp << "eta " << vc.map.eta << "\n";
                    mp << "m " << vc.map.m << "\n";
                    mp << "x " << vc.x << "\n";
                    mp << "threshold_base " << vc.map.threshold(0) << "\n";
                    for (int i = 0; i < vc.map.eta; ++i)
                        mp << "vertex id=" << i << " take=" << vc.map.take_edge[static_cast<std::size_t>(i)]
                           << " skip=" << vc.map.skip_edge[static_cast<std::size_t>(i)]
                           << " skip_out=" << vc.map.skip_out_edge[static_cast<std::size_t>(i)] << "\n";
                    detail::emit(mp.str(), map_path, io);
                }
            } else if (g_dc->parsed()) {
                text = serialize_instance(gen_double_cycle(corners).inst);
            }
            detail::emit(text, output_path, io);
            return 0;
        }

        if (c_dot->parsed()) {
            Instance inst = load_instance();
            detail::emit(to_dot(inst), output_path, io);
            return 0;
        }
    } catch (const FormatError& e) {
        io.err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const SearchError& e) {
        io.err << "search aborted: " << e.what() << "\n";
        return 3;
    } catch (const SimulationError& e) {
        io.err << "simulation error: " << e.what() << "\n";
        return 2;
    }
    io.err << "usage error: no subcommand\n";
    return 2;
}

}  // namespace frog::cli
