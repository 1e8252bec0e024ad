#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "frog/core.hpp"
#include "frog/engine.hpp"
#include "frog/strategy.hpp"

// PNE verification, bounded-exhaustive existence search, social optimum and
// best-response dynamics. All product-space scans walk profiles in
// lexicographic order of per-agent path indices, so results are reproducible
// and parallel chunks merge deterministically (first hit in scan order wins).

namespace frog {

struct Witness {
    int agent = 0;
    Path deviation;
    Time old_cost = 0;
    Time new_cost = 0;
};

struct Verdict {
    enum class Status { Pne, NotPne, Unknown };
    Status status = Status::Unknown;
    std::optional<Witness> witness;     // present iff NotPne
    int unknown_agent = -1;             // set when a best-response search hit its cap

    bool is_pne() const { return status == Status::Pne; }
};

struct SearchBudget {
    std::int64_t max_profiles = 10'000'000;
    std::int64_t max_paths_per_agent = 100'000;
    std::chrono::milliseconds time_limit{std::chrono::hours(24)};
    int jobs = 1;
};

// Deviation check in priority order, first strictly improving deviation wins.
inline Verdict verify_pne(const Instance& inst, const Profile& profile,
                          const BestResponseOptions& bropt = {}) {
    {
        auto rep = validate_profile(inst, profile, true);
        if (!rep.ok()) throw SearchError("invalid profile: " + rep.joined());
    }
    SimOptions so;
    so.record_waits = false;
    SimResult base = simulate(inst, profile, so);

    Verdict v;
    for (int agent : inst.priority.to_list()) {
        Profile adversary = profile;
        adversary.paths[static_cast<std::size_t>(agent)] = std::nullopt;
        BestResponseOptions o = bropt;
        // any path strictly cheaper than the current one refutes the PNE
        o.stop_at = base.delay[static_cast<std::size_t>(agent)] - 1;
        BestResponse br;
        try {
            br = best_response(inst, agent, adversary, o);
        } catch (const SearchError&) {
            v.status = Verdict::Status::Unknown;
            v.unknown_agent = agent;
            return v;
        }
        if (br.cost < base.delay[static_cast<std::size_t>(agent)]) {
            v.status = Verdict::Status::NotPne;
            v.witness = Witness{agent, br.path, base.delay[static_cast<std::size_t>(agent)], br.cost};
            return v;
        }
    }
    v.status = Verdict::Status::Pne;
    return v;
}

struct PneSearchResult {
    enum class Kind { Found, NoneExists, BudgetExhausted };
    Kind kind = Kind::BudgetExhausted;
    std::optional<Profile> profile;
    std::int64_t profiles_checked = 0;
};

namespace eqdetail {

struct ProductSpace {
    std::vector<PathSet> sets;
    std::int64_t size = 0;  // capped multiplication

    static ProductSpace build(const Instance& inst, const SearchBudget& budget) {
        ProductSpace ps;
        ps.size = 1;
        for (int i = 0; i < inst.num_agents(); ++i) {
            PathSet s = enumerate_simple_paths(inst, i, budget.max_paths_per_agent);
            if (s.truncated)
                throw SearchError("path enumeration cap hit for agent " + std::to_string(i));
            if (s.paths.empty())
                throw SearchError("agent " + std::to_string(i) + " has no strategy");
            if (ps.size > 0 && ps.size <= (std::numeric_limits<std::int64_t>::max() / 2) /
                                               static_cast<std::int64_t>(s.paths.size()))
                ps.size *= static_cast<std::int64_t>(s.paths.size());
            else
                ps.size = std::numeric_limits<std::int64_t>::max() / 2;
            ps.sets.push_back(std::move(s));
        }
        return ps;
    }

    Profile profile_at(std::int64_t index) const {
        Profile p = Profile::empty(static_cast<int>(sets.size()));
        std::int64_t rest = index;
        for (std::size_t i = sets.size(); i-- > 0;) {
            auto count = static_cast<std::int64_t>(sets[i].paths.size());
            p.paths[i] = sets[i].paths[static_cast<std::size_t>(rest % count)];
            rest /= count;
        }
        return p;
    }
};

// profile_at uses the last agent as the fastest-varying digit; reversing gives
// lexicographic order on (path index of agent 0, agent 1, ...).

}  // namespace eqdetail

// Exhaustive PNE existence search in lexicographic profile order.
inline PneSearchResult find_pne(const Instance& inst, const SearchBudget& budget = {}) {
    auto started = std::chrono::steady_clock::now();
    eqdetail::ProductSpace ps;
    try {
        ps = eqdetail::ProductSpace::build(inst, budget);
    } catch (const SearchError&) {
        return {PneSearchResult::Kind::BudgetExhausted, std::nullopt, 0};
    }

    PneSearchResult out;
    const int jobs = std::max(budget.jobs, 1);
    std::int64_t index = 0;
    while (index < ps.size) {
        if (out.profiles_checked >= budget.max_profiles ||
            std::chrono::steady_clock::now() - started > budget.time_limit) {
            out.kind = PneSearchResult::Kind::BudgetExhausted;
            return out;
        }
        std::int64_t chunk = std::min<std::int64_t>(ps.size - index, std::max(jobs * 4, 1));
        chunk = std::min(chunk, budget.max_profiles - out.profiles_checked);
        if (chunk <= 0) {
            out.kind = PneSearchResult::Kind::BudgetExhausted;
            return out;
        }
        std::vector<char> is_pne(static_cast<std::size_t>(chunk), 0);
        auto eval_one = [&](std::int64_t k) {
            Profile p = ps.profile_at(index + k);
            Verdict v = verify_pne(inst, p);
            is_pne[static_cast<std::size_t>(k)] = v.is_pne() ? 1 : 0;
        };
        if (jobs <= 1 || chunk == 1) {
            for (std::int64_t k = 0; k < chunk; ++k) eval_one(k);
        } else {
            std::atomic<std::int64_t> next{0};
            std::vector<std::thread> ws;
            for (int w = 0; w < jobs; ++w)
                ws.emplace_back([&]() {
                    for (;;) {
                        std::int64_t k = next.fetch_add(1);
                        if (k >= chunk) return;
                        eval_one(k);
                    }
                });
            for (auto& t : ws) t.join();
        }
        out.profiles_checked += chunk;
        for (std::int64_t k = 0; k < chunk; ++k) {
            if (is_pne[static_cast<std::size_t>(k)]) {
                out.kind = PneSearchResult::Kind::Found;
                out.profile = ps.profile_at(index + k);
                return out;
            }
        }
        index += chunk;
    }
    out.kind = PneSearchResult::Kind::NoneExists;
    return out;
}

struct SocialOptimum {
    Profile profile;
    Time total = 0;
    std::int64_t profiles_checked = 0;
    bool exhausted_budget = false;
};

// Exhaustive minimization of total delay; lexicographically first minimizer.
inline SocialOptimum social_optimum(const Instance& inst, const SearchBudget& budget = {}) {
    auto started = std::chrono::steady_clock::now();
    auto ps = eqdetail::ProductSpace::build(inst, budget);

    SocialOptimum out;
    Time best = kUnreachable;
    std::int64_t best_index = -1;
    const int jobs = std::max(budget.jobs, 1);
    SimOptions so;
    so.record_waits = false;

    std::int64_t index = 0;
    while (index < ps.size) {
        if (out.profiles_checked >= budget.max_profiles ||
            std::chrono::steady_clock::now() - started > budget.time_limit) {
            out.exhausted_budget = true;
            break;
        }
        std::int64_t chunk = std::min<std::int64_t>(ps.size - index, std::max(jobs * 64, 64));
        chunk = std::min(chunk, budget.max_profiles - out.profiles_checked);
        if (chunk <= 0) {
            out.exhausted_budget = true;
            break;
        }
        std::vector<Time> totals(static_cast<std::size_t>(chunk), kUnreachable);
        auto eval_one = [&](std::int64_t k) {
            Profile p = ps.profile_at(index + k);
            totals[static_cast<std::size_t>(k)] = total_delay(simulate(inst, p, so));
        };
        if (jobs <= 1 || chunk == 1) {
            for (std::int64_t k = 0; k < chunk; ++k) eval_one(k);
        } else {
            std::atomic<std::int64_t> next{0};
            std::vector<std::thread> ws;
            for (int w = 0; w < jobs; ++w)
                ws.emplace_back([&]() {
                    for (;;) {
                        std::int64_t k = next.fetch_add(1);
                        if (k >= chunk) return;
                        eval_one(k);
                    }
                });
            for (auto& t : ws) t.join();
        }
        for (std::int64_t k = 0; k < chunk; ++k) {
            if (totals[static_cast<std::size_t>(k)] < best) {
                best = totals[static_cast<std::size_t>(k)];
                best_index = index + k;
            }
        }
        out.profiles_checked += chunk;
        index += chunk;
    }
    if (best_index < 0) throw SearchError("social optimum: budget exhausted before any profile");
    out.profile = ps.profile_at(best_index);
    out.total = best;
    return out;
}

struct BrdResult {
    enum class Kind { Converged, Cycled, RoundLimit };
    Kind kind = Kind::RoundLimit;
    Profile profile;
    int rounds = 0;
    int cycle_period = 0;
};

// Round-based better-reply dynamics: in priority order, each agent adopts its
// best response when strictly improving. Detects profile recurrence.
inline BrdResult best_response_dynamics(const Instance& inst, const Profile& start, int max_rounds,
                                        const BestResponseOptions& bropt = {}) {
    {
        auto rep = validate_profile(inst, start, true);
        if (!rep.ok()) throw SearchError("invalid start profile: " + rep.joined());
    }
    BrdResult out;
    out.profile = start;
    std::map<std::vector<std::vector<int>>, int> seen;  // edge lists -> round

    auto key_of = [&](const Profile& p) {
        std::vector<std::vector<int>> k;
        for (const auto& path : p.paths) k.push_back(path->edges);
        return k;
    };
    seen[key_of(out.profile)] = 0;

    SimOptions so;
    so.record_waits = false;
    for (int round = 1; round <= max_rounds; ++round) {
        bool changed = false;
        for (int agent : inst.priority.to_list()) {
            SimResult cur = simulate(inst, out.profile, so);
            Profile adversary = out.profile;
            adversary.paths[static_cast<std::size_t>(agent)] = std::nullopt;
            BestResponse br = best_response(inst, agent, adversary, bropt);
            if (br.cost < cur.delay[static_cast<std::size_t>(agent)]) {
                out.profile.paths[static_cast<std::size_t>(agent)] = br.path;
                changed = true;
            }
        }
        out.rounds = round;
        if (!changed) {
            out.kind = BrdResult::Kind::Converged;
            return out;
        }
        auto key = key_of(out.profile);
        auto it = seen.find(key);
        if (it != seen.end()) {
            out.kind = BrdResult::Kind::Cycled;
            out.cycle_period = round - it->second;
            return out;
        }
        seen.emplace(std::move(key), round);
    }
    out.kind = BrdResult::Kind::RoundLimit;
    return out;
}

}  // namespace frog
