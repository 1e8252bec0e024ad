// Replanning agents on the double cycle: walks loop forever, simple paths
// terminate but cost far more than coordination.
#include <cstdio>

#include "frog/gadgets.hpp"
#include "frog/gps.hpp"

int main() {
    auto dc = frog::gen_double_cycle(4);
    frog::TieConfig adversarial{frog::TiePolicy::Procrastinate, 0};

    auto walk = frog::gps_simulate(dc.inst, adversarial, frog::GpsMode::Walk, 500);
    if (walk.status == frog::GpsOutcome::Status::NonTermination)
        std::printf("walk mode: configuration repeats (t=%lld and t=%lld), agents cycle forever\n",
                    static_cast<long long>(walk.cycle->first_seen),
                    static_cast<long long>(walk.cycle->repeated_at));

    frog::SearchBudget budget;
    budget.max_profiles = 2'000'000;
    auto rep = frog::pogps(dc.inst, budget, frog::GpsMode::SimplePath);
    std::printf("simple-path mode: worst GPS total %lld vs optimum %lld, ratio %.3f%s\n",
                static_cast<long long>(rep.worst_gps_total),
                static_cast<long long>(rep.optimum_total), rep.ratio(),
                rep.exact ? " (exact)" : "");
    return 0;
}
