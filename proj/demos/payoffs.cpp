// Prints the pursuer/evader payoff table and lets the dynamics chase it.
#include <cstdio>

#include "frog/engine.hpp"
#include "frog/equilibrium.hpp"
#include "frog/gadgets.hpp"

int main() {
    auto pe = frog::gen_pursuer_evader();
    const char* names[2] = {"down", "up"};
    std::printf("        evader-up      evader-down\n");
    for (int pu = 1; pu >= 0; --pu) {
        std::printf("%-8s", pu ? "p-up" : "p-down");
        for (int eu = 1; eu >= 0; --eu) {
            auto res = frog::simulate(pe.inst, frog::pursuer_evader_profile(pe, pu, eu));
            std::printf("  (%lld, %lld)    ", static_cast<long long>(res.delay[0]),
                        static_cast<long long>(res.delay[1]));
        }
        std::printf("\n");
    }
    (void)names;
    auto r = frog::best_response_dynamics(pe.inst, frog::pursuer_evader_profile(pe, true, true), 40);
    if (r.kind == frog::BrdResult::Kind::Cycled)
        std::printf("best-response dynamics cycle with period %d: no equilibrium to converge to\n",
                    r.cycle_period);
    return 0;
}
