// Prints the per-cycle ledger for a few starting states.

#include <cstdio>

#include "otto_kiln/otto_kiln.hpp"

int main() {
    using namespace otto_kiln;
    EngineConfig cfg;
    cfg.n_cycles = 8;
    const InitialStateSpec starts[] = {state::Ground{}, state::EqualLowest{3}, state::Boltzmann{1.5, 1.2}};
    for (const auto& start : starts) {
        cfg.initial_state = start;
        const EngineTrace trace = run_engine(cfg);
        std::printf("%s\n  %5s %11s %11s %11s %11s\n", describe(start).c_str(), "cycle", "q_in", "w_eff",
                    "efficiency", "power");
        for (const auto& r : trace.records)
            std::printf("  %5zu %11.6f %11.6f %11.6f %11.6f\n", r.cycle_index, r.q_in, r.w_eff,
                        cycle_efficiency(r).value_or(0.0), cycle_power(r));
    }
    std::printf("Otto limit %.6f, Carnot limit %.6f\n", otto_limit(cfg.omega_c, cfg.omega_h),
                carnot_limit(cfg.t_c, cfg.t_h));
}
