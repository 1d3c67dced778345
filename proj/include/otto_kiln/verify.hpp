// verify.hpp: invariant audits on engine traces and the self-check suite behind `verify`

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "otto_kiln/analysis.hpp"
#include "otto_kiln/bath.hpp"
#include "otto_kiln/cycle.hpp"
#include "otto_kiln/oracle.hpp"

namespace otto_kiln {

struct CheckResult {
    std::string name;
    double value;     // worst observed figure
    double tolerance; // pass iff value <= tolerance
    bool pass() const { return value <= tolerance; }
};

inline constexpr double first_law_tolerance = 1e-9;
inline constexpr double adiabatic_entropy_tolerance = 1e-14;
// Long enough that e^{-2 gamma0 tau} leaves nothing measurable at gamma0 = 0.5.
inline constexpr double thermal_balance_tau = 20.0;

/// Invariants every engine trace must satisfy.
inline std::vector<CheckResult> trace_invariants(const EngineTrace& trace, const std::string& tag) {
    double drift = 0.0, negativity = 0.0, stroke_law = 0.0, bath_work = 0.0, ramp_heat = 0.0, ramp_entropy = 0.0;
    double cycle_law = 0.0;
    for (const auto& rec : trace.records) {
        cycle_law = std::max(cycle_law, std::abs(rec.first_law_residual()));
        for (const auto& s : rec.strokes) {
            drift = std::max(drift, s.max_step_drift);
            negativity = std::max(negativity, -s.min_probability);
            stroke_law = std::max(stroke_law, std::abs(s.delta_energy - s.heat - s.work));
            switch (s.label) {
            case StrokeLabel::hot_isochore:
            case StrokeLabel::cold_isochore: bath_work = std::max(bath_work, std::abs(s.work)); break;
            case StrokeLabel::expansion:
            case StrokeLabel::compression:
                ramp_heat = std::max(ramp_heat, std::abs(s.heat));
                ramp_entropy = std::max(ramp_entropy, s.entropy_excursion);
                break;
            case StrokeLabel::pump: break;
            }
        }
    }
    double norm = 0.0, energy = 0.0, time_order = 0.0;
    for (std::size_t i = 0; i < trace.timeseries.size(); ++i) {
        const auto& row = trace.timeseries[i];
        double sum = 0.0;
        for (double p : row.dist.probs()) sum += p;
        norm = std::max(norm, std::abs(sum - 1.0));
        energy = std::max(energy, std::abs(row.energy - internal_energy(row.dist, OscillatorSpec(row.omega))));
        if (i > 0 && !(row.time > trace.timeseries[i - 1].time)) time_order = 1.0;
    }
    return {
        {tag + ": probability drift per step", drift, step_drift_tolerance},
        {tag + ": negative probability", negativity, negativity_tolerance},
        {tag + ": per-stroke first law", stroke_law, first_law_tolerance},
        {tag + ": work during isochores", bath_work, first_law_tolerance},
        {tag + ": heat during adiabats", ramp_heat, first_law_tolerance},
        {tag + ": adiabatic entropy change", ramp_entropy, adiabatic_entropy_tolerance},
        {tag + ": per-cycle first law", cycle_law, first_law_tolerance},
        {tag + ": timeseries normalization", norm, 1e-9},
        {tag + ": timeseries energy consistency", energy, 1e-12},
        {tag + ": timeseries time ordering", time_order, 0.0},
    };
}

/// Largest |dP/dt| at the Boltzmann populations over a grid of (omega, T).
inline double detailed_balance_residual(std::size_t n_max) {
    double worst = 0.0;
    for (double omega : {0.5, 1.0, 1.5, 2.0})
        for (double t : {0.2, 0.4, 1.2}) {
            const RateParams params(OscillatorSpec(omega), BathSpec(t, 0.5));
            for (double d : rate_derivative(stationary_distribution(omega, t, n_max), params))
                worst = std::max(worst, std::abs(d));
        }
    return worst;
}

/// Worst total variation between the stepped integrator and the matrix exponential
/// over `samples` seeded random (distribution, omega, T, gamma0, duration) tuples.
inline double oracle_equivalence(std::size_t samples, std::size_t n_max, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        std::vector<double> w(n_max + 1, 0.0);
        for (std::size_t n = 0; n <= std::min<std::size_t>(6, n_max); ++n) w[n] = unit(rng);
        const FockDistribution start = FockDistribution::from_weights(w);
        const double omega = 1.0 + unit(rng);
        const double t = 0.2 + 0.6 * unit(rng);
        const double gamma0 = 0.05 + 0.95 * unit(rng);
        const double duration = 0.1 + 9.9 * unit(rng);
        const RateParams params(OscillatorSpec(omega), BathSpec(t, gamma0));
        const auto stepped = evolve_isochoric(start, params, duration).final();
        const auto exact = oracle::propagate_matrix_exponential(start, params, duration);
        worst = std::max(worst, total_variation(stepped, exact));
    }
    return worst;
}

/// Thermal-balance cycle (long tau, A on the cold-bath populations) against the closed form.
inline double thermal_balance_deviation(const EngineConfig& base) {
    EngineConfig cfg = base;
    cfg.tau = thermal_balance_tau;
    const auto ledger = oracle::analytic_cycle_thermal_balance(cfg.omega_c, cfg.omega_h, cfg.t_c, cfg.t_h);
    const auto trace =
        run_cycles(cfg, CycleMode::otto, stationary_distribution(cfg.omega_c, cfg.t_c, cfg.n_max), 2);
    const CycleRecord& r = trace.records.back();
    return std::max({std::abs(r.q_in - ledger.q_in), std::abs(r.q_out - ledger.q_out),
                     std::abs(r.w_out - ledger.w_out), std::abs(r.w_in - ledger.w_in),
                     std::abs(r.w_eff - ledger.w_eff),
                     std::abs(cycle_efficiency(r).value_or(0.0) - ledger.efficiency)});
}

inline std::vector<CheckResult> verification_suite(const EngineConfig& base) {
    std::vector<CheckResult> out;
    out.push_back({"detailed-balance stationarity", detailed_balance_residual(base.n_max), 1e-12});
    out.push_back({"stepped vs matrix-exponential propagation", oracle_equivalence(10, 20, 20240601u), 1e-8});

    EngineConfig otto = base;
    otto.mode = Mode::otto;
    otto.initial_state = state::Ground{};
    const auto ground_run = run_engine(otto);
    for (auto& c : trace_invariants(ground_run, "otto/ground")) out.push_back(c);
    out.push_back({"otto/ground: final efficiency vs Otto limit",
                   std::abs(cycle_efficiency(ground_run.records.back()).value_or(0.0) -
                            otto_limit(otto.omega_c, otto.omega_h)),
                   1e-3});

    otto.initial_state = state::EqualLowest{3};
    for (auto& c : trace_invariants(run_engine(otto), "otto/equal_lowest(3)")) out.push_back(c);

    EngineConfig pumped = base;
    pumped.mode = Mode::pump;
    pumped.initial_state = state::Ground{};
    pumped.n_cycles = 5;
    for (auto& c : trace_invariants(run_engine(pumped), "pump/fock(1)")) out.push_back(c);

    out.push_back({"thermal-balance ledger vs closed form", thermal_balance_deviation(base), 1e-5});
    return out;
}

inline bool print_checks(const std::vector<CheckResult>& checks, std::ostream& os) {
    bool all = true;
    for (const auto& c : checks) {
        char line[256];
        std::snprintf(line, sizeof line, "%-4s  %-55s  %.3e  (tol %.1e)\n", c.pass() ? "PASS" : "FAIL",
                      c.name.c_str(), c.value, c.tolerance);
        os << line;
        all = all && c.pass();
    }
    return all;
}

} // namespace otto_kiln
