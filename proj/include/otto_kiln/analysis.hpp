// analysis.hpp: efficiency, power, thermodynamic limits and the efficiency/power sweep

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "otto_kiln/bath.hpp"
#include "otto_kiln/config.hpp"
#include "otto_kiln/cycle.hpp"

namespace otto_kiln {

// Heat denominators below this are reported as an undefined efficiency.
inline constexpr double undefined_efficiency_threshold = 1e-12;

inline double otto_limit(double omega_c, double omega_h) {
    if (!(omega_c > 0.0) || !(omega_h > 0.0)) throw InvalidArgument("otto_limit needs positive frequencies");
    return 1.0 - omega_c / omega_h;
}

inline double carnot_limit(double t_c, double t_h) {
    if (!(t_c > 0.0) || !(t_h > 0.0)) throw InvalidArgument("carnot_limit needs positive temperatures");
    return 1.0 - t_c / t_h;
}

/// Otto cycles: w_eff / q_in. Pump cycles: w_eff over the pump energy (energy of the
/// pump target above the ground state). nullopt when the denominator vanishes.
inline std::optional<double> cycle_efficiency(const CycleRecord& record) {
    const double denom = record.mode == CycleMode::otto ? record.q_in : record.pump_energy;
    if (std::abs(denom) < undefined_efficiency_threshold) return std::nullopt;
    return record.w_eff / denom;
}

/// Pump cycles only: w_eff over the energy the pump actually deposited, U(B) - U(A).
inline std::optional<double> pump_deposit_efficiency(const CycleRecord& record) {
    if (record.mode != CycleMode::pump || std::abs(record.q_pump) < undefined_efficiency_threshold)
        return std::nullopt;
    return record.w_eff / record.q_pump;
}

inline double cycle_power(const CycleRecord& record, double total_cycle_time) {
    if (!(total_cycle_time > 0.0)) throw InvalidArgument("cycle time must be positive");
    return record.w_eff / total_cycle_time;
}

inline double cycle_power(const CycleRecord& record) { return cycle_power(record, record.cycle_time); }

// ---------------------------------------------------------------------------
// Sweep

struct SweepPoint {
    double t_h;
    double ratio; // omega_c / omega_h
    std::optional<double> efficiency;
    double power;
    bool converged;
    std::size_t cycles;
};

/// Uniform grid over [ratio_min, ratio_max]; ratio_min = 0 means T_c/T_h + 0.01.
inline std::vector<double> ratio_grid(const SweepSettings& s, double t_c, double t_h) {
    const double lo = s.ratio_min > 0.0 ? s.ratio_min : t_c / t_h + 0.01;
    const double hi = s.ratio_max;
    if (!(lo < hi)) throw InvalidArgument("empty ratio grid");
    std::vector<double> out(s.ratio_steps);
    for (std::size_t i = 0; i < s.ratio_steps; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(s.ratio_steps - 1);
    return out;
}

/// One sweep point: omega_c stays at the configured value and omega_h = omega_c / ratio.
/// Thermal-balance mode starts A on the cold-bath populations and uses the long sweep tau;
/// otherwise the run starts from the configured initial state with the engine tau. Cycles
/// repeat until consecutive A points agree within the cyclostationary tolerance.
inline SweepPoint run_sweep_point(const EngineConfig& cfg, double t_h, double ratio) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw InvalidArgument("sweep ratio must lie in (0, 1]");
    const double omega_c = cfg.omega_c;
    const double omega_h = omega_c / ratio;
    const bool balance = cfg.sweep.thermal_balance;
    const double tau = balance ? cfg.sweep.tau : cfg.tau;
    const BathSpec bath_c(cfg.t_c, cfg.gamma0);
    const BathSpec bath_h(t_h, cfg.gamma0);

    CycleOptions opts;
    opts.isochoric.dt = cfg.dt;
    opts.isochoric.tail_tolerance = cfg.tail_tolerance;
    opts.isochoric.sample_stride = std::numeric_limits<std::size_t>::max();
    opts.adiabatic_samples = 2;

    FockDistribution dist = balance ? stationary_distribution(omega_c, cfg.t_c, cfg.n_max)
                                    : make_distribution(cfg.initial_state, cfg.n_max, cfg.tail_tolerance);
    SweepPoint point{t_h, ratio, std::nullopt, 0.0, false, 0};
    for (std::size_t k = 0; k < cfg.sweep.max_cycles; ++k) {
        CycleResult res = run_otto_cycle(dist, omega_c, omega_h, bath_c, bath_h, tau, opts);
        point.cycles = k + 1;
        point.converged = total_variation(res.record.a, res.record.a_next) < cyclostationary_tolerance;
        point.power = cycle_power(res.record);
        point.efficiency = cycle_efficiency(res.record);
        // At the Carnot point q_in vanishes; in the cyclostationary state the efficiency
        // ratio sum n(P^B - P^A') / sum n(P^B - P^A) is identically 1, leaving the Otto limit.
        if (!point.efficiency && point.converged) point.efficiency = otto_limit(omega_c, omega_h);
        dist = std::move(res.next);
        if (point.converged) break;
    }
    return point;
}

/// Thread count: the configured value (0 = hardware concurrency), capped by OTTO_KILN_THREADS.
inline std::size_t sweep_thread_count(const SweepSettings& s) {
    std::size_t n = s.threads > 0 ? s.threads : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("OTTO_KILN_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    }
    return std::max<std::size_t>(n, 1);
}

/// All (T_h, ratio) points, ordered by T_h as listed and then by ascending ratio,
/// independent of how the work was split across threads.
inline std::vector<SweepPoint> sweep_efficiency_power(const EngineConfig& cfg) {
    struct Job {
        double t_h;
        double ratio;
    };
    std::vector<Job> jobs;
    for (double t_h : cfg.sweep.t_h_list)
        for (double r : ratio_grid(cfg.sweep, cfg.t_c, t_h)) jobs.push_back({t_h, r});

    std::vector<SweepPoint> points(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                points[i] = run_sweep_point(cfg, jobs[i].t_h, jobs[i].ratio);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(sweep_thread_count(cfg.sweep), std::max<std::size_t>(jobs.size(), 1));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return points;
}

} // namespace otto_kiln
