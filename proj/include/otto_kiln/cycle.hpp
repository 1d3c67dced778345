// cycle.hpp: strokes, Otto and pump cycles, and the first-law ledger
//
// Cycle endpoints follow the four-stroke picture:
//
//   Otto:  A --hot isochore--> B --expansion--> C --cold isochore--> D --compression--> A'
//   Pump:  A --pump (instant)--> B --expansion--> C --cold isochore--> D --compression--> A'
//
// Adiabatic strokes freeze the populations while the frequency ramps linearly.
// Ledger quantities are defined so that each is positive in normal engine operation:
//   q_in  = w_h sum n (P^B - P^A)          w_out = sum n (w_h P^B - w_c P^C)
//   q_out = w_c sum n (P^C - P^D)          w_in  = sum n (w_h P^A' - w_c P^D)
//   w_eff = w_out - w_in

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "otto_kiln/bath.hpp"
#include "otto_kiln/config.hpp"
#include "otto_kiln/fock.hpp"

namespace otto_kiln {

inline constexpr double cyclostationary_tolerance = 1e-6;

enum class StrokeLabel { hot_isochore, expansion, cold_isochore, compression, pump };

inline std::string_view to_string(StrokeLabel s) {
    switch (s) {
    case StrokeLabel::hot_isochore: return "hot_isochore";
    case StrokeLabel::expansion: return "expansion";
    case StrokeLabel::cold_isochore: return "cold_isochore";
    case StrokeLabel::compression: return "compression";
    case StrokeLabel::pump: return "pump";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Schedule

struct IsochoricStroke {
    BathSpec bath;
    double omega;
    double duration;
};

struct AdiabaticStroke {
    double omega_from;
    double omega_to;
    double duration;
};

/// Instantaneous re-preparation of the populations at frequency `omega`.
struct PumpStroke {
    InitialStateSpec target;
    double omega;
};

using Stroke = std::variant<IsochoricStroke, AdiabaticStroke, PumpStroke>;

inline double stroke_duration(const Stroke& s) {
    if (const auto* iso = std::get_if<IsochoricStroke>(&s)) return iso->duration;
    if (const auto* ad = std::get_if<AdiabaticStroke>(&s)) return ad->duration;
    return 0.0;
}

inline double omega_at_start(const Stroke& s) {
    if (const auto* iso = std::get_if<IsochoricStroke>(&s)) return iso->omega;
    if (const auto* ad = std::get_if<AdiabaticStroke>(&s)) return ad->omega_from;
    return std::get<PumpStroke>(s).omega;
}

inline double omega_at_end(const Stroke& s) {
    if (const auto* ad = std::get_if<AdiabaticStroke>(&s)) return ad->omega_to;
    return omega_at_start(s);
}

struct StrokeSchedule {
    std::vector<Stroke> strokes;
    std::size_t cycle_count{0};

    static StrokeSchedule otto(double omega_c, double omega_h, BathSpec bath_c, BathSpec bath_h, double tau,
                               std::size_t cycles) {
        StrokeSchedule s;
        s.strokes = {IsochoricStroke{bath_h, omega_h, tau}, AdiabaticStroke{omega_h, omega_c, tau},
                     IsochoricStroke{bath_c, omega_c, tau}, AdiabaticStroke{omega_c, omega_h, tau}};
        s.cycle_count = cycles;
        s.validate();
        return s;
    }

    static StrokeSchedule pump(const InitialStateSpec& target, double omega_c, double omega_h, BathSpec bath_c,
                               double tau_bc, double tau_cd, double tau_db, std::size_t cycles) {
        StrokeSchedule s;
        s.strokes = {PumpStroke{target, omega_h}, AdiabaticStroke{omega_h, omega_c, tau_bc},
                     IsochoricStroke{bath_c, omega_c, tau_cd}, AdiabaticStroke{omega_c, omega_h, tau_db}};
        s.cycle_count = cycles;
        s.validate();
        return s;
    }

    double cycle_time() const {
        double t = 0.0;
        for (const auto& s : strokes) t += stroke_duration(s);
        return t;
    }

    /// Positive durations (pump strokes take no time), positive frequencies, and
    /// frequency continuity at every joint including the wrap into the next cycle.
    void validate() const {
        if (strokes.empty()) throw InvalidArgument("stroke schedule is empty");
        for (std::size_t i = 0; i < strokes.size(); ++i) {
            const Stroke& s = strokes[i];
            if (!std::holds_alternative<PumpStroke>(s) && !(stroke_duration(s) > 0.0))
                throw InvalidArgument("stroke " + std::to_string(i) + " has non-positive duration");
            if (!(omega_at_start(s) > 0.0) || !(omega_at_end(s) > 0.0))
                throw InvalidArgument("stroke " + std::to_string(i) + " has non-positive frequency");
            const Stroke& next = strokes[(i + 1) % strokes.size()];
            if (std::abs(omega_at_end(s) - omega_at_start(next)) > 1e-12 * omega_at_end(s))
                throw InvalidArgument("frequency discontinuity after stroke " + std::to_string(i));
        }
    }
};

// ---------------------------------------------------------------------------
// Records

struct TraceRow {
    double time;
    double omega;
    double energy;
    double entropy;
    StrokeLabel label;
    std::size_t cycle;
    FockDistribution dist;
};

/// Heat and work booked during one stroke from the populations and level energies
/// along its samples (dQ = sum E_n dP_n, dW = sum P_n dE_n).
struct StrokeAccount {
    StrokeLabel label;
    double heat{0.0};
    double work{0.0};
    double delta_energy{0.0};
    double entropy_change{0.0};
    // max |S(sample) - S(start)| over the stroke
    double entropy_excursion{0.0};
    // Integrator statistics (isochoric strokes only).
    double max_step_drift{0.0};
    double min_probability{0.0};
};

enum class CycleMode { otto, pump };

struct CycleRecord {
    CycleMode mode{CycleMode::otto};
    std::size_t cycle_index{0};
    double omega_c{0.0};
    double omega_h{0.0};
    double cycle_time{0.0};

    double q_in{0.0};
    double q_out{0.0};
    double w_out{0.0};
    double w_in{0.0};
    double w_eff{0.0};
    // Pump cycles: energy change caused by the pump, U(B) - U(A) at omega_h.
    double q_pump{0.0};
    // Pump cycles: energy of the pump target above the ground state at omega_h.
    double pump_energy{0.0};

    FockDistribution a, b, c, d, a_next;
    std::vector<StrokeAccount> strokes;

    /// (heat in) - q_out - w_eff - [U(A') - U(A)], all at omega_h. Zero up to rounding.
    double first_law_residual() const {
        const double heat_in = mode == CycleMode::otto ? q_in : q_pump;
        const double du = omega_h * (mean_occupation(a_next) - mean_occupation(a));
        return heat_in - q_out - w_eff - du;
    }
};

struct CycleResult {
    CycleRecord record;
    FockDistribution next;
    std::vector<TraceRow> rows; // times relative to the cycle start
};

struct CycleOptions {
    IsochoricOptions isochoric{};
    std::size_t adiabatic_samples{64};
};

namespace detail {

inline StrokeAccount account(StrokeLabel label, const std::vector<TraceRow>& rows, std::size_t first) {
    StrokeAccount acc{label};
    const double s0 = rows[first].entropy;
    for (std::size_t k = first; k + 1 < rows.size(); ++k) {
        const TraceRow& lo = rows[k];
        const TraceRow& hi = rows[k + 1];
        const double w_mid = 0.5 * (lo.omega + hi.omega);
        const double dw = hi.omega - lo.omega;
        for (std::size_t n = 1; n < lo.dist.size(); ++n) {
            const double dn = static_cast<double>(n);
            acc.heat += dn * w_mid * (hi.dist[n] - lo.dist[n]);
            acc.work += dn * 0.5 * (lo.dist[n] + hi.dist[n]) * dw;
        }
        acc.entropy_excursion = std::max(acc.entropy_excursion, std::abs(hi.entropy - s0));
    }
    acc.delta_energy = rows.back().energy - rows[first].energy;
    acc.entropy_change = rows.back().entropy - s0;
    return acc;
}

inline TraceRow make_row(double t, double omega, StrokeLabel label, const FockDistribution& dist) {
    return TraceRow{t, omega, internal_energy(dist, OscillatorSpec(omega)), entropy(dist), label, 0, dist};
}

} // namespace detail

// ---------------------------------------------------------------------------
// Strokes

struct AdiabaticResult {
    std::vector<TraceRow> rows; // times relative to the stroke start
    double work;                // energy change of the oscillator; positive under compression
};

inline AdiabaticResult run_adiabatic(const FockDistribution& dist, double omega_from, double omega_to,
                                     double duration, std::size_t samples = 64,
                                     StrokeLabel label = StrokeLabel::expansion) {
    if (!(omega_from > 0.0) || !(omega_to > 0.0)) throw InvalidArgument("adiabatic ramp needs positive frequencies");
    if (!(duration > 0.0)) throw InvalidArgument("adiabatic duration must be positive");
    if (samples < 2) samples = 2;
    AdiabaticResult out;
    out.rows.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(samples - 1);
        const double t = k + 1 == samples ? duration : frac * duration;
        const double omega = k + 1 == samples ? omega_to : omega_from - frac * (omega_from - omega_to);
        out.rows.push_back(detail::make_row(t, omega, label, dist));
    }
    out.work = (omega_to - omega_from) * mean_occupation(dist);
    return out;
}

struct IsochoricResult {
    std::vector<TraceRow> rows; // times relative to the stroke start
    double max_step_drift;
    double min_probability;
};

inline IsochoricResult run_isochoric(const FockDistribution& dist, const IsochoricStroke& stroke, StrokeLabel label,
                                     const IsochoricOptions& opts) {
    const RateParams params(OscillatorSpec(stroke.omega), stroke.bath);
    const Trajectory traj = evolve_isochoric(dist, params, stroke.duration, opts);
    IsochoricResult out{{}, traj.max_step_drift, traj.min_probability};
    out.rows.reserve(traj.samples.size());
    for (const auto& s : traj.samples) out.rows.push_back(detail::make_row(s.time, stroke.omega, label, s.dist));
    return out;
}

namespace detail {

inline StrokeAccount account(StrokeLabel label, const std::vector<TraceRow>& rows, std::size_t first,
                             const IsochoricResult& iso) {
    StrokeAccount acc = account(label, rows, first);
    acc.max_step_drift = iso.max_step_drift;
    acc.min_probability = iso.min_probability;
    return acc;
}

} // namespace detail

struct PumpResult {
    FockDistribution dist;
    double q_pump;
};

inline PumpResult pump(const FockDistribution& dist, const InitialStateSpec& target, double omega) {
    const OscillatorSpec osc(omega);
    FockDistribution after = make_distribution(target, dist.n_max());
    const double q = internal_energy(after, osc) - internal_energy(dist, osc);
    return {std::move(after), q};
}

// ---------------------------------------------------------------------------
// Cycles

namespace detail {

/// Appends `stroke` rows shifted by `offset`. A leading row that repeats the previous
/// final time is dropped, except a pump row, which replaces it. Returns the index of the
/// row the appended stroke starts from.
inline std::size_t append_rows(std::vector<TraceRow>& out, std::vector<TraceRow> stroke, double offset) {
    std::size_t first = out.size();
    for (auto& r : stroke) r.time += offset;
    auto begin = stroke.begin();
    if (!out.empty() && begin != stroke.end() && begin->time <= out.back().time) {
        first = out.size() - 1;
        if (begin->label == StrokeLabel::pump) out.back() = std::move(*begin);
        ++begin;
    }
    out.insert(out.end(), std::make_move_iterator(begin), std::make_move_iterator(stroke.end()));
    return first;
}

inline void fill_work_ledger(CycleRecord& r) {
    const double nb = mean_occupation(r.b), nc = mean_occupation(r.c);
    const double nd = mean_occupation(r.d), na2 = mean_occupation(r.a_next);
    r.w_out = r.omega_h * nb - r.omega_c * nc;
    r.q_out = r.omega_c * (nc - nd);
    r.w_in = r.omega_h * na2 - r.omega_c * nd;
    r.w_eff = r.w_out - r.w_in;
}

} // namespace detail

inline CycleResult run_otto_cycle(const FockDistribution& dist_at_a, double omega_c, double omega_h,
                                  const BathSpec& bath_c, const BathSpec& bath_h, double tau,
                                  const CycleOptions& opts = {}) {
    const auto schedule = StrokeSchedule::otto(omega_c, omega_h, bath_c, bath_h, tau, 1);
    CycleResult out{{}, dist_at_a, {}};
    CycleRecord& rec = out.record;
    rec.mode = CycleMode::otto;
    rec.omega_c = omega_c;
    rec.omega_h = omega_h;
    rec.cycle_time = schedule.cycle_time();
    rec.a = dist_at_a;

    auto& rows = out.rows;
    auto hot = run_isochoric(dist_at_a, std::get<IsochoricStroke>(schedule.strokes[0]), StrokeLabel::hot_isochore,
                             opts.isochoric);
    std::size_t first = detail::append_rows(rows, std::move(hot.rows), 0.0);
    rec.strokes.push_back(detail::account(StrokeLabel::hot_isochore, rows, first, hot));
    rec.b = rows.back().dist;

    first = detail::append_rows(
        rows, run_adiabatic(rec.b, omega_h, omega_c, tau, opts.adiabatic_samples, StrokeLabel::expansion).rows, tau);
    rec.strokes.push_back(detail::account(StrokeLabel::expansion, rows, first));
    rec.c = rows.back().dist;

    auto cold = run_isochoric(rec.c, std::get<IsochoricStroke>(schedule.strokes[2]), StrokeLabel::cold_isochore,
                              opts.isochoric);
    first = detail::append_rows(rows, std::move(cold.rows), 2.0 * tau);
    rec.strokes.push_back(detail::account(StrokeLabel::cold_isochore, rows, first, cold));
    rec.d = rows.back().dist;

    first = detail::append_rows(
        rows, run_adiabatic(rec.d, omega_c, omega_h, tau, opts.adiabatic_samples, StrokeLabel::compression).rows,
        3.0 * tau);
    rec.strokes.push_back(detail::account(StrokeLabel::compression, rows, first));
    rec.a_next = rows.back().dist;

    rec.q_in = omega_h * (mean_occupation(rec.b) - mean_occupation(rec.a));
    detail::fill_work_ledger(rec);
    out.next = rec.a_next;
    return out;
}

inline CycleResult run_pump_cycle(const FockDistribution& dist, const InitialStateSpec& target, double omega_c,
                                  double omega_h, const BathSpec& bath_c, double tau_bc, double tau_cd, double tau_db,
                                  const CycleOptions& opts = {}) {
    const auto schedule = StrokeSchedule::pump(target, omega_c, omega_h, bath_c, tau_bc, tau_cd, tau_db, 1);
    CycleResult out{{}, dist, {}};
    CycleRecord& rec = out.record;
    rec.mode = CycleMode::pump;
    rec.omega_c = omega_c;
    rec.omega_h = omega_h;
    rec.cycle_time = schedule.cycle_time();
    rec.a = dist;

    auto pumped = pump(dist, target, omega_h);
    rec.q_pump = pumped.q_pump;
    rec.pump_energy = internal_energy(pumped.dist, OscillatorSpec(omega_h));
    rec.b = pumped.dist;

    auto& rows = out.rows;
    rows.push_back(detail::make_row(0.0, omega_h, StrokeLabel::pump, dist));
    rows.push_back(detail::make_row(0.0, omega_h, StrokeLabel::pump, rec.b));
    StrokeAccount pump_acc{StrokeLabel::pump};
    pump_acc.heat = rec.q_pump;
    pump_acc.delta_energy = rows[1].energy - rows[0].energy;
    pump_acc.entropy_change = rows[1].entropy - rows[0].entropy;
    pump_acc.entropy_excursion = std::abs(pump_acc.entropy_change);
    rec.strokes.push_back(pump_acc);
    // The pre-pump row shares its time with the post-pump row; keep only the latter.
    rows.erase(rows.begin());

    std::size_t first = detail::append_rows(
        rows, run_adiabatic(rec.b, omega_h, omega_c, tau_bc, opts.adiabatic_samples, StrokeLabel::expansion).rows,
        0.0);
    rec.strokes.push_back(detail::account(StrokeLabel::expansion, rows, first));
    rec.c = rows.back().dist;

    auto cold = run_isochoric(rec.c, std::get<IsochoricStroke>(schedule.strokes[2]), StrokeLabel::cold_isochore,
                              opts.isochoric);
    first = detail::append_rows(rows, std::move(cold.rows), tau_bc);
    rec.strokes.push_back(detail::account(StrokeLabel::cold_isochore, rows, first, cold));
    rec.d = rows.back().dist;

    first = detail::append_rows(
        rows, run_adiabatic(rec.d, omega_c, omega_h, tau_db, opts.adiabatic_samples, StrokeLabel::compression).rows,
        tau_bc + tau_cd);
    rec.strokes.push_back(detail::account(StrokeLabel::compression, rows, first));
    rec.a_next = rows.back().dist;

    detail::fill_work_ledger(rec);
    out.next = rec.a_next;
    return out;
}

// ---------------------------------------------------------------------------
// Engine

struct EngineTrace {
    std::vector<TraceRow> timeseries;
    std::vector<CycleRecord> records;
    // Total-variation distance between A and A' of each cycle.
    std::vector<double> cyclostationarity;
    bool converged{false};
};

inline CycleOptions cycle_options(const EngineConfig& cfg) {
    CycleOptions opts;
    opts.isochoric.dt = cfg.dt;
    opts.isochoric.sample_stride = cfg.sample_stride;
    opts.isochoric.tail_tolerance = cfg.tail_tolerance;
    opts.adiabatic_samples = cfg.adiabatic_samples;
    return opts;
}

/// Chains cycles from `start`, threading A' into the next cycle's A.
inline EngineTrace run_cycles(const EngineConfig& cfg, CycleMode mode, FockDistribution start,
                              std::size_t cycles) {
    EngineTrace trace;
    if (cycles == 0) return trace;
    const CycleOptions opts = cycle_options(cfg);
    const BathSpec bath_c = cfg.cold_bath();
    const StrokeSchedule schedule =
        mode == CycleMode::otto
            ? StrokeSchedule::otto(cfg.omega_c, cfg.omega_h, bath_c, cfg.hot_bath(), cfg.tau, cycles)
            : StrokeSchedule::pump(cfg.pump_target, cfg.omega_c, cfg.omega_h, bath_c, cfg.tau_bc, cfg.tau_cd,
                                   cfg.tau_db, cycles);
    const double period = schedule.cycle_time();

    FockDistribution dist = std::move(start);
    for (std::size_t k = 0; k < schedule.cycle_count; ++k) {
        CycleResult res = mode == CycleMode::otto
                              ? run_otto_cycle(dist, cfg.omega_c, cfg.omega_h, bath_c, cfg.hot_bath(), cfg.tau, opts)
                              : run_pump_cycle(dist, cfg.pump_target, cfg.omega_c, cfg.omega_h, bath_c, cfg.tau_bc,
                                               cfg.tau_cd, cfg.tau_db, opts);
        res.record.cycle_index = k + 1;
        for (auto& row : res.rows) row.cycle = k + 1;
        detail::append_rows(trace.timeseries, std::move(res.rows), static_cast<double>(k) * period);
        trace.cyclostationarity.push_back(total_variation(res.record.a, res.record.a_next));
        trace.records.push_back(std::move(res.record));
        dist = std::move(res.next);
    }
    trace.converged = trace.cyclostationarity.back() < cyclostationary_tolerance;
    return trace;
}

inline EngineTrace run_engine(const EngineConfig& cfg) {
    if (cfg.mode != Mode::otto && cfg.mode != Mode::pump)
        throw InvalidArgument("run_engine handles otto and pump modes only");
    const CycleMode mode = cfg.mode == Mode::otto ? CycleMode::otto : CycleMode::pump;
    return run_cycles(cfg, mode, make_distribution(cfg.initial_state, cfg.n_max, cfg.tail_tolerance), cfg.n_cycles);
}

} // namespace otto_kiln
