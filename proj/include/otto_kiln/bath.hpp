// bath.hpp: population dynamics of the oscillator in contact with a thermal bath
//
// dP_n/dt = -2 n G P_n + 2 (n+1) G P_{n+1} - 2 G q [ -n P_{n-1} + (n+1) P_n ]
//
// with G = gamma0 (n_BE + 1) and q = exp(-omega/T). The ladder is cut at n_max with a
// reflecting boundary: absorption out of n_max is suppressed so probability is conserved.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "otto_kiln/fock.hpp"

namespace otto_kiln {

inline constexpr double step_drift_tolerance = 1e-10;
inline constexpr double negativity_tolerance = 1e-12;

struct InstabilityError : Error {
    using Error::Error;
};

inline double bose_einstein(double omega, double temperature) {
    if (!(omega > 0.0) || !(temperature > 0.0))
        throw InvalidArgument("bose_einstein needs positive frequency and temperature");
    // expm1 overflows to +inf for a frozen bath, giving exactly 0.
    return 1.0 / std::expm1(omega / temperature);
}

/// Rate-equation coefficients for one isochoric stroke (frequency frozen).
struct RateParams {
    OscillatorSpec osc;
    BathSpec bath;
    double gamma;        // G = gamma0 (n_BE + 1)
    double boltz_factor; // exp(-omega/T)

    RateParams(OscillatorSpec o, BathSpec b)
        : osc(o)
        , bath(b)
        , gamma(b.gamma0 * (bose_einstein(o.omega, b.temperature) + 1.0))
        , boltz_factor(std::exp(-o.omega / b.temperature)) {}
};

/// Writes dP/dt into `out` (same length as `probs`).
inline void rate_derivative(std::span<const double> probs, const RateParams& params, std::span<double> out) {
    const std::size_t top = probs.size() - 1;
    const double down = 2.0 * params.gamma;
    const double up = 2.0 * params.gamma * params.boltz_factor;
    for (std::size_t n = 0; n <= top; ++n) {
        const double dn = static_cast<double>(n);
        double d = -down * dn * probs[n];
        if (n > 0) d += up * dn * probs[n - 1];
        if (n < top) {
            d += down * (dn + 1.0) * probs[n + 1];
            d -= up * (dn + 1.0) * probs[n];
        }
        out[n] = d;
    }
}

inline std::vector<double> rate_derivative(const FockDistribution& dist, const RateParams& params) {
    std::vector<double> out(dist.size());
    rate_derivative(dist.probs(), params, out);
    return out;
}

/// Boltzmann populations at (omega, T) on 0..n_max, the fixed point of the rate equation.
inline FockDistribution stationary_distribution(double omega, double temperature, std::size_t n_max) {
    if (!(omega > 0.0) || !(temperature > 0.0))
        throw InvalidArgument("stationary_distribution needs positive frequency and temperature");
    return FockDistribution::from_weights(geometric_weights(omega, temperature, n_max));
}

struct TrajectorySample {
    double time;
    FockDistribution dist;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::size_t sample_stride{1};
    std::size_t steps{0};
    double step_size{0.0};
    // Largest |sum P - 1| seen after a step, before renormalization.
    double max_step_drift{0.0};
    // Most negative entry seen after a step, before clamping (0 if none).
    double min_probability{0.0};

    const FockDistribution& final() const { return samples.back().dist; }
};

struct IsochoricOptions {
    double dt{0.0};                  // 0 selects the default step
    std::size_t sample_stride{0};    // 0 selects ~64 samples per stroke
    double tail_tolerance{default_tail_tolerance};
};

inline double default_isochoric_step(const RateParams& params, double duration, std::size_t n_max) {
    return std::min(duration / 1000.0, 1.0 / (40.0 * params.gamma * static_cast<double>(n_max + 1)));
}

/// Fixed-step classical RK4 integration of the rate equation over `duration`.
/// The trajectory includes both endpoints; sample times are relative to the stroke start.
inline Trajectory evolve_isochoric(const FockDistribution& dist, const RateParams& params, double duration,
                                   const IsochoricOptions& opts = {}) {
    if (!(duration > 0.0)) throw InvalidArgument("isochoric duration must be positive");
    const std::size_t size = dist.size();
    const double requested = opts.dt > 0.0 ? opts.dt : default_isochoric_step(params, duration, dist.n_max());
    if (requested > duration * (1.0 + 1e-12))
        throw InvalidArgument("time step exceeds stroke duration");

    Trajectory traj;
    traj.steps = static_cast<std::size_t>(std::ceil(duration / requested - 1e-9));
    traj.steps = std::max<std::size_t>(traj.steps, 1);
    const double h = duration / static_cast<double>(traj.steps);
    traj.step_size = h;
    traj.sample_stride = opts.sample_stride > 0 ? opts.sample_stride : std::max<std::size_t>(1, traj.steps / 64);

    std::vector<double> y(dist.probs().begin(), dist.probs().end());
    std::vector<double> k1(size), k2(size), k3(size), k4(size), tmp(size);

    traj.samples.push_back({0.0, dist});
    for (std::size_t step = 1; step <= traj.steps; ++step) {
        rate_derivative(y, params, k1);
        for (std::size_t n = 0; n < size; ++n) tmp[n] = y[n] + 0.5 * h * k1[n];
        rate_derivative(tmp, params, k2);
        for (std::size_t n = 0; n < size; ++n) tmp[n] = y[n] + 0.5 * h * k2[n];
        rate_derivative(tmp, params, k3);
        for (std::size_t n = 0; n < size; ++n) tmp[n] = y[n] + h * k3[n];
        rate_derivative(tmp, params, k4);

        double sum = 0.0;
        for (std::size_t n = 0; n < size; ++n) {
            y[n] += h * (k1[n] + 2.0 * (k2[n] + k3[n]) + k4[n]) / 6.0;
            sum += y[n];
            traj.min_probability = std::min(traj.min_probability, y[n]);
        }
        const double drift = std::abs(sum - 1.0);
        traj.max_step_drift = std::max(traj.max_step_drift, drift);
        if (drift > step_drift_tolerance)
            throw InstabilityError("probability drift " + std::to_string(drift) + " at step " + std::to_string(step));
        if (traj.min_probability < -negativity_tolerance)
            throw InstabilityError("negative probability " + std::to_string(traj.min_probability) +
                                   "; time step " + std::to_string(h) + " is too large");

        sum = 0.0;
        for (double& p : y) {
            p = std::max(p, 0.0);
            sum += p;
        }
        for (double& p : y) p /= sum;

        if (step % traj.sample_stride == 0 || step == traj.steps) {
            const double t = step == traj.steps ? duration : static_cast<double>(step) * h;
            traj.samples.push_back({t, FockDistribution(y)});
            check_tail(traj.samples.back().dist, opts.tail_tolerance);
        }
    }
    return traj;
}

} // namespace otto_kiln
