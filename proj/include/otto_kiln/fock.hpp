// fock.hpp: truncated Fock-space populations and their thermodynamic functionals
//
// Units throughout the library: hbar = k_B = 1, energies in units of hbar*omega_c,
// times in units of tau_c = 2*pi/omega_c. Level energies use the E_0 = 0 convention,
// E_n = n*omega.

#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace otto_kiln {

inline constexpr double normalization_tolerance = 1e-12;
inline constexpr double default_tail_tolerance = 1e-9;
inline constexpr std::size_t default_n_max = 50;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Highest level carries more mass than the tail tolerance allows.
struct TruncationError : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

struct OscillatorSpec {
    double omega{1.0};

    explicit OscillatorSpec(double w) : omega(w) {
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw InvalidArgument("oscillator frequency must be positive, got " + std::to_string(omega));
    }
};

struct BathSpec {
    double temperature{1.0};
    double gamma0{0.5};

    BathSpec(double t, double g0) : temperature(t), gamma0(g0) {
        if (!(temperature > 0.0) || !std::isfinite(temperature))
            throw InvalidArgument("bath temperature must be positive, got " + std::to_string(temperature));
        if (!(gamma0 > 0.0) || !std::isfinite(gamma0))
            throw InvalidArgument("relaxation constant gamma0 must be positive, got " + std::to_string(gamma0));
    }

    static BathSpec from_relaxation_time(double temperature, double relaxation_time) {
        if (!(relaxation_time > 0.0))
            throw InvalidArgument("relaxation time must be positive");
        return BathSpec(temperature, 1.0 / (2.0 * relaxation_time));
    }
};

/// Probability vector over levels 0..n_max. Always normalized and non-negative.
class FockDistribution {
public:
    /// Single-level ground state.
    FockDistribution() : probs_{1.0} {}

    /// Validates an already-normalized vector.
    explicit FockDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty())
            throw InvalidArgument("distribution needs at least one level");
        double sum = 0.0;
        for (double p : probs_) {
            if (!(p >= 0.0))
                throw InvalidArgument("negative or non-finite probability in distribution");
            sum += p;
        }
        if (std::abs(sum - 1.0) > normalization_tolerance)
            throw InvalidArgument("distribution not normalized: sum = " + std::to_string(sum));
    }

    /// Normalizes arbitrary non-negative weights.
    static FockDistribution from_weights(std::vector<double> weights) {
        double sum = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw InvalidArgument("weights must be finite and non-negative");
            sum += w;
        }
        if (!(sum > 0.0))
            throw InvalidArgument("weights sum to zero");
        for (double& w : weights) w /= sum;
        return FockDistribution(std::move(weights));
    }

    static FockDistribution number_state(std::size_t level, std::size_t n_max) {
        if (level > n_max)
            throw InvalidArgument("number state level exceeds n_max");
        std::vector<double> p(n_max + 1, 0.0);
        p[level] = 1.0;
        return FockDistribution(std::move(p));
    }

    std::size_t n_max() const { return probs_.size() - 1; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t n) const { return probs_[n]; }
    std::span<const double> probs() const { return probs_; }
    double tail_mass() const { return probs_.back(); }

    bool operator==(const FockDistribution&) const = default;

private:
    std::vector<double> probs_;
};

inline double mean_occupation(const FockDistribution& dist) {
    double acc = 0.0;
    for (std::size_t n = 1; n < dist.size(); ++n) acc += static_cast<double>(n) * dist[n];
    return acc;
}

inline double internal_energy(const FockDistribution& dist, const OscillatorSpec& osc) {
    return osc.omega * mean_occupation(dist);
}

/// Von Neumann entropy of the populations, in units of k_B (0 ln 0 = 0).
inline double entropy(const FockDistribution& dist) {
    double s = 0.0;
    for (double p : dist.probs())
        if (p > 0.0) s -= p * std::log(p);
    return s;
}

/// Half the L1 distance. Requires equal truncation.
inline double total_variation(const FockDistribution& a, const FockDistribution& b) {
    if (a.size() != b.size())
        throw InvalidArgument("total variation between distributions of different truncation");
    double acc = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) acc += std::abs(a[n] - b[n]);
    return 0.5 * acc;
}

inline void check_tail(const FockDistribution& dist, double tail_tolerance) {
    if (dist.tail_mass() > tail_tolerance)
        throw TruncationError("tail mass " + std::to_string(dist.tail_mass()) + " at level n_max = " +
                              std::to_string(dist.n_max()) + " exceeds tolerance " +
                              std::to_string(tail_tolerance) + "; increase n_max");
}

// ---------------------------------------------------------------------------
// Initial-state descriptions

namespace state {

struct Ground {
    bool operator==(const Ground&) const = default;
};

/// Equal weight on the k lowest levels.
struct EqualLowest {
    std::size_t levels{3};
    bool operator==(const EqualLowest&) const = default;
};

/// P_n ~ exp(-[(n - center) * omega_ref / temperature_ref]^2)
struct Gaussian {
    std::size_t center{2};
    double omega_ref{1.5};
    double temperature_ref{1.2};
    bool operator==(const Gaussian&) const = default;
};

struct Boltzmann {
    double omega{1.0};
    double temperature{1.0};
    bool operator==(const Boltzmann&) const = default;
};

/// Pure number state |level>.
struct Fock {
    std::size_t level{1};
    bool operator==(const Fock&) const = default;
};

} // namespace state

using InitialStateSpec = std::variant<state::Ground, state::EqualLowest, state::Gaussian, state::Boltzmann, state::Fock>;

inline std::string describe(const InitialStateSpec& spec) {
    struct Visitor {
        std::string operator()(const state::Ground&) const { return "ground"; }
        std::string operator()(const state::EqualLowest& s) const {
            return "equal_lowest(" + std::to_string(s.levels) + ")";
        }
        std::string operator()(const state::Gaussian& s) const {
            return "gaussian(center=" + std::to_string(s.center) + ")";
        }
        std::string operator()(const state::Boltzmann&) const { return "boltzmann"; }
        std::string operator()(const state::Fock& s) const { return "fock(" + std::to_string(s.level) + ")"; }
    };
    return std::visit(Visitor{}, spec);
}

/// Geometric populations with ratio exp(-omega/T), normalized on 0..n_max.
/// T -> 0 collapses onto the ground state.
inline std::vector<double> geometric_weights(double omega, double temperature, std::size_t n_max) {
    const double ratio = std::exp(-omega / temperature);
    std::vector<double> w(n_max + 1);
    double term = 1.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        w[n] = term;
        term *= ratio;
    }
    return w;
}

inline FockDistribution make_distribution(const InitialStateSpec& spec, std::size_t n_max,
                                          double tail_tolerance = default_tail_tolerance) {
    struct Visitor {
        std::size_t n_max;

        FockDistribution operator()(const state::Ground&) const { return FockDistribution::number_state(0, n_max); }

        FockDistribution operator()(const state::EqualLowest& s) const {
            if (s.levels < 1) throw InvalidArgument("equal_lowest needs at least one level");
            if (s.levels > n_max)
                throw TruncationError("equal_lowest(" + std::to_string(s.levels) + ") does not fit below n_max = " +
                                      std::to_string(n_max));
            std::vector<double> w(n_max + 1, 0.0);
            for (std::size_t n = 0; n < s.levels; ++n) w[n] = 1.0;
            return FockDistribution::from_weights(std::move(w));
        }

        FockDistribution operator()(const state::Gaussian& s) const {
            if (s.center >= n_max) throw InvalidArgument("gaussian center must lie below n_max");
            if (!(s.omega_ref > 0.0) || !(s.temperature_ref > 0.0))
                throw InvalidArgument("gaussian reference frequency and temperature must be positive");
            const double scale = s.omega_ref / s.temperature_ref;
            std::vector<double> w(n_max + 1);
            for (std::size_t n = 0; n <= n_max; ++n) {
                const double x = (static_cast<double>(n) - static_cast<double>(s.center)) * scale;
                w[n] = std::exp(-x * x);
            }
            return FockDistribution::from_weights(std::move(w));
        }

        FockDistribution operator()(const state::Boltzmann& s) const {
            if (!(s.omega > 0.0) || !(s.temperature > 0.0))
                throw InvalidArgument("boltzmann frequency and temperature must be positive");
            return FockDistribution::from_weights(geometric_weights(s.omega, s.temperature, n_max));
        }

        FockDistribution operator()(const state::Fock& s) const {
            if (s.level >= n_max)
                throw TruncationError("fock(" + std::to_string(s.level) + ") needs n_max above the level");
            return FockDistribution::number_state(s.level, n_max);
        }
    };
    auto dist = std::visit(Visitor{n_max}, spec);
    check_tail(dist, tail_tolerance);
    return dist;
}

} // namespace otto_kiln
