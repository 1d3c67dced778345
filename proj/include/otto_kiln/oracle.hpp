// oracle.hpp: independent reference results for the population dynamics and cycle ledger
//
// Two routes that do not share code with the integrator: closed-form Boltzmann
// thermodynamics for the untruncated ladder, and a dense matrix exponential of the
// truncated rate-equation generator.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "otto_kiln/bath.hpp"
#include "otto_kiln/fock.hpp"

namespace otto_kiln::oracle {

inline constexpr std::size_t max_dense_levels = 65;

inline double equilibrium_occupation(double omega, double temperature) {
    return 1.0 / std::expm1(omega / temperature);
}

inline double analytic_equilibrium_energy(double omega, double temperature) {
    return omega * equilibrium_occupation(omega, temperature);
}

/// S = -ln(1-q) - q ln q / (1-q), q = exp(-omega/T).
inline double analytic_equilibrium_entropy(double omega, double temperature) {
    const double x = omega / temperature;
    const double q = std::exp(-x);
    if (q == 0.0) return 0.0;
    // -q ln q = q x
    return -std::log1p(-q) + q * x / (1.0 - q);
}

struct AnalyticCycleLedger {
    double q_in{};
    double q_out{};
    double w_out{};
    double w_in{};
    double w_eff{};
    double efficiency{};
    // Endpoint (U, S) pairs: A and D sit on cold-bath populations, B and C on hot-bath populations.
    double u_a{}, u_b{}, u_c{}, u_d{};
    double s_hot{}, s_cold{};
    bool refrigerator{false};
};

/// Steady cycle with complete thermalization in both isochores.
inline AnalyticCycleLedger analytic_cycle_thermal_balance(double omega_c, double omega_h, double t_c, double t_h) {
    if (!(omega_c > 0.0 && omega_h > omega_c))
        throw InvalidArgument("thermal-balance ledger needs 0 < omega_c < omega_h");
    if (!(t_c > 0.0 && t_h > t_c))
        throw InvalidArgument("thermal-balance ledger needs 0 < T_c < T_h");
    const double n_h = equilibrium_occupation(omega_h, t_h);
    const double n_c = equilibrium_occupation(omega_c, t_c);

    AnalyticCycleLedger out;
    out.q_in = omega_h * (n_h - n_c);
    out.w_out = (omega_h - omega_c) * n_h;
    out.q_out = omega_c * (n_h - n_c);
    out.w_in = (omega_h - omega_c) * n_c;
    out.w_eff = out.w_out - out.w_in;
    out.efficiency = 1.0 - omega_c / omega_h;
    out.u_a = omega_h * n_c;
    out.u_b = omega_h * n_h;
    out.u_c = omega_c * n_h;
    out.u_d = omega_c * n_c;
    out.s_hot = analytic_equilibrium_entropy(omega_h, t_h);
    out.s_cold = analytic_equilibrium_entropy(omega_c, t_c);
    out.refrigerator = n_h < n_c;
    return out;
}

/// Row-major dense square matrix, just enough for the propagator.
class DenseMatrix {
public:
    explicit DenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

    static DenseMatrix identity(std::size_t dim) {
        DenseMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return dim_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    DenseMatrix operator*(const DenseMatrix& rhs) const {
        DenseMatrix out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t k = 0; k < dim_; ++k) {
                const double a = (*this)(i, k);
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < dim_; ++j) out(i, j) += a * rhs(k, j);
            }
        return out;
    }

    DenseMatrix& operator+=(const DenseMatrix& rhs) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
        return *this;
    }

    DenseMatrix& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

    double norm1() const {
        double best = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) {
            double col = 0.0;
            for (std::size_t r = 0; r < dim_; ++r) col += std::abs((*this)(r, c));
            best = std::max(best, col);
        }
        return best;
    }

    std::vector<double> apply(const std::vector<double>& v) const {
        std::vector<double> out(dim_, 0.0);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

private:
    std::size_t dim_;
    std::vector<double> data_;
};

/// Generator L with dP/dt = L P. Column n holds the outflow of level n and its
/// destinations, so every column sums to zero. Absorption out of n_max is suppressed.
inline DenseMatrix rate_generator(const RateParams& params, std::size_t n_max) {
    const std::size_t dim = n_max + 1;
    DenseMatrix gen(dim);
    const double omega = params.osc.omega;
    const double temperature = params.bath.temperature;
    const double g = params.bath.gamma0 * (equilibrium_occupation(omega, temperature) + 1.0);
    const double q = std::exp(-omega / temperature);
    for (std::size_t n = 0; n < dim; ++n) {
        const double emit = 2.0 * g * static_cast<double>(n);
        const double absorb = n < n_max ? 2.0 * g * q * static_cast<double>(n + 1) : 0.0;
        if (n > 0) gen(n - 1, n) += emit;
        if (n < n_max) gen(n + 1, n) += absorb;
        gen(n, n) -= emit + absorb;
    }
    return gen;
}

/// exp(M) by scaling and squaring around a truncated Taylor series.
inline DenseMatrix expm(const DenseMatrix& m) {
    const std::size_t dim = m.dim();
    const double norm = m.norm1();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    DenseMatrix scaled = m;
    scaled *= std::ldexp(1.0, -squarings);

    // ||scaled|| <= 0.5: 24 terms leave a remainder below 0.5^25/25! ~ 1e-33.
    DenseMatrix result = DenseMatrix::identity(dim);
    DenseMatrix term = DenseMatrix::identity(dim);
    for (int k = 1; k <= 24; ++k) {
        term = term * scaled;
        term *= 1.0 / static_cast<double>(k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

inline FockDistribution propagate_matrix_exponential(const FockDistribution& dist, const RateParams& params,
                                                     double duration) {
    if (dist.size() > max_dense_levels)
        throw InvalidArgument("matrix-exponential oracle limited to n_max <= 64");
    if (duration < 0.0) throw InvalidArgument("duration must be non-negative");
    if (duration == 0.0) return dist;
    DenseMatrix gen = rate_generator(params, dist.n_max());
    gen *= duration;
    std::vector<double> v(dist.probs().begin(), dist.probs().end());
    v = expm(gen).apply(v);
    for (double& p : v) p = std::max(p, 0.0);
    return FockDistribution::from_weights(std::move(v));
}

} // namespace otto_kiln::oracle
