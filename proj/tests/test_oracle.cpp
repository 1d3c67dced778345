#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "otto_kiln/bath.hpp"
#include "otto_kiln/oracle.hpp"

using namespace otto_kiln;
using namespace otto_kiln::oracle;

TEST(AnalyticEquilibrium, Energy) {
    EXPECT_NEAR(analytic_equilibrium_energy(1.0, 0.4), 0.08942548983385201, 1e-15);
    EXPECT_NEAR(analytic_equilibrium_energy(1.5, 1.2), 0.6023266777395193, 1e-15);
    EXPECT_EQ(analytic_equilibrium_energy(1.0, 1e-5), 0.0);
}

TEST(AnalyticEquilibrium, EntropyMatchesDirectSum) {
    for (double omega : {0.5, 1.0, 1.5})
        for (double t : {0.2, 0.4, 1.2}) {
            // direct summation to n = 200
            const double q = std::exp(-omega / t);
            double s = 0.0;
            for (int n = 0; n <= 200; ++n) {
                const double p = (1.0 - q) * std::pow(q, n);
                if (p > 0.0) s -= p * std::log(p);
            }
            EXPECT_NEAR(analytic_equilibrium_entropy(omega, t), s, 1e-12);
        }
    EXPECT_EQ(analytic_equilibrium_entropy(1.0, 1e-5), 0.0);
}

TEST(ThermalBalanceLedger, ReferenceParameters) {
    const auto l = analytic_cycle_thermal_balance(1.0, 1.5, 0.4, 1.2);
    EXPECT_NEAR(l.q_in, 0.4681884429887413, 1e-12);
    EXPECT_NEAR(l.w_out, 0.20077555924650645, 1e-12);
    EXPECT_NEAR(l.q_out, 0.3121256286591609, 1e-12);
    EXPECT_NEAR(l.w_in, 0.044712744916926006, 1e-12);
    EXPECT_NEAR(l.w_eff, 0.15606281432958044, 1e-12);
    EXPECT_NEAR(l.efficiency, 1.0 / 3.0, 1e-15);
    EXPECT_FALSE(l.refrigerator);
}

TEST(ThermalBalanceLedger, CarnotPoint) {
    // omega_c / omega_h = T_c / T_h: both baths leave the same occupation.
    const auto l = analytic_cycle_thermal_balance(1.0, 3.0, 0.4, 1.2);
    EXPECT_NEAR(l.q_in, 0.0, 1e-14);
    EXPECT_NEAR(l.w_eff, 0.0, 1e-14);
}

TEST(ThermalBalanceLedger, RefrigeratorFlagged) {
    EXPECT_TRUE(analytic_cycle_thermal_balance(1.0, 4.0, 0.4, 1.2).refrigerator);
    EXPECT_THROW(analytic_cycle_thermal_balance(1.5, 1.0, 0.4, 1.2), InvalidArgument);
}

TEST(ThermalBalanceLedger, IdentitiesAtRandomParameters) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double wc = 0.2 + u(rng), wh = wc * (1.05 + 2.0 * u(rng));
        const double tc = 0.1 + u(rng), th = tc * (1.05 + 3.0 * u(rng));
        const auto l = analytic_cycle_thermal_balance(wc, wh, tc, th);
        EXPECT_NEAR(l.q_in - l.q_out - l.w_eff, 0.0, 1e-14);
        if (std::abs(l.q_in) > 1e-9) {
            EXPECT_NEAR(l.w_eff / l.q_in, 1.0 - wc / wh, 1e-9);
        }
    }
}

TEST(RateGenerator, ColumnsSumToZero) {
    const RateParams p(OscillatorSpec(1.3), BathSpec(0.7, 0.4));
    const auto gen = rate_generator(p, 30);
    for (std::size_t c = 0; c < gen.dim(); ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < gen.dim(); ++r) s += gen(r, c);
        EXPECT_NEAR(s, 0.0, 1e-13);
    }
}

TEST(MatrixExponential, IdentityAndStationary) {
    const RateParams p(OscillatorSpec(1.5), BathSpec(1.2, 0.5));
    const auto g = FockDistribution::number_state(3, 40);
    EXPECT_EQ(propagate_matrix_exponential(g, p, 0.0), g);
    const auto eq = stationary_distribution(1.5, 1.2, 40);
    EXPECT_LE(total_variation(propagate_matrix_exponential(eq, p, 4.0), eq), 1e-12);
}

TEST(MatrixExponential, Semigroup) {
    const RateParams p(OscillatorSpec(1.0), BathSpec(0.6, 0.3));
    const auto start = FockDistribution::from_weights({0.1, 0.2, 0.3, 0.4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    const auto whole = propagate_matrix_exponential(start, p, 3.5);
    const auto split = propagate_matrix_exponential(propagate_matrix_exponential(start, p, 1.25), p, 2.25);
    EXPECT_LE(total_variation(whole, split), 1e-10);
}

TEST(MatrixExponential, MatchesIntegrator) {
    const RateParams p(OscillatorSpec(1.5), BathSpec(1.2, 0.5));
    const auto g = FockDistribution::number_state(0, 50);
    EXPECT_LE(total_variation(propagate_matrix_exponential(g, p, 2.0), evolve_isochoric(g, p, 2.0).final()), 1e-8);
}

TEST(MatrixExponential, SizeLimit) {
    const RateParams p(OscillatorSpec(1.5), BathSpec(1.2, 0.5));
    EXPECT_THROW(propagate_matrix_exponential(FockDistribution::number_state(0, 80), p, 1.0), InvalidArgument);
}
