#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "otto_kiln/fock.hpp"

using namespace otto_kiln;

namespace {

// Reference values below come from an independent geometric-series / direct-summation
// computation (numpy, n_max = 50), not from this library.
constexpr double boltz_1_04_p0 = 0.9179150013761012;
constexpr double boltz_1_04_entropy = 0.30921420832666824;
constexpr double nbe_15_12 = 0.4015511184930129;

double sum(const FockDistribution& d) {
    double s = 0.0;
    for (double p : d.probs()) s += p;
    return s;
}

} // namespace

TEST(MakeDistribution, Ground) {
    const auto d = make_distribution(state::Ground{}, 50);
    ASSERT_EQ(d.size(), 51u);
    EXPECT_EQ(d[0], 1.0);
    for (std::size_t n = 1; n < d.size(); ++n) EXPECT_EQ(d[n], 0.0);
}

TEST(MakeDistribution, EqualLowestThree) {
    const auto d = make_distribution(state::EqualLowest{3}, 50);
    for (std::size_t n = 0; n < 3; ++n) EXPECT_NEAR(d[n], 1.0 / 3.0, 1e-15);
    EXPECT_EQ(d[3], 0.0);
}

TEST(MakeDistribution, Boltzmann) {
    const auto d = make_distribution(state::Boltzmann{1.0, 0.4}, 50);
    EXPECT_NEAR(d[0], boltz_1_04_p0, 1e-12);
    const double q = std::exp(-2.5);
    for (std::size_t n = 1; n < 10; ++n) EXPECT_NEAR(d[n] / d[n - 1], q, 1e-12);
}

TEST(MakeDistribution, GaussianIsNormalizedAndPeaked) {
    const auto d = make_distribution(state::Gaussian{4, 1.5, 1.2}, 50);
    EXPECT_NEAR(sum(d), 1.0, 1e-12);
    for (std::size_t n = 0; n < d.size(); ++n)
        if (n != 4) {
            EXPECT_LT(d[n], d[4]);
        }
    // exp(-(1.25)^2) between neighbours of the centre
    EXPECT_NEAR(d[5] / d[4], std::exp(-1.5625), 1e-12);
    EXPECT_NEAR(d[3], d[5], 1e-15);
}

TEST(MakeDistribution, Errors) {
    EXPECT_THROW(make_distribution(state::EqualLowest{0}, 10), InvalidArgument);
    EXPECT_THROW(make_distribution(state::EqualLowest{11}, 10), TruncationError);
    EXPECT_THROW(make_distribution(state::Gaussian{10, 1.5, 1.2}, 10), InvalidArgument);
    EXPECT_THROW(make_distribution(state::Gaussian{2, -1.0, 1.2}, 10), InvalidArgument);
    EXPECT_THROW(make_distribution(state::Boltzmann{1.0, 0.0}, 10), InvalidArgument);
    // hot and coarse: most of the mass cannot fit below n_max = 5
    EXPECT_THROW(make_distribution(state::Boltzmann{0.1, 2.0}, 5), TruncationError);
    EXPECT_THROW(make_distribution(state::Fock{5}, 5), TruncationError);
}

TEST(FockDistribution, RejectsInvalidVectors) {
    EXPECT_THROW(FockDistribution(std::vector<double>{}), InvalidArgument);
    EXPECT_THROW(FockDistribution(std::vector<double>{0.5, 0.6}), InvalidArgument);
    EXPECT_THROW(FockDistribution(std::vector<double>{1.1, -0.1}), InvalidArgument);
    EXPECT_THROW(FockDistribution::from_weights({0.0, 0.0}), InvalidArgument);
    EXPECT_NO_THROW(FockDistribution(std::vector<double>{0.25, 0.75}));
}

TEST(Functionals, InternalEnergy) {
    EXPECT_EQ(internal_energy(make_distribution(state::Ground{}, 50), OscillatorSpec(2.7)), 0.0);
    EXPECT_NEAR(internal_energy(make_distribution(state::EqualLowest{3}, 50), OscillatorSpec(1.5)), 1.5, 1e-15);
    EXPECT_NEAR(internal_energy(make_distribution(state::Boltzmann{1.5, 1.2}, 50), OscillatorSpec(1.5)),
                1.5 * nbe_15_12, 1e-12);
}

TEST(Functionals, Entropy) {
    EXPECT_EQ(entropy(make_distribution(state::Ground{}, 50)), 0.0);
    EXPECT_NEAR(entropy(make_distribution(state::EqualLowest{3}, 50)), std::log(3.0), 1e-15);
    EXPECT_NEAR(entropy(make_distribution(state::Boltzmann{1.0, 0.4}, 50)), boltz_1_04_entropy, 1e-12);
}

TEST(Functionals, MeanOccupation) {
    EXPECT_EQ(mean_occupation(make_distribution(state::Ground{}, 50)), 0.0);
    EXPECT_NEAR(mean_occupation(make_distribution(state::EqualLowest{3}, 50)), 1.0, 1e-15);
    EXPECT_NEAR(mean_occupation(make_distribution(state::Boltzmann{1.5, 1.2}, 50)), nbe_15_12, 1e-12);
}

TEST(Functionals, TotalVariation) {
    const auto a = FockDistribution::number_state(0, 4);
    const auto b = FockDistribution::number_state(2, 4);
    EXPECT_EQ(total_variation(a, a), 0.0);
    EXPECT_EQ(total_variation(a, b), 1.0);
    EXPECT_THROW(total_variation(a, FockDistribution::number_state(0, 5)), InvalidArgument);
}

// Property checks over random specs.
TEST(FockProperties, NormalizedAndNonNegative) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n_max = 40 + rng() % 40;
        InitialStateSpec spec;
        switch (i % 5) {
        case 0: spec = state::Ground{}; break;
        case 1: spec = state::EqualLowest{1 + rng() % 20}; break;
        case 2: spec = state::Gaussian{rng() % 20, 0.5 + u(rng), 0.3 + u(rng)}; break;
        case 3: spec = state::Boltzmann{0.5 + 1.5 * u(rng), 0.1 + 0.9 * u(rng)}; break;
        default: spec = state::Fock{rng() % 30}; break;
        }
        const auto d = make_distribution(spec, n_max);
        EXPECT_NEAR(sum(d), 1.0, 1e-12) << describe(spec);
        for (double p : d.probs()) EXPECT_GE(p, 0.0);
    }
}

TEST(FockProperties, EnergyLinearInFrequency) {
    const auto d = make_distribution(state::Gaussian{3, 1.5, 1.2}, 50);
    for (double c : {0.1, 0.5, 2.0, 7.5}) {
        const double base = internal_energy(d, OscillatorSpec(1.3));
        EXPECT_NEAR(internal_energy(d, OscillatorSpec(1.3 * c)), c * base, 1e-13 * c);
    }
}

TEST(FockProperties, EntropyOfEqualLowestIsLogK) {
    for (std::size_t k = 1; k <= 30; ++k)
        EXPECT_NEAR(entropy(make_distribution(state::EqualLowest{k}, 50)), std::log(static_cast<double>(k)), 1e-14);
}

TEST(FockProperties, BoltzmannEnergyMatchesClosedForm) {
    for (double omega : {0.5, 1.0, 1.5, 2.0})
        for (double t : {0.2, 0.4, 1.2}) {
            const double x = omega / t;
            const auto n_max = static_cast<std::size_t>(std::ceil(50.0 * std::log(10.0) / x));
            const auto d = make_distribution(state::Boltzmann{omega, t}, std::max<std::size_t>(n_max, 2));
            EXPECT_NEAR(internal_energy(d, OscillatorSpec(omega)), omega / std::expm1(x), 1e-10);
        }
}

TEST(Specs, PositivityEnforced) {
    EXPECT_THROW(OscillatorSpec(0.0), InvalidArgument);
    EXPECT_THROW(OscillatorSpec(-1.0), InvalidArgument);
    EXPECT_THROW(BathSpec(0.0, 0.5), InvalidArgument);
    EXPECT_THROW(BathSpec(1.0, 0.0), InvalidArgument);
    EXPECT_DOUBLE_EQ(BathSpec::from_relaxation_time(0.4, 10.0).gamma0, 0.05);
}
