#include <gtest/gtest.h>

#include <cmath>

#include "otto_kiln/analysis.hpp"
#include "otto_kiln/cycle.hpp"
#include "otto_kiln/verify.hpp"

using namespace otto_kiln;

namespace {

// Bose-Einstein occupations at the reference parameters.
constexpr double n_hot = 0.4015511184930129;  // omega_h = 1.5, T_h = 1.2
constexpr double n_cold = 0.08942548983385201; // omega_c = 1.0, T_c = 0.4

const BathSpec hot(1.2, 0.5);
const BathSpec cold(0.4, 0.5);

} // namespace

TEST(Adiabatic, GroundStateDoesNoWork) {
    const auto r = run_adiabatic(FockDistribution::number_state(0, 50), 1.5, 1.0, 2.0);
    EXPECT_EQ(r.work, 0.0);
}

TEST(Adiabatic, ExpansionOfHotEquilibrium) {
    const auto d = stationary_distribution(1.5, 1.2, 50);
    const auto r = run_adiabatic(d, 1.5, 1.0, 2.0, 64);
    EXPECT_NEAR(r.work, -0.5 * n_hot, 1e-12);
    ASSERT_EQ(r.rows.size(), 64u);
    const double s0 = r.rows.front().entropy;
    for (const auto& row : r.rows) EXPECT_EQ(row.entropy, s0);
    // U(t) linear in t
    const double slope = (r.rows.back().energy - r.rows.front().energy) / 2.0;
    for (const auto& row : r.rows) EXPECT_NEAR(row.energy, r.rows.front().energy + slope * row.time, 1e-14);
    EXPECT_EQ(r.rows.back().omega, 1.0);
}

TEST(Pump, Examples) {
    const auto g = FockDistribution::number_state(0, 50);
    auto up = pump(g, state::Fock{1}, 1.5);
    EXPECT_NEAR(up.q_pump, 1.5, 1e-15);
    EXPECT_EQ(up.dist[1], 1.0);

    auto same = pump(up.dist, state::Fock{1}, 1.5);
    EXPECT_EQ(same.q_pump, 0.0);

    const auto relaxed = stationary_distribution(1.0, 0.4, 50); // <n> = 0.0894...
    EXPECT_NEAR(pump(relaxed, state::Fock{1}, 1.5).q_pump, 1.5 * (1.0 - n_cold), 1e-12);

    EXPECT_THROW(pump(FockDistribution::number_state(0, 3), state::EqualLowest{5}, 1.5), TruncationError);
}

TEST(OttoCycle, ThermalBalanceLedger) {
    // A on the cold-bath populations; tau = 20 leaves e^{-20} of the gap unrelaxed per stroke.
    auto a = stationary_distribution(1.0, 0.4, 50);
    CycleResult res = run_otto_cycle(a, 1.0, 1.5, cold, hot, 20.0);
    res = run_otto_cycle(res.next, 1.0, 1.5, cold, hot, 20.0);
    const auto& r = res.record;
    EXPECT_NEAR(r.q_in, 0.4681884429887413, 1e-8);
    EXPECT_NEAR(r.w_out, 0.20077555924650645, 1e-8);
    EXPECT_NEAR(r.q_out, 0.3121256286591609, 1e-8);
    EXPECT_NEAR(r.w_in, 0.044712744916926006, 1e-8);
    EXPECT_NEAR(r.w_eff, 0.15606281432958044, 1e-8);
    EXPECT_NEAR(r.q_in - r.q_out, r.w_eff, 1e-9);
    EXPECT_EQ(r.w_eff, r.w_out - r.w_in);
    EXPECT_EQ(r.b, r.c);
    EXPECT_EQ(r.d, r.a_next);
}

TEST(OttoCycle, HighEnergyStartReleasesHeatToHotBath) {
    const auto r = run_otto_cycle(make_distribution(state::EqualLowest{3}, 50), 1.0, 1.5, cold, hot, 2.0).record;
    EXPECT_LT(r.q_in, 0.0);
    EXPECT_NEAR(r.q_in, -0.7761864489384074, 1e-9);
}

TEST(OttoCycle, VanishingContactTime) {
    const auto a = make_distribution(state::EqualLowest{3}, 50);
    const auto r = run_otto_cycle(a, 1.0, 1.5, cold, hot, 1e-8).record;
    EXPECT_NEAR(r.q_in, 0.0, 1e-7);
    EXPECT_NEAR(r.q_out, 0.0, 1e-7);
    EXPECT_NEAR(r.w_eff, 0.0, 1e-7);
}

TEST(OttoCycle, StrokeAccountsObeyFirstLaw) {
    const auto r = run_otto_cycle(FockDistribution::number_state(0, 50), 1.0, 1.5, cold, hot, 2.0).record;
    ASSERT_EQ(r.strokes.size(), 4u);
    for (const auto& s : r.strokes) EXPECT_NEAR(s.delta_energy, s.heat + s.work, 1e-12);
    EXPECT_EQ(r.strokes[0].work, 0.0);
    EXPECT_EQ(r.strokes[2].work, 0.0);
    EXPECT_EQ(r.strokes[1].heat, 0.0);
    EXPECT_EQ(r.strokes[3].heat, 0.0);
    EXPECT_NEAR(r.strokes[0].heat, r.q_in, 1e-12);
    EXPECT_NEAR(-r.strokes[1].work, r.w_out, 1e-12);
    EXPECT_NEAR(-r.strokes[2].heat, r.q_out, 1e-12);
    EXPECT_NEAR(r.strokes[3].work, r.w_in, 1e-12);
    EXPECT_EQ(r.strokes[1].entropy_excursion, 0.0);
    EXPECT_GT(std::abs(r.strokes[0].entropy_change), 1e-3);
    EXPECT_NEAR(r.first_law_residual(), 0.0, 1e-12);
}

TEST(PumpCycle, FullThermalization) {
    const auto g = FockDistribution::number_state(0, 50);
    auto first = run_pump_cycle(g, state::Fock{1}, 1.0, 1.5, cold, 1.0, 30.0, 1.0);
    EXPECT_NEAR(first.record.q_pump, 1.5, 1e-15);
    EXPECT_NEAR(first.record.w_out, 0.5, 1e-12);
    EXPECT_NEAR(first.record.w_in, 0.5 * n_cold, 1e-6);

    auto second = run_pump_cycle(first.next, state::Fock{1}, 1.0, 1.5, cold, 1.0, 30.0, 1.0);
    EXPECT_NEAR(second.record.q_pump, 1.365861765249222, 1e-6);
    EXPECT_NEAR(cycle_efficiency(second.record).value(), 0.30352483672204933, 1e-6);
    EXPECT_NEAR(second.record.first_law_residual(), 0.0, 1e-12);
    EXPECT_LE(cycle_efficiency(second.record).value(), 1.0 / 3.0);
}

TEST(PumpCycle, NoContactMeansNoNetWork) {
    const auto g = FockDistribution::number_state(0, 50);
    const auto r = run_pump_cycle(g, state::Fock{1}, 1.0, 1.5, cold, 1.0, 1e-9, 1.0).record;
    EXPECT_NEAR(r.d[1], 1.0, 1e-8);
    EXPECT_NEAR(r.w_out, 0.5, 1e-12);
    EXPECT_NEAR(r.w_in, 0.5, 1e-8);
    EXPECT_NEAR(r.w_eff, 0.0, 1e-8);
}

TEST(Schedule, Validation) {
    EXPECT_NO_THROW(StrokeSchedule::otto(1.0, 1.5, cold, hot, 2.0, 3));
    EXPECT_THROW(StrokeSchedule::otto(1.0, 1.5, cold, hot, 0.0, 3), InvalidArgument);
    StrokeSchedule broken;
    broken.strokes = {IsochoricStroke{hot, 1.5, 1.0}, AdiabaticStroke{1.4, 1.0, 1.0}};
    EXPECT_THROW(broken.validate(), InvalidArgument);
    EXPECT_DOUBLE_EQ(StrokeSchedule::pump(state::Fock{1}, 1.0, 1.5, cold, 1.0, 5.0, 1.0, 1).cycle_time(), 7.0);
}

TEST(Engine, ZeroCycles) {
    EngineConfig cfg;
    cfg.n_cycles = 0;
    const auto t = run_engine(cfg);
    EXPECT_TRUE(t.timeseries.empty());
    EXPECT_TRUE(t.records.empty());
}

TEST(Engine, GroundStartReachesCyclostationarity) {
    EngineConfig cfg;
    const auto t = run_engine(cfg);
    ASSERT_EQ(t.records.size(), 20u);
    EXPECT_LT(t.cyclostationarity.back(), 1e-6);
    EXPECT_TRUE(t.converged);
    // contraction after the first cycle (down to rounding noise)
    for (std::size_t k = 2; k < t.cyclostationarity.size(); ++k)
        EXPECT_LE(t.cyclostationarity[k], t.cyclostationarity[k - 1] + 1e-15);
    for (const auto& c : trace_invariants(t, "otto")) EXPECT_TRUE(c.pass()) << c.name << " " << c.value;
}

TEST(Engine, SingleCycleFromEquilibriumMatchesClosedForm) {
    EngineConfig cfg;
    cfg.tau = 20.0;
    const auto t = run_cycles(cfg, CycleMode::otto, stationary_distribution(1.0, 0.4, 50), 1);
    ASSERT_EQ(t.records.size(), 1u);
    EXPECT_NEAR(t.records[0].q_in, 0.4681884429887413, 1e-7);
    EXPECT_NEAR(t.records[0].w_eff, 0.15606281432958044, 1e-7);
}

TEST(Engine, TimeseriesIsContinuousAndOrdered) {
    EngineConfig cfg;
    cfg.n_cycles = 3;
    const auto t = run_engine(cfg);
    EXPECT_EQ(t.timeseries.front().time, 0.0);
    EXPECT_NEAR(t.timeseries.back().time, 3 * 4 * cfg.tau, 1e-12);
    for (std::size_t i = 1; i < t.timeseries.size(); ++i) EXPECT_GT(t.timeseries[i].time, t.timeseries[i - 1].time);
}

TEST(Engine, PumpTimeseriesShowsPumpedState) {
    EngineConfig cfg;
    cfg.mode = Mode::pump;
    cfg.n_cycles = 2;
    const auto t = run_engine(cfg);
    std::size_t pumps = 0;
    for (const auto& row : t.timeseries)
        if (row.label == StrokeLabel::pump) {
            ++pumps;
            EXPECT_EQ(row.dist[1], 1.0);
        }
    EXPECT_EQ(pumps, 2u);
    for (const auto& c : trace_invariants(t, "pump")) EXPECT_TRUE(c.pass()) << c.name << " " << c.value;
}
