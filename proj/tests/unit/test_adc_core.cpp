#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "nadc/adc_core.hpp"
#include "nadc/errors.hpp"
#include "nadc/signal.hpp"
#include "test_support.hpp"

using namespace nadc;
using nadc::testing::ideal_config;
using nadc::testing::make_ramp;
using nadc::testing::uniform;

TEST(DetectCrossing, Examples)
{
    EXPECT_EQ(detect_crossing(0.094, 0.096, 0.095, 0.055), Polarity::Up);
    EXPECT_EQ(detect_crossing(0.075, 0.075, 0.095, 0.055), std::nullopt);
    EXPECT_EQ(detect_crossing(0.056, 0.054, 0.095, 0.055), Polarity::Down);
    // Landing exactly on a threshold counts; leaving it does not.
    EXPECT_EQ(detect_crossing(0.09, 0.095, 0.095, 0.055), Polarity::Up);
    EXPECT_EQ(detect_crossing(0.095, 0.1, 0.095, 0.055), std::nullopt);
    EXPECT_EQ(detect_crossing(0.06, 0.055, 0.095, 0.055), Polarity::Down);
}

TEST(Simulate, ConstantInputNeverFires)
{
    const Waveform w(1e6, std::vector<double>(2001, 0.0));
    const auto trace = simulate(w, AdcConfig{});
    EXPECT_TRUE(trace.spikes.events.empty());
    EXPECT_TRUE(trace.fold_history.empty());
    EXPECT_EQ(trace.off_fraction(), 0.0);
}

TEST(Simulate, RampFiresOncePerLsb)
{
    const auto w = make_ramp(20.0, 3.5e-3, 1e6);
    const auto cfg = ideal_config(0.02, 10e-6, 1e-6);
    const auto trace = simulate(w, cfg);
    ASSERT_EQ(trace.spikes.events.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
    {
        const double expected = 1e-3 * static_cast<double>(i + 1);
        EXPECT_NEAR(trace.spikes.events[i].t, expected, 1e-12);
        EXPECT_EQ(trace.spikes.events[i].polarity, Polarity::Up);
        EXPECT_NEAR(trace.fold_history[i].reference, 0.02 * static_cast<double>(i + 1), 1e-12);
    }
}

TEST(Simulate, DelaysShiftSpikeAndFold)
{
    const auto w = make_ramp(20.0, 1.5e-3, 1e6);
    auto cfg = ideal_config(0.02, 10e-6, 1e-6);
    cfg.comparator_delay = 100e-9;
    cfg.loop_delay = 200e-9;
    const auto trace = simulate(w, cfg);
    ASSERT_EQ(trace.spikes.events.size(), 1u);
    EXPECT_NEAR(trace.spikes.events[0].t, 1e-3 + 100e-9, 1e-12);
    EXPECT_NEAR(trace.fold_history[0].t, 1e-3 + 200e-9, 1e-12);
    EXPECT_NEAR(trace.fold_history[0].reference, 20.0 * (1e-3 + 200e-9), 1e-12);
    ASSERT_EQ(trace.gate_off_intervals.size(), 1u);
    EXPECT_NEAR(trace.gate_off_intervals[0].start, 1e-3 + 100e-9, 1e-12);
    EXPECT_NEAR(trace.gate_off_intervals[0].length(), 10e-6, 1e-12);
}

TEST(Simulate, SineGivesTwoEventsPerLevelPerPeriod)
{
    for (double f : {50.0, 1e3, 10e3})
    {
        const double periods = 10.0;
        const auto w = make_sinusoid(0.64, f, 0.0, periods / f, 2000.0 * f);
        const auto cfg = ideal_config(0.02, 100e-9, std::min(20e-9, 1.0 / (2000.0 * f)));
        const auto trace = simulate(w, cfg);
        const double per_period = static_cast<double>(trace.spikes.events.size()) / periods;
        EXPECT_NEAR(per_period, 128.0, 2.0) << f << " Hz";
        int ups = 0;
        for (const auto &e : trace.spikes.events)
        {
            ups += e.polarity == Polarity::Up;
        }
        const int downs = static_cast<int>(trace.spikes.events.size()) - ups;
        EXPECT_LE(std::abs(ups - downs), 2 * static_cast<int>(periods));
    }
}

TEST(Simulate, SlowRefractorySaturatesOffFraction)
{
    const auto w = make_sinusoid(0.64, 10e3, 0.0, 1e-3, 10e6);
    auto cfg = ideal_config(0.02, 50e-6, 20e-9);
    const auto trace = simulate(w, cfg);
    EXPECT_GT(trace.off_fraction(), 0.9);
    EXPECT_LE(trace.off_fraction(), 1.0);
    EXPECT_LE(trace.gate_off_time(), trace.spikes.duration * (1.0 + 1e-12));
}

TEST(Simulate, ConfigurationErrors)
{
    const auto w = make_sinusoid(0.64, 1e3, 0.0, 2e-3, 1e6);
    auto bad = [&](auto mutate) {
        AdcConfig cfg;
        mutate(cfg);
        EXPECT_THROW(simulate(w, cfg), ConfigurationError);
    };
    bad([](AdcConfig &c) { c.dt = 1e-5; }); // > T_ref / 4
    bad([](AdcConfig &c) { c.dt = 0.0; });
    bad([](AdcConfig &c) { c.v_low = 0.1; });
    bad([](AdcConfig &c) { c.v_low = 0.05; }); // asymmetric window
    bad([](AdcConfig &c) { c.loop_delay = 50e-9; }); // before the spike
    bad([](AdcConfig &c) { c.v_ref = 0.7; });
    bad([](AdcConfig &c) { c.noise_sigma = -1.0; });
    bad([](AdcConfig &c) { c.supply = NAN; });

    AdcConfig ok;
    EXPECT_NO_THROW(ok.validate_for_frequency(10e3));
    ok.refractory = RefractoryModel::constant(1e-3);
    ok.dt = 1e-4;
    EXPECT_THROW(ok.validate_for_frequency(1e3), ConfigurationError);
}

TEST(SpikeEvents, RoundTripAndErrors)
{
    const std::vector<SpikeEvent> ev{{1e-3, Polarity::Up}, {2.5e-3, Polarity::Down}, {0.0041, Polarity::Up}};
    std::stringstream io;
    write_spike_events(io, ev);
    EXPECT_EQ(io.str(), "t_s,polarity\n0.001,+1\n0.0025,-1\n0.0041,+1\n");
    EXPECT_EQ(read_spike_events(io), ev);

    auto read = [](const char *text) {
        std::istringstream in(text);
        return read_spike_events(in);
    };
    EXPECT_EQ(read("t_s,polarity\n0.1,1\n").size(), 1u);
    EXPECT_TRUE(read("t_s,polarity\n").empty());
    try
    {
        read("t_s,polarity\n0.1,1\n0.1,-1\n");
        FAIL();
    }
    catch (const FormatError &e)
    {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(read("t_s,polarity\n0.1,2\n"), FormatError);
    EXPECT_THROW(read("t_s,polarity\n-0.1,1\n"), FormatError);
    EXPECT_THROW(read("t_s,polarity\n0.1\n"), FormatError);
}

TEST(GateIntervals, RebuiltFromEvents)
{
    const std::vector<SpikeEvent> ev{{1e-3, Polarity::Up}, {9.5e-3, Polarity::Down}};
    const auto g = gate_intervals_for(ev, 1e-3, 10e-3);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_DOUBLE_EQ(g[0].end, 2e-3);
    EXPECT_DOUBLE_EQ(g[1].end, 10e-3);
}

TEST(Simulate, GateIntervalsMatchRebuild)
{
    const auto w = make_sinusoid(0.64, 10e3, 0.0, 1e-3, 10e6);
    AdcConfig cfg;
    cfg.refractory = RefractoryModel::constant(400e-9);
    const auto trace = simulate(w, cfg);
    const auto g = gate_intervals_for(trace.spikes.events, 400e-9, trace.spikes.duration);
    ASSERT_EQ(g.size(), trace.gate_off_intervals.size());
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        EXPECT_DOUBLE_EQ(g[i].start, trace.gate_off_intervals[i].start);
        EXPECT_DOUBLE_EQ(g[i].end, trace.gate_off_intervals[i].end);
    }
}

// Randomized invariant checks.

namespace {

struct Case
{
    Waveform w;
    AdcConfig cfg;
    double slope_max; // V/s
};

Case random_case(std::mt19937_64 &rng, bool delays, bool overload_free)
{
    const double f = std::exp(uniform(rng, std::log(20.0), std::log(10e3)));
    const double amp = uniform(rng, 0.05, 0.8);
    const double lsb = uniform(rng, 0.005, 0.03);
    const bool ramp = rng() % 4 == 0;
    const double slope_max = ramp ? amp * f : 2.0 * std::numbers::pi * f * amp;
    const double periods = uniform(rng, 2.0, 5.0);
    const double duration = periods / f;
    const double rate = 1000.0 * f;

    double t_ref = std::exp(uniform(rng, std::log(100e-9), std::log(20e-6)));
    if (overload_free)
    {
        t_ref = std::min(t_ref, 0.5 * lsb / slope_max);
    }
    const double dt = std::min({t_ref / 4.0, 1.0 / (50.0 * f), duration / 1000.0});
    auto cfg = ideal_config(lsb, t_ref, dt);
    if (delays)
    {
        cfg.comparator_delay = uniform(rng, 0.0, 200e-9);
        cfg.loop_delay = cfg.comparator_delay + uniform(rng, 0.0, 200e-9);
    }
    Waveform w = ramp ? make_ramp(amp * f, duration, rate, uniform(rng, -0.1, 0.1))
                      : make_sinusoid(amp, f, uniform(rng, -0.1, 0.1), duration, rate);
    return {std::move(w), cfg, slope_max};
}

} // namespace

TEST(SimulateProperties, RefractorySpacingFoldExactnessGateAccounting)
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 60; ++i)
    {
        const auto c = random_case(rng, true, false);
        const auto trace = simulate(c.w, c.cfg);
        const double t_ref = c.cfg.refractory_period();
        const auto &ev = trace.spikes.events;
        ASSERT_EQ(trace.fold_history.size(), ev.size());
        ASSERT_EQ(trace.gate_off_intervals.size(), ev.size());
        for (std::size_t k = 1; k < ev.size(); ++k)
        {
            ASSERT_GE(ev[k].t - ev[k - 1].t, t_ref - c.cfg.dt) << "case " << i;
        }
        for (const auto &fold : trace.fold_history)
        {
            const double v = comparator_input(c.w, c.cfg, fold.reference, fold.t, fold.t);
            ASSERT_NEAR(v, c.cfg.v_mid, 1e-12) << "case " << i;
        }
        double total = 0.0;
        for (std::size_t k = 0; k < trace.gate_off_intervals.size(); ++k)
        {
            const auto &g = trace.gate_off_intervals[k];
            ASSERT_GE(g.length(), 0.0);
            ASSERT_LE(g.end, trace.spikes.duration);
            if (k > 0)
            {
                ASSERT_GE(g.start, trace.gate_off_intervals[k - 1].end);
            }
            total += g.length();
        }
        ASSERT_NEAR(trace.gate_off_time(), total, 1e-15);
        ASSERT_LE(total, trace.spikes.duration * (1.0 + 1e-12));
    }
}

TEST(SimulateProperties, RunningSumTracksInputWithoutLoopDelay)
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 60; ++i)
    {
        const auto c = random_case(rng, false, true);
        const auto trace = simulate(c.w, c.cfg);
        const double lsb = c.cfg.lsb();
        int sum = 0;
        for (std::size_t k = 0; k < trace.fold_history.size(); ++k)
        {
            sum += sign(trace.spikes.events[k].polarity);
            const double x = sample_at(c.w, trace.fold_history[k].t);
            ASSERT_LE(std::abs(x - (trace.initial_reference + lsb * sum)),
                    lsb + c.slope_max * c.cfg.loop_delay)
                    << "case " << i << " fold " << k;
        }
    }
}

TEST(SimulateProperties, EachFoldMovesOneLsbPlusDelayDrift)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 60; ++i)
    {
        const auto c = random_case(rng, true, true);
        const auto trace = simulate(c.w, c.cfg);
        const double lsb = c.cfg.lsb();
        double prev = trace.initial_reference;
        for (std::size_t k = 0; k < trace.fold_history.size(); ++k)
        {
            const double step = trace.fold_history[k].reference - prev;
            const double expected = lsb * sign(trace.spikes.events[k].polarity);
            // Refinement is linear on the dt grid, so allow a sliver of lsb.
            ASSERT_LE(std::abs(step - expected), c.slope_max * c.cfg.loop_delay + 1e-6 * lsb)
                    << "case " << i << " fold " << k;
            prev = trace.fold_history[k].reference;
        }
    }
}

TEST(SimulateProperties, DeterministicIncludingNoise)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i)
    {
        auto c = random_case(rng, true, false);
        c.cfg.noise_sigma = uniform(rng, 0.0, 5e-3);
        c.cfg.droop_rate = uniform(rng, 0.0, 1.0);
        c.cfg.rng_seed = rng();
        const auto a = simulate(c.w, c.cfg);
        const auto b = simulate(c.w, c.cfg);
        ASSERT_EQ(a.spikes.events, b.spikes.events);
        ASSERT_EQ(a.fold_history.size(), b.fold_history.size());
        for (std::size_t k = 0; k < a.fold_history.size(); ++k)
        {
            ASSERT_EQ(a.fold_history[k].t, b.fold_history[k].t);
            ASSERT_EQ(a.fold_history[k].reference, b.fold_history[k].reference);
        }
    }
}

TEST(Simulate, NoiseSeedChangesTrace)
{
    const auto w = make_sinusoid(0.64, 1e3, 0.0, 3e-3, 2e6);
    AdcConfig cfg;
    cfg.noise_sigma = 2e-3;
    cfg.rng_seed = 1;
    const auto a = simulate(w, cfg);
    cfg.rng_seed = 2;
    const auto b = simulate(w, cfg);
    EXPECT_NE(a.spikes.events, b.spikes.events);
}
