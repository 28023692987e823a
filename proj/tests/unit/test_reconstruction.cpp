#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nadc/adc_core.hpp"
#include "nadc/errors.hpp"
#include "nadc/reconstruction.hpp"
#include "nadc/signal.hpp"
#include "test_support.hpp"

using namespace nadc;
using nadc::testing::uniform;

TEST(LevelsFromSpikes, RunningSum)
{
    const std::vector<SpikeEvent> ev{{1e-3, Polarity::Up}, {2e-3, Polarity::Up}, {3e-3, Polarity::Down}};
    const auto pts = levels_from_spikes(ev, 0.02, 0.0);
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_EQ(pts[0].t, 0.0);
    EXPECT_EQ(pts[0].v, 0.0);
    EXPECT_NEAR(pts[1].v, 0.02, 1e-15);
    EXPECT_NEAR(pts[2].v, 0.04, 1e-15);
    EXPECT_NEAR(pts[3].v, 0.02, 1e-15);
    EXPECT_EQ(pts[3].t, 3e-3);
}

TEST(LevelsFromSpikes, EmptyIsAnchorOnly)
{
    const auto pts = levels_from_spikes(std::span<const SpikeEvent>{}, 0.02, 0.3);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_EQ(pts[0].v, 0.3);
    EXPECT_THROW(levels_from_spikes(std::span<const SpikeEvent>{}, 0.0, 0.3), ParameterError);
}

TEST(LevelsFromSpikes, RampMatchesInput)
{
    const auto w = nadc::testing::make_ramp(20.0, 3.5e-3, 1e6);
    const auto trace = simulate(w, nadc::testing::ideal_config(0.02, 10e-6, 1e-6));
    const auto pts = levels_from_spikes(trace.spikes, 0.02, trace.initial_reference);
    ASSERT_EQ(pts.size(), 4u);
    for (std::size_t i = 1; i < pts.size(); ++i)
    {
        EXPECT_NEAR(pts[i].v, sample_at(w, pts[i].t), 1e-12);
        EXPECT_NEAR(pts[i].v, 0.02 * static_cast<double>(i), 1e-12);
    }
}

namespace {

std::vector<LevelPoint> sample_points(std::mt19937_64 &rng, std::size_t n, double span,
        const auto &f)
{
    std::vector<double> ts(n);
    for (double &t : ts)
    {
        t = uniform(rng, 0.0, span);
    }
    std::sort(ts.begin(), ts.end());
    ts.front() = 0.0;
    ts.back() = span;
    std::vector<LevelPoint> pts;
    for (double t : ts)
    {
        pts.push_back({t, f(t)});
    }
    return pts;
}

} // namespace

TEST(InterpolatePoly5, ReproducesLine)
{
    std::vector<LevelPoint> pts;
    for (int i = 0; i < 6; ++i)
    {
        const double t = 1e-3 * i;
        pts.push_back({t, 3.0 * t + 0.25});
    }
    const auto w = interpolate_poly5(pts, 10e3, 5e-3);
    ASSERT_EQ(w.size(), 51u);
    for (std::size_t k = 0; k < w.size(); ++k)
    {
        const double t = static_cast<double>(k) / 10e3;
        EXPECT_NEAR(w.samples()[k], 3.0 * t + 0.25, 1e-9 * std::abs(3.0 * t + 0.25));
    }
}

TEST(InterpolatePoly5, ReproducesPolynomialsUpToDegreeFive)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial)
    {
        const int degree = static_cast<int>(rng() % 6);
        std::vector<double> c(static_cast<std::size_t>(degree) + 1);
        for (double &x : c)
        {
            x = uniform(rng, -1.0, 1.0);
        }
        // Work in t scaled to the span so the polynomial stays well conditioned.
        const double span = 1e-2;
        auto p = [&](double t) {
            const double u = t / span;
            double y = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it)
            {
                y = y * u + *it;
            }
            return y;
        };
        const auto n = 6 + static_cast<std::size_t>(rng() % 40);
        const auto pts = sample_points(rng, n, span, p);
        bool distinct = true;
        for (std::size_t i = 1; i < pts.size(); ++i)
        {
            distinct = distinct && pts[i].t - pts[i - 1].t > span * 1e-4;
        }
        if (!distinct)
        {
            continue;
        }
        const auto w = interpolate_poly5(pts, 1e5, span);
        double scale = 0.0;
        for (double x : c)
        {
            scale += std::abs(x);
        }
        for (std::size_t k = 0; k < w.size(); ++k)
        {
            const double t = static_cast<double>(k) / 1e5;
            ASSERT_NEAR(w.samples()[k], p(t), 1e-9 * scale) << "trial " << trial << " k " << k;
        }
    }
}

TEST(InterpolatePoly5, GridIsExact)
{
    const std::vector<LevelPoint> pts{{0.0, 0.0}, {1e-3, 1.0}, {2e-3, 0.0}};
    const auto w = interpolate_poly5(pts, 7919.0, 2e-3);
    EXPECT_EQ(w.sample_rate(), 7919.0);
    EXPECT_EQ(w.t0(), 0.0);
    EXPECT_EQ(w.size(), static_cast<std::size_t>(std::floor(2e-3 * 7919.0)) + 1);
}

TEST(InterpolatePoly5, EndValuesHeld)
{
    const std::vector<LevelPoint> pts{{1e-3, 1.0}, {2e-3, 2.0}, {3e-3, 4.0}};
    const auto w = interpolate_poly5(pts, 1e4, 5e-3);
    EXPECT_EQ(w.samples()[0], 1.0);
    EXPECT_EQ(w.samples()[5], 1.0);
    EXPECT_EQ(w.samples()[40], 4.0);
    EXPECT_EQ(w.samples()[50], 4.0);
}

TEST(InterpolatePoly5, Locality)
{
    std::mt19937_64 rng(8);
    auto f = [](double t) { return std::sin(1e3 * t); };
    const auto pts = sample_points(rng, 40, 1e-2, f);
    const auto base = interpolate_poly5(pts, 2e4, 1e-2);
    for (std::size_t j : {0u, 7u, 20u, 39u})
    {
        auto moved = pts;
        moved[j].v += 0.5;
        const auto w = interpolate_poly5(moved, 2e4, 1e-2);
        for (std::size_t k = 0; k < w.size(); ++k)
        {
            const double t = static_cast<double>(k) / 2e4;
            // Brute-force 6-nearest window (clamped) of the grid time.
            std::size_t hi = static_cast<std::size_t>(
                    std::upper_bound(pts.begin(), pts.end(), t,
                            [](double x, const LevelPoint &p) { return x < p.t; }) -
                    pts.begin());
            std::size_t lo = hi;
            while (hi - lo < 6)
            {
                const bool can_lo = lo > 0;
                const bool can_hi = hi < pts.size();
                if (can_lo && (!can_hi || t - pts[lo - 1].t <= pts[hi].t - t))
                {
                    --lo;
                }
                else
                {
                    ++hi;
                }
            }
            const bool inside = t >= pts.front().t && t <= pts.back().t;
            const bool uses_j = inside ? (j >= lo && j < hi)
                                       : (t < pts.front().t ? j == 0 : j == pts.size() - 1);
            if (!uses_j)
            {
                ASSERT_EQ(w.samples()[k], base.samples()[k]) << "j " << j << " k " << k;
            }
        }
    }
}

TEST(InterpolatePoly5, Errors)
{
    EXPECT_THROW(interpolate_poly5(std::span<const LevelPoint>{}, 1e3, 1.0), ParameterError);
    const std::vector<LevelPoint> dup{{0.0, 0.0}, {1e-3, 1.0}, {1e-3, 2.0}};
    EXPECT_THROW(interpolate_poly5(dup, 1e3, 1e-2), ParameterError);
    const std::vector<LevelPoint> one{{0.0, 1.0}};
    EXPECT_THROW(interpolate_poly5(one, 0.0, 1e-2), ParameterError);
    EXPECT_THROW(interpolate_poly5(one, 1e3, 0.0), ParameterError);
    EXPECT_NO_THROW(interpolate_poly5(one, 1e3, 1e-2));
}

TEST(InterpolatePoly5, DenseSineWithinHalfLsb)
{
    const double f = 1e3, a = 0.64, lsb = 0.02;
    const auto w = make_sinusoid(a, f, 0.0, 10e-3, 2e6);
    const auto trace = simulate(w, nadc::testing::ideal_config(lsb, 100e-9, 20e-9));
    const auto pts = levels_from_spikes(trace.spikes, lsb, trace.initial_reference);
    const auto recon = interpolate_poly5(pts, 256e3, w.duration());
    double sq = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < recon.size(); ++k)
    {
        const double t = recon.time_of(k);
        if (t > pts.back().t)
        {
            break;
        }
        const double e = recon.samples()[k] - a * std::sin(2.0 * std::numbers::pi * f * t);
        sq += e * e;
        ++n;
    }
    ASSERT_GT(n, 2000u);
    EXPECT_LT(std::sqrt(sq / static_cast<double>(n)), lsb / 2.0);
}
