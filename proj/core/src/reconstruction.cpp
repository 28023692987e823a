#include "nadc/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nadc/errors.hpp"

namespace nadc {

std::vector<LevelPoint> levels_from_spikes(std::span<const SpikeEvent> events,
        double lsb, double v0)
{
    if (!(lsb > 0.0) || !std::isfinite(lsb))
    {
        throw ParameterError("lsb must be > 0");
    }
    std::vector<LevelPoint> points;
    points.reserve(events.size() + 1);
    points.push_back({0.0, v0});
    long long level = 0;
    for (const auto &e : events)
    {
        level += sign(e.polarity);
        points.push_back({e.t, v0 + lsb * static_cast<double>(level)});
    }
    return points;
}

std::vector<LevelPoint> levels_from_spikes(const SpikeTrain &train, double lsb,
        double v0)
{
    return levels_from_spikes(std::span<const SpikeEvent>(train.events), lsb,
            v0);
}

namespace {

constexpr std::size_t kWindow = 6;

// Barycentric Lagrange form over a contiguous window. Node differences are
// taken directly so widely spaced absolute times stay well conditioned, and
// the ratio form reproduces constants exactly.
double lagrange(std::span<const LevelPoint> pts, double t)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        const double d = t - pts[i].t;
        if (d == 0.0)
        {
            return pts[i].v;
        }
        double w = 1.0;
        for (std::size_t j = 0; j < pts.size(); ++j)
        {
            if (j != i)
            {
                w *= pts[i].t - pts[j].t;
            }
        }
        const double c = 1.0 / (w * d);
        num += c * pts[i].v;
        den += c;
    }
    return num / den;
}

} // namespace

Waveform interpolate_poly5(std::span<const LevelPoint> points,
        double grid_rate_hz, double duration_s)
{
    if (points.empty())
    {
        throw ParameterError("interpolation needs at least one point");
    }
    if (!(grid_rate_hz > 0.0) || !std::isfinite(grid_rate_hz))
    {
        throw ParameterError("grid_rate must be > 0");
    }
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    {
        throw ParameterError("duration must be > 0");
    }
    for (std::size_t i = 1; i < points.size(); ++i)
    {
        if (!(points[i].t > points[i - 1].t))
        {
            throw ParameterError("interpolation point times must be strictly "
                              "increasing (point " +
                    std::to_string(i) + ")");
        }
    }

    const double n_exact = duration_s * grid_rate_hz;
    double n_floor = std::floor(n_exact);
    if (n_exact - n_floor > 1.0 - 1e-9)
    {
        n_floor += 1.0;
    }
    const auto count = static_cast<std::size_t>(n_floor) + 1;
    const std::size_t width = std::min(kWindow, points.size());

    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k)
    {
        const double t = std::clamp(static_cast<double>(k) / grid_rate_hz,
                points.front().t, points.back().t);

        // Grow [lo, hi) outward from t, taking the nearer neighbour first.
        const auto upper = std::upper_bound(points.begin(), points.end(), t,
                [](double x, const LevelPoint &p) { return x < p.t; });
        std::size_t hi = static_cast<std::size_t>(upper - points.begin());
        std::size_t lo = hi;
        while (hi - lo < width)
        {
            const bool can_left = lo > 0;
            const bool can_right = hi < points.size();
            if (can_left && can_right)
            {
                if (t - points[lo - 1].t <= points[hi].t - t)
                {
                    --lo;
                }
                else
                {
                    ++hi;
                }
            }
            else if (can_left)
            {
                --lo;
            }
            else
            {
                ++hi;
            }
        }
        out[k] = lagrange(points.subspan(lo, hi - lo), t);
    }
    return Waveform(grid_rate_hz, std::move(out));
}

} // namespace nadc
