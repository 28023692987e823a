#pragma once

#include <span>
#include <vector>

#include "nadc/adc_core.hpp"
#include "nadc/signal.hpp"

namespace nadc {

// Signal value pinned by one event.
struct LevelPoint
{
    double t = 0.0; // s
    double v = 0.0; // V
};

// Running level track: (0, v0) followed by one point per event at
// v0 + lsb * (sum of polarities so far). Throws ParameterError if lsb <= 0.
std::vector<LevelPoint> levels_from_spikes(const SpikeTrain &train, double lsb,
        double v0);
std::vector<LevelPoint> levels_from_spikes(std::span<const SpikeEvent> events,
        double lsb, double v0);

// Sliding-window local Lagrange interpolation. Each grid time k/grid_rate,
// k = 0..floor(duration*grid_rate), is evaluated on the degree-5 polynomial
// through its 6 nearest points (degree n-1 when fewer than 6 points exist).
// Grid times outside [first point, last point] hold the end value.
// Throws ParameterError on zero points, non-increasing point times,
// grid_rate <= 0 or duration <= 0.
Waveform interpolate_poly5(std::span<const LevelPoint> points,
        double grid_rate_hz, double duration_s);

} // namespace nadc
