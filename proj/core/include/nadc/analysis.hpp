#pragma once

#include <optional>

#include "nadc/adc_core.hpp"
#include "nadc/metrics.hpp"
#include "nadc/power.hpp"

namespace nadc {

struct Analysis
{
    Metrics metrics;
    PowerReport power;
};

// Reconstruct, measure and account one trace. The input bandwidth is taken
// as f_in. Gating follows trace.spikes.config.gating_enabled. SNDR failures
// (no events, record too short) leave sndr/enob/fom empty and set
// metrics.sndr_error instead of throwing.
Analysis analyze_trace(const SimulationTrace &trace, double f_in,
        const PowerParams &power, double nyquist_bits,
        std::optional<double> grid_rate = std::nullopt);

} // namespace nadc
