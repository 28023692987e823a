#pragma once

#include "nadc/adc_core.hpp"

namespace nadc {

struct PowerParams
{
    double static_baseline = 30.7e-9; // W, both comparators, ungated
    double energy_per_event = 0.0;    // J, dynamic energy per conversion
    double overhead = 0.0;            // W, refractory + folding bias

    // Throws ParameterError on negative or non-finite values.
    void validate() const;
};

struct PowerReport
{
    double static_baseline = 0.0;  // W
    double static_effective = 0.0; // W
    double dynamic = 0.0;          // W
    double overhead = 0.0;         // W
    double total = 0.0;            // W
    double off_fraction = 0.0;     // comparator gate-off share of the record
    double reduction_percent = 0.0;
};

// off_fraction is the refractory duty of the trace whether or not gating
// is enabled; only with gating does it lower the effective static power.
PowerReport power_report(const SimulationTrace &trace, const PowerParams &params,
        bool gating);

// Energy per event that makes power_report(trace, ...).total equal
// target_total. Throws CalibrationError if the trace has no spikes or the
// residual after static and overhead power is not positive.
double calibrate_dynamic_energy(double target_total,
        const SimulationTrace &trace, double static_baseline, double overhead,
        bool gating);

} // namespace nadc
