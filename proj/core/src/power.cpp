#include "nadc/power.hpp"

#include <cmath>
#include <string>

#include "nadc/errors.hpp"
#include "text_io.hpp"

namespace nadc {

void PowerParams::validate() const
{
    for (double v : {static_baseline, energy_per_event, overhead})
    {
        if (!std::isfinite(v) || v < 0.0)
        {
            throw ParameterError("power parameters must be finite and >= 0");
        }
    }
}

namespace {

double effective_static(double baseline, double off_fraction, bool gating)
{
    return gating ? baseline * (1.0 - off_fraction) : baseline;
}

} // namespace

PowerReport power_report(const SimulationTrace &trace, const PowerParams &params,
        bool gating)
{
    params.validate();
    const double duration = trace.spikes.duration;
    if (!(duration > 0.0))
    {
        throw ParameterError("trace duration must be > 0");
    }

    PowerReport r;
    r.static_baseline = params.static_baseline;
    r.off_fraction = trace.off_fraction();
    r.static_effective =
            effective_static(params.static_baseline, r.off_fraction, gating);
    r.dynamic = static_cast<double>(trace.spikes.events.size()) *
            params.energy_per_event / duration;
    r.overhead = params.overhead;
    r.total = r.static_effective + r.dynamic + r.overhead;
    r.reduction_percent = r.static_baseline > 0.0
            ? 100.0 * (r.static_baseline - r.static_effective) /
                    r.static_baseline
            : 0.0;
    return r;
}

double calibrate_dynamic_energy(double target_total,
        const SimulationTrace &trace, double static_baseline, double overhead,
        bool gating)
{
    const auto spikes = trace.spikes.events.size();
    if (spikes == 0)
    {
        throw CalibrationError("dynamic energy calibration needs >= 1 spike");
    }
    const double duration = trace.spikes.duration;
    if (!(duration > 0.0))
    {
        throw CalibrationError("trace duration must be > 0");
    }
    const double residual = target_total -
            effective_static(static_baseline, trace.off_fraction(), gating) -
            overhead;
    if (!(residual > 0.0))
    {
        throw CalibrationError("target total power " +
                detail::format_double(target_total) +
                " W leaves no room for dynamic power");
    }
    return residual * duration / static_cast<double>(spikes);
}

} // namespace nadc
