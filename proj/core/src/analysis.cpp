#include "nadc/analysis.hpp"

#include "nadc/errors.hpp"
#include "nadc/reconstruction.hpp"

namespace nadc {

Analysis analyze_trace(const SimulationTrace &trace, double f_in,
        const PowerParams &power, double nyquist_bits,
        std::optional<double> grid_rate)
{
    const auto &train = trace.spikes;
    Analysis a;
    a.power = power_report(trace, power, train.config.gating_enabled);

    Metrics &m = a.metrics;
    m.spike_count = train.events.size();
    m.mean_event_rate_hz = static_cast<double>(m.spike_count) / train.duration;
    m.compression = compression_ratio(train, f_in, nyquist_bits);

    if (train.events.empty())
    {
        m.sndr_error = "no events to reconstruct";
        return a;
    }
    try
    {
        const double rate =
                grid_rate ? *grid_rate : coherent_grid_rate(f_in, train.duration);
        const auto points = levels_from_spikes(train, train.config.lsb(),
                trace.initial_reference);
        const auto recon = interpolate_poly5(points, rate, train.duration);
        m.sndr_db = sndr(recon, f_in);
        m.enob_bits = enob(*m.sndr_db);
        if (a.power.total > 0.0)
        {
            m.fom_j_per_conv = fom(a.power.total, f_in, *m.enob_bits);
        }
    }
    catch (const Error &e)
    {
        m.sndr_error = e.what();
    }
    return a;
}

} // namespace nadc
