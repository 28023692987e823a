#include "nadc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "nadc/errors.hpp"

namespace nadc {

SimulationTrace simulate_dense(const Waveform &w, const AdcConfig &cfg,
        double dt_fine)
{
    cfg.validate();
    if (cfg.noise_sigma > 0.0)
    {
        throw UnsupportedError(
                "dense oracle is only defined for noise-free configurations");
    }
    if (!(dt_fine > 0.0) || dt_fine > cfg.dt / 10.0 * (1.0 + 1e-12))
    {
        throw ParameterError("dense oracle needs 0 < dt_fine <= dt/10");
    }

    const double duration = w.duration();
    const double t_ref = cfg.refractory_period();
    const auto steps = static_cast<std::uint64_t>(std::ceil(duration / dt_fine));

    SimulationTrace trace;
    trace.spikes.duration = duration;
    trace.spikes.config = cfg;
    trace.initial_reference = w.value_at_offset(0.0);

    double reference = trace.initial_reference;
    double last_fold = 0.0;
    std::uint64_t k = 0;
    while (k <= steps)
    {
        const double t = std::min(static_cast<double>(k) * dt_fine, duration);
        const double v = cfg.v_mid + (w.value_at_offset(t) - reference) -
                cfg.droop_rate * (t - last_fold);

        Polarity polarity;
        if (v >= cfg.v_high)
        {
            polarity = Polarity::Up;
        }
        else if (v <= cfg.v_low)
        {
            polarity = Polarity::Down;
        }
        else
        {
            ++k;
            continue;
        }

        const double t_fold = t + cfg.loop_delay;
        if (t_fold > duration)
        {
            break;
        }
        const double t_event = t + cfg.comparator_delay;
        trace.spikes.events.push_back({t_event, polarity});
        reference = w.value_at_offset(t_fold);
        last_fold = t_fold;
        trace.fold_history.push_back({t_fold, reference});
        trace.gate_off_intervals.push_back(
                {t_event, std::min(t_event + t_ref, duration)});

        // Comparators stay blind until the first grid step at or after
        // the end of the refractory period.
        const double wake = t_fold + t_ref;
        auto next = static_cast<std::uint64_t>(std::ceil(wake / dt_fine));
        while (static_cast<double>(next) * dt_fine < wake)
        {
            ++next;
        }
        while (next > 0 && static_cast<double>(next - 1) * dt_fine >= wake)
        {
            --next;
        }
        k = std::max(next, k + 1);
    }
    return trace;
}

} // namespace nadc
