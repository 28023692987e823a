#include "nadc/adc_core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "nadc/errors.hpp"
#include "text_io.hpp"

namespace nadc {

double AdcConfig::refractory_period() const
{
    return nadc::refractory_period(refractory, v_ref, supply);
}

void AdcConfig::validate() const
{
    auto fail = [](const std::string &msg) {
        throw ConfigurationError("invalid ADC configuration: " + msg);
    };
    const double values[] = {v_high, v_mid, v_low, supply, comparator_delay,
            loop_delay, v_ref, droop_rate, noise_sigma, dt};
    for (double v : values)
    {
        if (!std::isfinite(v))
        {
            fail("non-finite parameter");
        }
    }
    if (!(v_low < v_mid && v_mid < v_high))
    {
        fail("levels must satisfy v_low < v_mid < v_high");
    }
    if (std::abs((v_high - v_mid) - (v_mid - v_low)) > 1e-12)
    {
        fail("window must be symmetric around v_mid");
    }
    if (supply <= 0.0)
    {
        fail("supply must be > 0");
    }
    if (comparator_delay < 0.0)
    {
        fail("comparator_delay must be >= 0");
    }
    if (loop_delay < comparator_delay)
    {
        fail("loop_delay must be >= comparator_delay");
    }
    if (noise_sigma < 0.0)
    {
        fail("noise_sigma must be >= 0");
    }
    if (dt <= 0.0)
    {
        fail("dt must be > 0");
    }
    double t_ref = 0.0;
    try
    {
        t_ref = refractory_period();
    }
    catch (const ParameterError &e)
    {
        fail(e.what());
    }
    if (dt > t_ref / 4.0 * (1.0 + 1e-12))
    {
        fail("dt " + detail::format_double(dt) +
                " s exceeds refractory_period/4 = " +
                detail::format_double(t_ref / 4.0) + " s");
    }
}

void AdcConfig::validate_for_frequency(double frequency_hz) const
{
    validate();
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
    {
        throw ConfigurationError("input frequency must be > 0");
    }
    if (dt > 1.0 / (50.0 * frequency_hz) * (1.0 + 1e-12))
    {
        throw ConfigurationError("invalid ADC configuration: dt " +
                detail::format_double(dt) + " s too coarse for " +
                detail::format_double(frequency_hz) + " Hz input");
    }
}

double SimulationTrace::gate_off_time() const noexcept
{
    double total = 0.0;
    for (const auto &g : gate_off_intervals)
    {
        total += g.length();
    }
    return total;
}

double SimulationTrace::off_fraction() const noexcept
{
    if (!(spikes.duration > 0.0))
    {
        return 0.0;
    }
    return std::clamp(gate_off_time() / spikes.duration, 0.0, 1.0);
}

std::optional<Polarity> detect_crossing(double prev, double curr,
        double v_high, double v_low) noexcept
{
    const bool up = prev < v_high && v_high <= curr;
    const bool down = prev > v_low && v_low >= curr;
    if (up && down)
    {
        return (std::abs(v_high - prev) <= std::abs(prev - v_low))
                ? Polarity::Up
                : Polarity::Down;
    }
    if (up)
    {
        return Polarity::Up;
    }
    if (down)
    {
        return Polarity::Down;
    }
    return std::nullopt;
}

double comparator_input(const Waveform &w, const AdcConfig &cfg,
        double reference, double last_fold, double tau)
{
    return cfg.v_mid + (w.value_at_offset(tau) - reference) -
            cfg.droop_rate * (tau - last_fold);
}

namespace {

struct Crossing
{
    double t;
    Polarity polarity;
};

} // namespace

SimulationTrace simulate(const Waveform &w, const AdcConfig &cfg)
{
    cfg.validate();
    const double duration = w.duration();
    if (!(duration > 0.0))
    {
        throw ConfigurationError("waveform duration must be > 0");
    }
    if (cfg.dt > duration)
    {
        throw ConfigurationError("dt exceeds the waveform duration");
    }
    const double t_ref = cfg.refractory_period();
    const double dt = cfg.dt;

    std::mt19937_64 rng(cfg.rng_seed);
    std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
    const bool noisy = cfg.noise_sigma > 0.0;

    SimulationTrace trace;
    trace.spikes.duration = duration;
    trace.spikes.config = cfg;
    trace.initial_reference = w.value_at_offset(0.0);

    double reference = trace.initial_reference;
    double last_fold = 0.0;
    auto v_cmp = [&](double tau) {
        double v = comparator_input(w, cfg, reference, last_fold, tau);
        if (noisy)
        {
            v += noise(rng);
        }
        return v;
    };

    double active_from = 0.0;
    while (active_from <= duration)
    {
        std::optional<Crossing> hit;
        double t_prev = active_from;
        double v_prev = v_cmp(t_prev);

        // Still beyond a threshold when the comparators wake up: fire now.
        if (v_prev >= cfg.v_high)
        {
            hit = Crossing{t_prev, Polarity::Up};
        }
        else if (v_prev <= cfg.v_low)
        {
            hit = Crossing{t_prev, Polarity::Down};
        }
        else
        {
            auto k = static_cast<std::uint64_t>(std::floor(t_prev / dt)) + 1;
            while (static_cast<double>(k) * dt <= t_prev)
            {
                ++k;
            }
            while (true)
            {
                double t = static_cast<double>(k) * dt;
                const bool last = t >= duration;
                if (last)
                {
                    t = duration;
                }
                const double v = v_cmp(t);
                if (const auto p = detect_crossing(v_prev, v, cfg.v_high,
                            cfg.v_low))
                {
                    const double level =
                            *p == Polarity::Up ? cfg.v_high : cfg.v_low;
                    const double frac = (level - v_prev) / (v - v_prev);
                    hit = Crossing{t_prev + frac * (t - t_prev), *p};
                    break;
                }
                if (last)
                {
                    break;
                }
                t_prev = t;
                v_prev = v;
                ++k;
            }
        }

        if (!hit)
        {
            break;
        }
        const double t_event = hit->t + cfg.comparator_delay;
        const double t_fold = hit->t + cfg.loop_delay;
        if (t_fold > duration)
        {
            break;
        }

        trace.spikes.events.push_back({t_event, hit->polarity});
        reference = w.value_at_offset(t_fold);
        last_fold = t_fold;
        trace.fold_history.push_back({t_fold, reference});
        trace.gate_off_intervals.push_back(
                {t_event, std::min(t_event + t_ref, duration)});
        active_from = t_fold + t_ref;
    }
    return trace;
}

void write_spike_events(std::ostream &out, const std::vector<SpikeEvent> &events)
{
    out << "t_s,polarity\n";
    for (const auto &e : events)
    {
        out << detail::format_double(e.t) << ','
            << (e.polarity == Polarity::Up ? "+1" : "-1") << '\n';
    }
}

std::vector<SpikeEvent> read_spike_events(std::istream &in)
{
    std::vector<SpikeEvent> events;
    detail::read_csv(in, {"t_s", "polarity"},
            [&](std::span<const std::string_view> f, std::size_t line) {
                const double t = detail::parse_double(f[0], line, "t_s");
                if (t < 0.0)
                {
                    throw FormatError("negative event time", line);
                }
                if (!events.empty() && !(t > events.back().t))
                {
                    throw FormatError("event times not strictly increasing",
                            line);
                }
                Polarity p;
                if (f[1] == "+1" || f[1] == "1")
                {
                    p = Polarity::Up;
                }
                else if (f[1] == "-1")
                {
                    p = Polarity::Down;
                }
                else
                {
                    throw FormatError("polarity must be +1 or -1, got '" +
                                    std::string(f[1]) + "'",
                            line);
                }
                events.push_back({t, p});
            });
    return events;
}

std::vector<GateInterval> gate_intervals_for(
        const std::vector<SpikeEvent> &events, double t_ref, double duration)
{
    std::vector<GateInterval> out;
    out.reserve(events.size());
    for (const auto &e : events)
    {
        const double start = std::clamp(e.t, 0.0, duration);
        out.push_back({start, std::clamp(e.t + t_ref, 0.0, duration)});
    }
    return out;
}

} // namespace nadc
