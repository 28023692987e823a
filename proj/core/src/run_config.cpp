#include "nadc/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "nadc/errors.hpp"
#include "text_io.hpp"

namespace nadc {

double StimulusSpec::effective_duration() const noexcept
{
    return duration > 0.0 ? duration : periods / frequency;
}

double StimulusSpec::effective_sample_rate() const noexcept
{
    return sample_rate > 0.0 ? sample_rate : 2000.0 * frequency;
}

Waveform make_stimulus(const StimulusSpec &s)
{
    return make_sinusoid(s.amplitude, s.frequency, s.offset,
            s.effective_duration(), s.effective_sample_rate());
}

namespace {

using Setter = std::function<void(RunConfig &, std::string_view)>;

struct Key
{
    Setter set;
    std::function<std::string(const RunConfig &)> get;
    bool required = false;
};

double to_double(std::string_view v)
{
    return detail::parse_double(v, 0, "value");
}

template <typename F>
Key real(F field, bool required = false)
{
    return Key{[field](RunConfig &c, std::string_view v) { field(c) = to_double(v); },
            [field](const RunConfig &c) {
                RunConfig copy = c;
                return detail::format_double(field(copy));
            },
            required};
}

const std::map<std::string, Key, std::less<>> &keys()
{
    static const std::map<std::string, Key, std::less<>> table = [] {
        std::map<std::string, Key, std::less<>> t;
        t["v_h_v"] = real([](RunConfig &c) -> double & { return c.adc.v_high; }, true);
        t["v_m_v"] = real([](RunConfig &c) -> double & { return c.adc.v_mid; }, true);
        t["v_l_v"] = real([](RunConfig &c) -> double & { return c.adc.v_low; }, true);
        t["dt_s"] = real([](RunConfig &c) -> double & { return c.adc.dt; }, true);
        t["supply_v"] = real([](RunConfig &c) -> double & { return c.adc.supply; });
        t["comparator_delay_s"] = real(
                [](RunConfig &c) -> double & { return c.adc.comparator_delay; });
        t["loop_delay_s"] =
                real([](RunConfig &c) -> double & { return c.adc.loop_delay; });
        t["refr_t_base_s"] = real(
                [](RunConfig &c) -> double & { return c.adc.refractory.t_base; });
        t["refr_v_scale_v"] = real(
                [](RunConfig &c) -> double & { return c.adc.refractory.v_scale; });
        t["refr_t_min_s"] = real(
                [](RunConfig &c) -> double & { return c.adc.refractory.t_min; });
        t["refr_t_max_s"] = real(
                [](RunConfig &c) -> double & { return c.adc.refractory.t_max; });
        t["v_ref_v"] = real([](RunConfig &c) -> double & { return c.adc.v_ref; });
        t["droop_v_per_s"] =
                real([](RunConfig &c) -> double & { return c.adc.droop_rate; });
        t["noise_sigma_v"] =
                real([](RunConfig &c) -> double & { return c.adc.noise_sigma; });
        t["static_baseline_w"] = real(
                [](RunConfig &c) -> double & { return c.power.static_baseline; });
        t["energy_per_event_j"] = real(
                [](RunConfig &c) -> double & { return c.power.energy_per_event; });
        t["overhead_w"] =
                real([](RunConfig &c) -> double & { return c.power.overhead; });
        t["stim_amplitude_v"] = real(
                [](RunConfig &c) -> double & { return c.stimulus.amplitude; });
        t["stim_frequency_hz"] = real(
                [](RunConfig &c) -> double & { return c.stimulus.frequency; });
        t["stim_offset_v"] =
                real([](RunConfig &c) -> double & { return c.stimulus.offset; });
        t["stim_periods"] =
                real([](RunConfig &c) -> double & { return c.stimulus.periods; });
        t["stim_duration_s"] =
                real([](RunConfig &c) -> double & { return c.stimulus.duration; });
        t["stim_sample_rate_hz"] = real(
                [](RunConfig &c) -> double & { return c.stimulus.sample_rate; });
        t["nyquist_bits"] =
                real([](RunConfig &c) -> double & { return c.nyquist_bits; });

        t["gating_enabled"] = Key{
                [](RunConfig &c, std::string_view v) {
                    if (v == "1" || v == "true")
                    {
                        c.adc.gating_enabled = true;
                    }
                    else if (v == "0" || v == "false")
                    {
                        c.adc.gating_enabled = false;
                    }
                    else
                    {
                        throw FormatError("expected 0/1/true/false");
                    }
                },
                [](const RunConfig &c) {
                    return std::string(c.adc.gating_enabled ? "1" : "0");
                }};
        t["rng_seed"] = Key{
                [](RunConfig &c, std::string_view v) {
                    std::uint64_t seed = 0;
                    const auto [p, ec] =
                            std::from_chars(v.data(), v.data() + v.size(), seed);
                    if (ec != std::errc() || p != v.data() + v.size())
                    {
                        throw FormatError("expected an unsigned integer");
                    }
                    c.adc.rng_seed = seed;
                },
                [](const RunConfig &c) { return std::to_string(c.adc.rng_seed); }};
        return t;
    }();
    return table;
}

} // namespace

RunConfig parse_run_config(std::istream &in, const std::string &source)
{
    RunConfig cfg;
    std::set<std::string, std::less<>> seen;
    std::string text;
    std::size_t line = 0;
    auto fail = [&](const std::string &key, const std::string &msg) {
        throw ConfigurationError(source + ":" + std::to_string(line) +
                ": key '" + key + "': " + msg);
    };
    while (std::getline(in, text))
    {
        ++line;
        std::string_view view = text;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
        {
            view = view.substr(0, hash);
        }
        view = detail::trim(view);
        if (view.empty())
        {
            continue;
        }
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
        {
            throw ConfigurationError(source + ":" + std::to_string(line) +
                    ": expected key = value");
        }
        const std::string key(detail::trim(view.substr(0, eq)));
        const auto value = detail::trim(view.substr(eq + 1));
        const auto it = keys().find(key);
        if (it == keys().end())
        {
            fail(key, "unknown key");
        }
        if (!seen.insert(key).second)
        {
            fail(key, "duplicate key");
        }
        try
        {
            it->second.set(cfg, value);
        }
        catch (const FormatError &e)
        {
            fail(key, "bad value '" + std::string(value) + "'");
        }
    }
    for (const auto &[name, key] : keys())
    {
        if (key.required && !seen.count(name))
        {
            throw ConfigurationError(
                    source + ": missing required key '" + name + "'");
        }
    }
    try
    {
        cfg.adc.validate();
        cfg.power.validate();
    }
    catch (const Error &e)
    {
        throw ConfigurationError(source + ": " + e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigurationError("cannot open config file '" + path + "'");
    }
    return parse_run_config(in, path);
}

void write_run_config(std::ostream &out, const RunConfig &cfg)
{
    for (const auto &[name, key] : keys())
    {
        out << name << " = " << key.get(cfg) << '\n';
    }
}

} // namespace nadc
