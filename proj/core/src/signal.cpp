#include "nadc/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "nadc/errors.hpp"
#include "text_io.hpp"

namespace nadc {

Waveform::Waveform(double sample_rate_hz, std::vector<double> samples,
        double t0_s)
        : sample_rate_(sample_rate_hz), t0_(t0_s), samples_(std::move(samples))
{
    if (!std::isfinite(sample_rate_) || sample_rate_ <= 0.0)
    {
        throw ParameterError("waveform sample_rate must be finite and > 0");
    }
    if (samples_.size() < 2)
    {
        throw ParameterError("waveform needs at least 2 samples");
    }
    if (!std::isfinite(t0_))
    {
        throw ParameterError("waveform t0 must be finite");
    }
    for (std::size_t k = 0; k < samples_.size(); ++k)
    {
        if (!std::isfinite(samples_[k]))
        {
            throw ParameterError(
                    "waveform sample " + std::to_string(k) + " is not finite");
        }
    }
    if (!std::isfinite(duration()))
    {
        throw ParameterError("waveform duration is not finite");
    }
}

double Waveform::value_at_offset(double tau) const noexcept
{
    const std::size_t last = samples_.size() - 1;
    const double u = tau * sample_rate_;
    if (!(u > 0.0))
    {
        return samples_.front();
    }
    if (u >= static_cast<double>(last))
    {
        return samples_.back();
    }
    // Snap to the grid so grid instants return the stored sample exactly.
    const double nearest = std::nearbyint(u);
    if (std::abs(u - nearest) <= 1e-9)
    {
        return samples_[static_cast<std::size_t>(nearest)];
    }
    const auto i = static_cast<std::size_t>(u);
    const double frac = u - static_cast<double>(i);
    const double a = samples_[i];
    const double b = samples_[i + 1];
    return a + frac * (b - a);
}

Waveform make_sinusoid(double amplitude_v, double frequency_hz,
        double offset_v, double duration_s, double sample_rate_hz, double t0_s)
{
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(amplitude_v) || !finite(frequency_hz) || !finite(offset_v) ||
            !finite(duration_s) || !finite(sample_rate_hz) || !finite(t0_s))
    {
        throw ParameterError("make_sinusoid: non-finite argument");
    }
    if (amplitude_v < 0.0)
    {
        throw ParameterError("make_sinusoid: amplitude must be >= 0");
    }
    if (frequency_hz <= 0.0 || sample_rate_hz <= 0.0 || duration_s <= 0.0)
    {
        throw ParameterError(
                "make_sinusoid: frequency, sample_rate and duration must be > 0");
    }
    if (sample_rate_hz < 20.0 * frequency_hz)
    {
        throw ParameterError("make_sinusoid: sample_rate must be >= 20x frequency");
    }
    if (duration_s * frequency_hz < 2.0 * (1.0 - 1e-12))
    {
        throw ParameterError("make_sinusoid: duration must cover >= 2 periods");
    }

    // Tolerate representation error in duration*rate (e.g. 1e-3 * 1e7).
    const double n_exact = duration_s * sample_rate_hz;
    double n_floor = std::floor(n_exact);
    if (n_exact - n_floor > 1.0 - 1e-9)
    {
        n_floor += 1.0;
    }
    const auto count = static_cast<std::size_t>(n_floor) + 1;

    std::vector<double> samples(count);
    const double w = 2.0 * std::numbers::pi * frequency_hz;
    for (std::size_t k = 0; k < count; ++k)
    {
        const double t = t0_s + static_cast<double>(k) / sample_rate_hz;
        samples[k] = offset_v + amplitude_v * std::sin(w * t);
    }
    return Waveform(sample_rate_hz, std::move(samples), t0_s);
}

double sample_at(const Waveform &w, double t)
{
    if (!std::isfinite(t) || t < w.t0() || t > w.t0() + w.duration())
    {
        throw RangeError("sample_at: t=" + detail::format_double(t) +
                " outside waveform span");
    }
    return w.value_at_offset(t - w.t0());
}

Waveform load_waveform(std::istream &in)
{
    std::vector<double> times;
    std::vector<double> values;
    detail::read_csv(in, {"t_s", "v"},
            [&](std::span<const std::string_view> fields, std::size_t line) {
                const double t = detail::parse_double(fields[0], line, "t_s");
                const double v = detail::parse_double(fields[1], line, "v");
                if (!times.empty() && !(t > times.back()))
                {
                    throw FormatError("time column not strictly increasing", line);
                }
                times.push_back(t);
                values.push_back(v);
            });
    if (times.size() < 2)
    {
        throw FormatError("waveform needs at least 2 data rows");
    }

    std::vector<double> steps(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
    {
        steps[i] = times[i + 1] - times[i];
    }
    std::vector<double> sorted = steps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
            sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (std::size_t i = 0; i < steps.size(); ++i)
    {
        if (std::abs(steps[i] - median) > 1e-6 * median)
        {
            // Header is line 1; row i+1 is on line i+3.
            throw FormatError("non-uniform time spacing", i + 3);
        }
    }
    return Waveform(1.0 / median, std::move(values), times.front());
}

Waveform load_waveform_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw FormatError("cannot open waveform file '" + path + "'");
    }
    try
    {
        return load_waveform(in);
    }
    catch (const FormatError &e)
    {
        throw FormatError(path + ": " + e.what());
    }
}

void write_waveform(std::ostream &out, const Waveform &w)
{
    out << "t_s,v\n";
    const auto samples = w.samples();
    for (std::size_t k = 0; k < samples.size(); ++k)
    {
        out << detail::format_double(w.time_of(k)) << ','
            << detail::format_double(samples[k]) << '\n';
    }
}

} // namespace nadc
