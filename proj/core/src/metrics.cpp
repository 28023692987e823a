#include "nadc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <vector>

#include <fftw3.h>
#include <json.hpp>

#include "nadc/errors.hpp"
#include "text_io.hpp"

namespace nadc {

double lsb(double a_fs, int m)
{
    if (!(a_fs > 0.0) || !std::isfinite(a_fs))
    {
        throw ParameterError("full-scale range must be > 0");
    }
    if (m < 0)
    {
        throw ParameterError("resolution bits must be >= 0");
    }
    return std::ldexp(a_fs, -m);
}

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex &fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

std::vector<double> power_spectrum(std::vector<double> &frame)
{
    const auto n = frame.size();
    auto *spectrum = fftw_alloc_complex(n / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), frame.data(), spectrum,
                FFTW_ESTIMATE);
    }
    fftw_execute(plan);

    std::vector<double> power(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k)
    {
        const double re = spectrum[k][0];
        const double im = spectrum[k][1];
        // Interior bins stand for both the positive and negative frequency.
        const double weight = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        power[k] = weight * (re * re + im * im);
    }
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(spectrum);
    return power;
}

} // namespace

double sndr(const Waveform &recon, double f_in)
{
    const double fs = recon.sample_rate();
    if (!(f_in > 0.0) || !std::isfinite(f_in))
    {
        throw ParameterError("sndr: input frequency must be > 0");
    }
    if (f_in >= fs / 2.0)
    {
        throw ParameterError("sndr: input frequency at or above Nyquist");
    }
    if (fs < 20.0 * f_in)
    {
        throw ParameterError("sndr: grid rate must be >= 20x input frequency");
    }
    if (recon.duration() * f_in < 10.0 * (1.0 - 1e-9))
    {
        throw ParameterError("sndr: record shorter than 10 input periods");
    }

    std::size_t n = 1;
    while (n * 2 <= recon.size())
    {
        n *= 2;
    }
    const auto samples = recon.samples().first(n);
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    if (*lo == *hi)
    {
        throw ParameterError("sndr: record has no AC content");
    }

    double mean = 0.0;
    for (double v : samples)
    {
        mean += v;
    }
    mean /= static_cast<double>(n);

    std::vector<double> frame(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double hann = 0.5 *
                (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(n)));
        frame[i] = (samples[i] - mean) * hann;
    }
    const auto power = power_spectrum(frame);

    const std::size_t half = n / 2;
    constexpr std::size_t side = 2;
    constexpr std::size_t dc_bins = 2; // bins 1 and 2; bin 0 is outside (0, fs/2]
    const auto nominal = static_cast<std::size_t>(
            std::llround(f_in * static_cast<double>(n) / fs));
    const std::size_t search_lo = nominal > side ? nominal - side : 1;
    const std::size_t search_hi = std::min(nominal + side, half);
    std::size_t peak = std::max<std::size_t>(search_lo, 1);
    for (std::size_t k = peak; k <= search_hi; ++k)
    {
        if (power[k] > power[peak])
        {
            peak = k;
        }
    }
    const std::size_t sig_lo = peak > side ? peak - side : 1;
    const std::size_t sig_hi = std::min(peak + side, half);

    double p_signal = 0.0;
    double p_noise = 0.0;
    for (std::size_t k = 1; k <= half; ++k)
    {
        if (k >= sig_lo && k <= sig_hi)
        {
            p_signal += power[k];
        }
        else if (k > dc_bins)
        {
            p_noise += power[k];
        }
    }
    if (p_signal + p_noise <= 0.0)
    {
        throw ParameterError("sndr: record has no AC content");
    }
    if (p_noise <= 0.0)
    {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(p_signal / p_noise);
}

double coherent_grid_rate(double f_in, double duration, int samples_per_period)
{
    if (!(f_in > 0.0) || !(duration > 0.0) || samples_per_period < 1)
    {
        throw ParameterError("coherent_grid_rate: bad arguments");
    }
    const double cycles = std::floor(duration * f_in * (1.0 + 1e-12));
    if (cycles < 1.0)
    {
        throw ParameterError("coherent_grid_rate: record shorter than a period");
    }
    double n = 1.0;
    while (n < cycles * samples_per_period)
    {
        n *= 2.0;
    }
    return n * f_in / cycles;
}

double enob(double sndr_db) noexcept
{
    return (sndr_db - 1.76) / 6.02;
}

double fom(double power_w, double bw_hz, double enob_bits)
{
    if (!(power_w > 0.0) || !(bw_hz > 0.0))
    {
        throw ParameterError("fom: power and bandwidth must be > 0");
    }
    return power_w / (2.0 * bw_hz * std::exp2(enob_bits));
}

CompressionRatio compression_ratio(const SpikeTrain &train, double bw_hz,
        double nyquist_bits)
{
    if (!(bw_hz > 0.0))
    {
        throw ParameterError("compression_ratio: bandwidth must be > 0");
    }
    if (!(train.duration > 0.0))
    {
        throw ParameterError("compression_ratio: duration must be > 0");
    }
    if (train.events.empty())
    {
        return {std::numeric_limits<double>::infinity(), true};
    }
    const double timestamp_bits =
            std::ceil(std::log2(train.duration / train.config.dt));
    const double bits_per_event = 1.0 + std::max(timestamp_bits, 0.0);
    const double nyquist = 2.0 * bw_hz * train.duration * nyquist_bits;
    return {nyquist / (static_cast<double>(train.events.size()) * bits_per_event),
            false};
}

namespace {

void csv_row(std::ostream &out, const char *name, std::optional<double> value,
        const char *unit)
{
    out << name << ',' << (value ? detail::format_double(*value) : "nan") << ','
        << unit << '\n';
}

nlohmann::json optional_number(std::optional<double> v)
{
    if (!v || !std::isfinite(*v))
    {
        return nullptr;
    }
    return *v;
}

} // namespace

void write_metrics_csv(std::ostream &out, const Metrics &m,
        const PowerReport *power)
{
    out << "name,value,unit\n";
    csv_row(out, "sndr_db", m.sndr_db, "dB");
    csv_row(out, "enob_bits", m.enob_bits, "bit");
    csv_row(out, "fom_j_per_conv", m.fom_j_per_conv, "J/conv");
    csv_row(out, "spike_count", static_cast<double>(m.spike_count), "count");
    csv_row(out, "mean_event_rate_hz", m.mean_event_rate_hz, "Hz");
    out << "compression_ratio,"
        << (m.compression.no_events ? "inf"
                                    : detail::format_double(m.compression.ratio))
        << ",ratio\n";
    if (power)
    {
        csv_row(out, "static_baseline_w", power->static_baseline, "W");
        csv_row(out, "static_effective_w", power->static_effective, "W");
        csv_row(out, "dynamic_w", power->dynamic, "W");
        csv_row(out, "overhead_w", power->overhead, "W");
        csv_row(out, "total_w", power->total, "W");
        csv_row(out, "off_fraction", power->off_fraction, "ratio");
        csv_row(out, "reduction_percent", power->reduction_percent, "%");
    }
}

void write_metrics_json(std::ostream &out, const Metrics &m,
        const PowerReport *power)
{
    nlohmann::ordered_json j;
    j["sndr_db"] = optional_number(m.sndr_db);
    j["enob_bits"] = optional_number(m.enob_bits);
    j["fom_j_per_conv"] = optional_number(m.fom_j_per_conv);
    j["spike_count"] = m.spike_count;
    j["mean_event_rate_hz"] = m.mean_event_rate_hz;
    j["compression_ratio"] = m.compression.no_events
            ? nlohmann::ordered_json(nullptr)
            : nlohmann::ordered_json(m.compression.ratio);
    j["compression_infinite"] = m.compression.no_events;
    if (!m.sndr_error.empty())
    {
        j["sndr_error"] = m.sndr_error;
    }
    if (power)
    {
        j["power"] = {
                {"static_baseline_w", power->static_baseline},
                {"static_effective_w", power->static_effective},
                {"dynamic_w", power->dynamic},
                {"overhead_w", power->overhead},
                {"total_w", power->total},
                {"off_fraction", power->off_fraction},
                {"reduction_percent", power->reduction_percent},
        };
    }
    out << j.dump(2) << '\n';
}

} // namespace nadc
