#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace nadc {

// Uniformly sampled analog waveform. Immutable once constructed.
class Waveform
{
public:
    // Throws ParameterError unless rate > 0, >= 2 samples, all finite.
    Waveform(double sample_rate_hz, std::vector<double> samples,
            double t0_s = 0.0);

    double sample_rate() const noexcept { return sample_rate_; }
    double t0() const noexcept { return t0_; }
    std::span<const double> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double duration() const noexcept
    {
        return static_cast<double>(samples_.size() - 1) / sample_rate_;
    }
    double time_of(std::size_t k) const noexcept
    {
        return t0_ + static_cast<double>(k) / sample_rate_;
    }

    // Linear interpolation at offset tau = t - t0 from the first sample.
    // tau is clamped to [0, duration]; callers that need range checking
    // use sample_at().
    double value_at_offset(double tau) const noexcept;

private:
    double sample_rate_;
    double t0_;
    std::vector<double> samples_;
};

Waveform make_sinusoid(double amplitude_v, double frequency_hz,
        double offset_v, double duration_s, double sample_rate_hz,
        double t0_s = 0.0);

// Piecewise-linear view of w at absolute time t (s). Exact at grid points.
// Throws RangeError outside [t0, t0 + duration].
double sample_at(const Waveform &w, double t);

// `t_s,v` delimited text.
Waveform load_waveform(std::istream &in);
Waveform load_waveform_file(const std::string &path);
void write_waveform(std::ostream &out, const Waveform &w);

} // namespace nadc
