#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "nadc/adc_core.hpp"
#include "nadc/power.hpp"
#include "nadc/signal.hpp"

namespace nadc {

// a_fs / 2^m. Throws ParameterError unless a_fs > 0 and m >= 0.
double lsb(double a_fs, int m);

// Signal-to-noise-and-distortion ratio (dB) of a reconstructed record.
//
// The mean is removed, a periodic Hann window applied, and the one-sided
// power spectrum taken over the first N samples, N the largest power of two
// not exceeding the sample count. Signal power is the peak bin nearest f_in
// plus 2 bins either side; noise and distortion is every other bin of
// (0, fs/2] except the two lowest. Requires duration >= 10/f_in,
// fs >= 20*f_in and f_in < fs/2 (ParameterError otherwise).
double sndr(const Waveform &recon, double f_in);

// Grid rate whose largest power-of-two prefix spans a whole number of input
// periods, with at least `samples_per_period` samples per period. Keeps the
// tone on an FFT bin for records of >= 1 period.
double coherent_grid_rate(double f_in, double duration,
        int samples_per_period = 256);

double enob(double sndr_db) noexcept;

// power / (2 * bw * 2^enob). Throws ParameterError unless power, bw > 0.
double fom(double power_w, double bw_hz, double enob_bits);

struct CompressionRatio
{
    double ratio = 0.0;     // +infinity when no events fired
    bool no_events = false;
};

// Nyquist bits over event bits, each event costing one polarity bit plus
// ceil(log2(duration / dt)) timestamp bits (dt from the train's config).
CompressionRatio compression_ratio(const SpikeTrain &train, double bw_hz,
        double nyquist_bits);

struct Metrics
{
    std::optional<double> sndr_db;
    std::optional<double> enob_bits;
    std::optional<double> fom_j_per_conv;
    std::size_t spike_count = 0;
    double mean_event_rate_hz = 0.0;
    CompressionRatio compression;
    std::string sndr_error; // set when sndr could not be computed
};

// `name,value,unit` rows; power rows are appended when given.
void write_metrics_csv(std::ostream &out, const Metrics &m,
        const PowerReport *power = nullptr);
// One JSON object; power goes under the "power" key when given.
void write_metrics_json(std::ostream &out, const Metrics &m,
        const PowerReport *power = nullptr);

} // namespace nadc
