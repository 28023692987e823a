#pragma once

#include <iosfwd>
#include <string>

#include "nadc/adc_core.hpp"
#include "nadc/power.hpp"
#include "nadc/signal.hpp"

namespace nadc {

// Built-in test stimulus. A zero duration means `periods` input periods;
// a zero sample rate means 2000 samples per input period.
struct StimulusSpec
{
    double amplitude = 0.64;   // V
    double frequency = 1000.0; // Hz
    double offset = 0.0;       // V
    double periods = 10.0;
    double duration = 0.0;     // s
    double sample_rate = 0.0;  // Hz

    double effective_duration() const noexcept;
    double effective_sample_rate() const noexcept;
};

Waveform make_stimulus(const StimulusSpec &s);

struct RunConfig
{
    AdcConfig adc;
    PowerParams power;
    StimulusSpec stimulus;
    double nyquist_bits = 10.0;
};

// Flat `key = value` text; `#` starts a comment. The window levels and the
// simulation step (v_h_v, v_m_v, v_l_v, dt_s) are required, every other key
// has a default. Unknown keys, duplicates and bad values are rejected with
// a ConfigurationError naming `source` and the key.
RunConfig parse_run_config(std::istream &in, const std::string &source);
RunConfig load_run_config(const std::string &path);

// Writes every key, so the output parses back to an identical RunConfig.
void write_run_config(std::ostream &out, const RunConfig &cfg);

} // namespace nadc
