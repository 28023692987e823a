#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "nadc/refractory.hpp"
#include "nadc/signal.hpp"

namespace nadc {

// Full parameter set of one Neuron-ADC run. Levels are in the folded
// comparator domain: the comparator sees v_mid + (input - reference).
struct AdcConfig
{
    double v_high = 0.095; // V
    double v_mid = 0.075;  // V
    double v_low = 0.055;  // V
    double supply = kDefaultSupply;
    double comparator_delay = 100e-9; // s, crossing -> spike
    double loop_delay = 200e-9;       // s, crossing -> fold
    RefractoryModel refractory{};
    double v_ref = 0.2;       // V, refractory control voltage
    double droop_rate = 0.0;  // V/s, fold reference leakage
    double noise_sigma = 0.0; // V, comparator-referred
    double dt = 20e-9;        // s, simulation step
    bool gating_enabled = true;
    std::uint64_t rng_seed = 1;

    double lsb() const noexcept { return v_high - v_mid; }
    double refractory_period() const;

    // Throws ConfigurationError naming the violated constraint.
    void validate() const;
    // Additionally requires dt <= 1 / (50 * frequency).
    void validate_for_frequency(double frequency_hz) const;
};

enum class Polarity : std::int8_t
{
    Up = 1,
    Down = -1,
};

constexpr int sign(Polarity p) noexcept { return static_cast<int>(p); }

struct SpikeEvent
{
    double t = 0.0; // s
    Polarity polarity = Polarity::Up;

    bool operator==(const SpikeEvent &) const = default;
};

struct SpikeTrain
{
    std::vector<SpikeEvent> events;
    double duration = 0.0; // s
    AdcConfig config;
};

struct GateInterval
{
    double start = 0.0;
    double end = 0.0;
    double length() const noexcept { return end - start; }
};

struct FoldRecord
{
    double t = 0.0;         // s
    double reference = 0.0; // V, input value latched by the fold
};

struct SimulationTrace
{
    SpikeTrain spikes;
    std::vector<GateInterval> gate_off_intervals;
    std::vector<FoldRecord> fold_history;
    double initial_reference = 0.0;

    double gate_off_time() const noexcept;
    double off_fraction() const noexcept;
};

// UP if prev < v_high <= curr, DN if prev > v_low >= curr. If both apply
// the threshold nearer to prev wins.
std::optional<Polarity> detect_crossing(double prev, double curr,
        double v_high, double v_low) noexcept;

// Event-driven simulation on a dt grid with linear crossing refinement.
// Simulation time runs from 0 to w.duration(), measured from w.t0().
// A crossing whose fold would land past the end of the record is dropped.
SimulationTrace simulate(const Waveform &w, const AdcConfig &cfg);

// Comparator input at simulation time tau for a given fold state, noise
// excluded.
double comparator_input(const Waveform &w, const AdcConfig &cfg,
        double reference, double last_fold, double tau);

// `t_s,polarity` delimited text.
void write_spike_events(std::ostream &out,
        const std::vector<SpikeEvent> &events);
std::vector<SpikeEvent> read_spike_events(std::istream &in);

// Gate-off intervals implied by a spike list: [t, t + T_ref] clipped to
// [0, duration].
std::vector<GateInterval> gate_intervals_for(
        const std::vector<SpikeEvent> &events, double t_ref, double duration);

} // namespace nadc
