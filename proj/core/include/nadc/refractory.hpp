#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace nadc {

class Waveform;
struct AdcConfig;

// Refractory control voltage to dead-time mapping:
//   T(v) = clamp(t_base * exp(-v / v_scale), t_min, t_max)
// Lower control voltage gives a longer refractory period.
struct RefractoryModel
{
    double t_base = 1e-3;   // s, period at v_ref = 0
    double v_scale = 60e-3; // V
    double t_min = 100e-9;  // s
    double t_max = 10e-3;   // s

    // Throws ParameterError on t_base <= 0, v_scale <= 0 or bad clamps.
    void validate() const;

    // Model whose period is `t_ref` for every control voltage.
    static RefractoryModel constant(double t_ref);
};

inline constexpr double kDefaultSupply = 0.6;

// Throws ParameterError if v_ref is outside [0, supply].
double refractory_period(const RefractoryModel &m, double v_ref,
        double supply = kDefaultSupply);

// Inverse of the unclamped exponential: t_base that yields `t_ref` at
// `v_ref` for the model's v_scale.
double t_base_for(const RefractoryModel &m, double v_ref, double t_ref);

struct RefractoryCalibration
{
    double t_ref = 0.0;          // s
    double off_fraction = 0.0;   // achieved at t_ref
    std::size_t spike_count = 0; // at t_ref
    int evaluations = 0;         // simulations run
};

// Finds the refractory period for which simulating `stimulus` with `cfg`
// gates the comparators off for `target_off_fraction` of the record.
// Bisection on log(t_ref) over [1 ns, 10 ms]; cfg.dt is tightened to
// t_ref/4 for each trial. Throws CalibrationError if the target is not
// strictly inside (0, 1), is unreachable in the bracket, the result is
// off by more than 0.5 percentage points, or fewer than 20 spikes fire.
RefractoryCalibration calibrate_refractory(double target_off_fraction,
        const Waveform &stimulus, const AdcConfig &cfg);

inline constexpr double kCalibrationMinPeriod = 1e-9;
inline constexpr double kCalibrationMaxPeriod = 10e-3;
inline constexpr double kCalibrationTolerance = 0.005;

// Persisted calibration points, `v_ref_v,t_ref_s`.
struct RefractoryPoint
{
    double v_ref = 0.0;
    double t_ref = 0.0;
};

void write_refractory_points(std::ostream &out,
        const std::vector<RefractoryPoint> &points);
std::vector<RefractoryPoint> read_refractory_points(std::istream &in);

} // namespace nadc
