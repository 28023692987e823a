#include "nadc/refractory.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "nadc/adc_core.hpp"
#include "nadc/errors.hpp"
#include "text_io.hpp"

namespace nadc {

void RefractoryModel::validate() const
{
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(t_base))
    {
        throw ParameterError("refractory t_base must be > 0");
    }
    if (!positive(v_scale))
    {
        throw ParameterError("refractory v_scale must be > 0");
    }
    if (!positive(t_min) || !positive(t_max) || t_min > t_max)
    {
        throw ParameterError("refractory clamps need 0 < t_min <= t_max");
    }
}

RefractoryModel RefractoryModel::constant(double t_ref)
{
    RefractoryModel m;
    m.t_base = t_ref;
    m.t_min = t_ref;
    m.t_max = t_ref;
    return m;
}

double refractory_period(const RefractoryModel &m, double v_ref, double supply)
{
    m.validate();
    if (!std::isfinite(v_ref) || v_ref < 0.0 || v_ref > supply)
    {
        throw ParameterError("refractory voltage " +
                detail::format_double(v_ref) + " V outside [0, " +
                detail::format_double(supply) + "] V");
    }
    return std::clamp(m.t_base * std::exp(-v_ref / m.v_scale), m.t_min,
            m.t_max);
}

double t_base_for(const RefractoryModel &m, double v_ref, double t_ref)
{
    return t_ref * std::exp(v_ref / m.v_scale);
}

namespace {

struct Trial
{
    double off_fraction;
    std::size_t spike_count;
};

Trial run_trial(const Waveform &stimulus, const AdcConfig &base, double t_ref)
{
    AdcConfig cfg = base;
    cfg.refractory = RefractoryModel::constant(t_ref);
    cfg.dt = std::min(base.dt, t_ref / 4.0);
    const auto trace = simulate(stimulus, cfg);
    return {trace.off_fraction(), trace.spikes.events.size()};
}

} // namespace

RefractoryCalibration calibrate_refractory(double target_off_fraction,
        const Waveform &stimulus, const AdcConfig &cfg)
{
    if (!(target_off_fraction > 0.0 && target_off_fraction < 1.0))
    {
        throw CalibrationError("target off-fraction must lie strictly in (0, 1)");
    }

    RefractoryCalibration result;
    auto evaluate = [&](double t_ref) {
        ++result.evaluations;
        return run_trial(stimulus, cfg, t_ref);
    };

    double log_lo = std::log(kCalibrationMinPeriod);
    double log_hi = std::log(kCalibrationMaxPeriod);
    const Trial at_hi = evaluate(kCalibrationMaxPeriod);
    if (at_hi.off_fraction < target_off_fraction)
    {
        throw CalibrationError("target off-fraction " +
                detail::format_double(target_off_fraction) +
                " unreachable; maximum achieved is " +
                detail::format_double(at_hi.off_fraction));
    }
    const Trial at_lo = evaluate(kCalibrationMinPeriod);
    if (at_lo.off_fraction > target_off_fraction)
    {
        throw CalibrationError("target off-fraction " +
                detail::format_double(target_off_fraction) +
                " below the minimum achievable " +
                detail::format_double(at_lo.off_fraction));
    }

    double best_t = kCalibrationMaxPeriod;
    Trial best = at_hi;
    auto consider = [&](double t, const Trial &trial) {
        if (std::abs(trial.off_fraction - target_off_fraction) <
                std::abs(best.off_fraction - target_off_fraction))
        {
            best = trial;
            best_t = t;
        }
    };
    consider(kCalibrationMinPeriod, at_lo);

    // Stop well inside the acceptance band, or when the bracket collapses.
    constexpr double internal_tolerance = kCalibrationTolerance / 5.0;
    for (int i = 0; i < 80; ++i)
    {
        const double log_mid = 0.5 * (log_lo + log_hi);
        const double t_mid = std::exp(log_mid);
        const Trial trial = evaluate(t_mid);
        consider(t_mid, trial);
        if (std::abs(trial.off_fraction - target_off_fraction) <=
                internal_tolerance)
        {
            break;
        }
        if (trial.off_fraction < target_off_fraction)
        {
            log_lo = log_mid;
        }
        else
        {
            log_hi = log_mid;
        }
        if (log_hi - log_lo < 1e-12)
        {
            break;
        }
    }

    result.t_ref = best_t;
    result.off_fraction = best.off_fraction;
    result.spike_count = best.spike_count;
    if (std::abs(best.off_fraction - target_off_fraction) >
            kCalibrationTolerance)
    {
        throw CalibrationError("calibration converged to off-fraction " +
                detail::format_double(best.off_fraction) + ", target " +
                detail::format_double(target_off_fraction));
    }
    if (best.spike_count < 20)
    {
        throw CalibrationError("stimulus produced only " +
                std::to_string(best.spike_count) +
                " spikes at the solution; need >= 20");
    }
    return result;
}

void write_refractory_points(std::ostream &out,
        const std::vector<RefractoryPoint> &points)
{
    out << "v_ref_v,t_ref_s\n";
    for (const auto &p : points)
    {
        out << detail::format_double(p.v_ref) << ','
            << detail::format_double(p.t_ref) << '\n';
    }
}

std::vector<RefractoryPoint> read_refractory_points(std::istream &in)
{
    std::vector<RefractoryPoint> points;
    detail::read_csv(in, {"v_ref_v", "t_ref_s"},
            [&](std::span<const std::string_view> f, std::size_t line) {
                RefractoryPoint p{detail::parse_double(f[0], line, "v_ref_v"),
                        detail::parse_double(f[1], line, "t_ref_s")};
                if (p.t_ref <= 0.0)
                {
                    throw FormatError("t_ref_s must be > 0", line);
                }
                points.push_back(p);
            });
    return points;
}

} // namespace nadc
