#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nadc/adc_core.hpp"
#include "nadc/analysis.hpp"
#include "nadc/errors.hpp"
#include "nadc/oracle.hpp"
#include "nadc/refractory.hpp"
#include "nadc/run_config.hpp"

namespace fs = std::filesystem;

namespace nadc::cli {

namespace {

std::string num(double x)
{
    char buf[40];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ec == std::errc() ? end : buf);
}

std::ofstream open_output(const Options &opt, const std::string &name)
{
    fs::create_directories(opt.out_dir);
    const auto path = fs::path(opt.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw Error("cannot write '" + path.string() + "'");
    }
    return out;
}

RunConfig load_config(const Options &opt)
{
    if (opt.config_path.empty())
    {
        throw ConfigurationError("--config is required");
    }
    RunConfig cfg = load_run_config(opt.config_path);
    if (opt.seed)
    {
        cfg.adc.rng_seed = *opt.seed;
    }
    return cfg;
}

// Waveform from --input, else the configured sinusoid (checked against dt).
Waveform load_stimulus(const Options &opt, const RunConfig &cfg)
{
    if (!opt.input_path.empty())
    {
        return load_waveform_file(opt.input_path);
    }
    cfg.adc.validate_for_frequency(cfg.stimulus.frequency);
    return make_stimulus(cfg.stimulus);
}

std::string one_line(std::string s)
{
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

template <typename F>
int guarded(std::ostream &err, F &&body)
{
    try
    {
        return body();
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

std::vector<double> parse_value_list(const std::string &csv)
{
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
        {
            ++used;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v))
        {
            throw FormatError("bad value '" + item + "' in list");
        }
        out.push_back(v);
    }
    return out;
}

int cmd_simulate(const Options &opt, std::ostream &out, std::ostream &err)
{
    return guarded(err, [&] {
        const RunConfig cfg = load_config(opt);
        const Waveform w = load_stimulus(opt, cfg);
        const SimulationTrace trace = simulate(w, cfg.adc);

        {
            auto f = open_output(opt, "spikes.csv");
            write_spike_events(f, trace.spikes.events);
        }

        nlohmann::ordered_json j;
        j["duration_s"] = trace.spikes.duration;
        j["initial_reference_v"] = trace.initial_reference;
        j["refractory_period_s"] = cfg.adc.refractory_period();
        j["spike_count"] = trace.spikes.events.size();
        j["fold_count"] = trace.fold_history.size();
        j["off_fraction"] = trace.off_fraction();
        auto intervals = nlohmann::ordered_json::array();
        for (const auto &g : trace.gate_off_intervals)
        {
            intervals.push_back({g.start, g.end});
        }
        j["gate_off_intervals"] = std::move(intervals);
        {
            auto f = open_output(opt, "trace.json");
            f << j.dump(2) << '\n';
        }

        out << "spikes: " << trace.spikes.events.size()
            << "  folds: " << trace.fold_history.size()
            << "  off_fraction: " << std::setprecision(6) << trace.off_fraction()
            << "  -> " << opt.out_dir << '\n';
        return 0;
    });
}

int cmd_analyze(const Options &opt, std::ostream &out, std::ostream &err)
{
    return guarded(err, [&] {
        const RunConfig cfg = load_config(opt);
        if (opt.input_path.empty())
        {
            throw Error("--input spike file is required");
        }
        std::ifstream in(opt.input_path);
        if (!in)
        {
            throw FormatError("cannot open spike file '" + opt.input_path + "'");
        }
        std::vector<SpikeEvent> events;
        try
        {
            events = read_spike_events(in);
        }
        catch (const FormatError &e)
        {
            throw FormatError(opt.input_path + ": " + e.what());
        }

        // Record length and DC anchor come from the sibling trace.json when
        // the spikes were produced by `simulate`, else from the config.
        double duration = cfg.stimulus.effective_duration();
        double v0 = cfg.stimulus.offset;
        const auto trace_path = fs::path(opt.input_path).parent_path() / "trace.json";
        if (fs::exists(trace_path))
        {
            std::ifstream tj(trace_path);
            const auto j = nlohmann::json::parse(tj);
            duration = j.at("duration_s").get<double>();
            v0 = j.at("initial_reference_v").get<double>();
        }
        if (!events.empty() && events.back().t > duration)
        {
            throw FormatError(opt.input_path + ": events extend past the record");
        }

        SimulationTrace trace;
        trace.spikes.events = std::move(events);
        trace.spikes.duration = duration;
        trace.spikes.config = cfg.adc;
        trace.initial_reference = v0;
        trace.gate_off_intervals = gate_intervals_for(trace.spikes.events,
                cfg.adc.refractory_period(), duration);

        const double f_in = opt.f_in.value_or(cfg.stimulus.frequency);
        const Analysis a = analyze_trace(trace, f_in, cfg.power, cfg.nyquist_bits,
                opt.grid_rate);
        {
            auto f = open_output(opt, "metrics.json");
            write_metrics_json(f, a.metrics, &a.power);
        }
        {
            auto f = open_output(opt, "metrics.csv");
            write_metrics_csv(f, a.metrics, &a.power);
        }
        if (!a.metrics.sndr_db)
        {
            err << "error: SNDR unavailable: " << a.metrics.sndr_error << '\n';
            return 1;
        }
        out << std::fixed << std::setprecision(2) << "SNDR " << *a.metrics.sndr_db
            << " dB  ENOB " << *a.metrics.enob_bits << " bit  power "
            << a.power.total * 1e9 << " nW  FoM "
            << a.metrics.fom_j_per_conv.value_or(0.0) * 1e15 << " fJ/conv\n";
        return 0;
    });
}

namespace {

struct SweepRow
{
    double value = 0.0;
    std::optional<Analysis> result;
    std::string error;
};

SweepRow sweep_point(const RunConfig &base, const std::string &param, double value)
{
    SweepRow row;
    row.value = value;
    try
    {
        RunConfig cfg = base;
        if (param == "frequency")
        {
            cfg.stimulus.frequency = value;
        }
        else
        {
            cfg.adc.v_ref = value;
        }
        cfg.adc.validate_for_frequency(cfg.stimulus.frequency);
        const auto trace = simulate(make_stimulus(cfg.stimulus), cfg.adc);
        row.result = analyze_trace(trace, cfg.stimulus.frequency, cfg.power,
                cfg.nyquist_bits);
    }
    catch (const std::exception &e)
    {
        row.error = e.what();
    }
    return row;
}

} // namespace

int cmd_sweep(const Options &opt, std::ostream &out, std::ostream &err)
{
    return guarded(err, [&] {
        if (opt.param != "frequency" && opt.param != "v_ref")
        {
            throw Error("--param must be 'frequency' or 'v_ref'");
        }
        if (opt.values.size() < 2)
        {
            throw Error("sweep needs at least 2 --values");
        }
        const RunConfig cfg = load_config(opt);

        // Points are independent; results are written in input order.
        const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
        std::vector<SweepRow> rows(opt.values.size());
        for (std::size_t start = 0; start < rows.size(); start += workers)
        {
            std::vector<std::future<SweepRow>> batch;
            const auto end = std::min(rows.size(), start + workers);
            for (std::size_t i = start; i < end; ++i)
            {
                batch.push_back(std::async(std::launch::async, sweep_point,
                        std::cref(cfg), std::cref(opt.param), opt.values[i]));
            }
            for (std::size_t i = start; i < end; ++i)
            {
                rows[i] = batch[i - start].get();
            }
        }

        auto f = open_output(opt, "sweep.csv");
        f << (opt.param == "frequency" ? "frequency_hz" : "v_ref_v")
          << ",sndr_db,enob_bits,spike_count,total_power_w,off_fraction,status\n";
        std::size_t failures = 0;
        for (const auto &row : rows)
        {
            f << num(row.value) << ',';
            if (!row.result)
            {
                ++failures;
                f << ",,,,,error: " << one_line(row.error) << '\n';
                continue;
            }
            const auto &m = row.result->metrics;
            f << (m.sndr_db ? num(*m.sndr_db) : "") << ','
              << (m.enob_bits ? num(*m.enob_bits) : "") << ',' << m.spike_count
              << ',' << num(row.result->power.total) << ','
              << num(row.result->power.off_fraction) << ','
              << (m.sndr_db ? "ok" : "ok (no sndr: " + one_line(m.sndr_error) + ")")
              << '\n';
        }
        out << rows.size() - failures << "/" << rows.size()
            << " sweep points ok -> " << (fs::path(opt.out_dir) / "sweep.csv").string()
            << '\n';
        return failures == rows.size() ? 1 : 0;
    });
}

namespace {

struct Anchor
{
    std::string quantity;
    double target = 0.0;
    double frequency = 0.0;
    double amplitude = 0.0;
    double v_ref = 0.0;
    bool gating = false;
};

std::vector<Anchor> read_anchors(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw FormatError("cannot open anchors file '" + path + "'");
    }
    const std::vector<std::string> header = {"quantity", "target",
            "frequency_hz", "amplitude_v", "v_ref_v", "gating"};
    std::vector<Anchor> anchors;
    std::string line;
    std::size_t n = 0;
    bool have_header = false;
    while (std::getline(in, line))
    {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
        {
            continue;
        }
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
        {
            fields.push_back(field);
        }
        if (!have_header)
        {
            if (fields != header)
            {
                throw FormatError(path + ": expected header "
                        "'quantity,target,frequency_hz,amplitude_v,v_ref_v,gating'",
                        n);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != header.size())
        {
            throw FormatError(path + ": expected 6 fields", n);
        }
        try
        {
            const auto values = parse_value_list(fields[1] + "," + fields[2] + "," +
                    fields[3] + "," + fields[4] + "," + fields[5]);
            anchors.push_back({fields[0], values[0], values[1], values[2],
                    values[3], values[4] != 0.0});
        }
        catch (const FormatError &e)
        {
            throw FormatError(path + ": " + e.what(), n);
        }
        if (anchors.back().quantity != "off_fraction" &&
                anchors.back().quantity != "total_power_w")
        {
            throw FormatError(path + ": unknown quantity '" + fields[0] + "'", n);
        }
    }
    if (anchors.empty())
    {
        throw FormatError(path + ": no anchors");
    }
    return anchors;
}

StimulusSpec stimulus_for(const RunConfig &cfg, const Anchor &a)
{
    StimulusSpec s = cfg.stimulus;
    s.frequency = a.frequency;
    s.amplitude = a.amplitude;
    s.duration = 0.0;
    s.sample_rate = 0.0;
    return s;
}

} // namespace

int cmd_calibrate(const Options &opt, std::ostream &out, std::ostream &err)
{
    return guarded(err, [&] {
        const RunConfig base = load_config(opt);
        if (opt.anchors_path.empty())
        {
            throw Error("--anchors is required");
        }
        auto anchors = read_anchors(opt.anchors_path);
        // Refractory first: the power anchor is simulated with the
        // calibrated refractory model.
        std::stable_sort(anchors.begin(), anchors.end(),
                [](const Anchor &a, const Anchor &b) {
                    return a.quantity == "off_fraction" && b.quantity != "off_fraction";
                });
        if (std::count_if(anchors.begin(), anchors.end(),
                    [](const Anchor &a) { return a.quantity == "off_fraction"; }) > 1 ||
                std::count_if(anchors.begin(), anchors.end(), [](const Anchor &a) {
                    return a.quantity == "total_power_w";
                }) > 1)
        {
            throw Error("at most one anchor per quantity (single-point calibration)");
        }

        RunConfig cfg = base;
        std::vector<RefractoryPoint> points;
        std::ostringstream report;
        report << "quantity,target,achieved,parameter,value,status\n";
        bool ok = true;

        for (const auto &a : anchors)
        {
            try
            {
                RunConfig run = cfg;
                run.adc.v_ref = a.v_ref;
                run.adc.gating_enabled = a.gating;
                run.stimulus = stimulus_for(cfg, a);
                run.adc.validate_for_frequency(a.frequency);
                const Waveform w = make_stimulus(run.stimulus);

                if (a.quantity == "off_fraction")
                {
                    const auto cal = calibrate_refractory(a.target, w, run.adc);
                    auto &model = cfg.adc.refractory;
                    if (cal.t_ref < model.t_min || cal.t_ref > model.t_max)
                    {
                        throw CalibrationError("calibrated period " + num(cal.t_ref) +
                                " s outside the model clamps");
                    }
                    model.t_base = t_base_for(model, a.v_ref, cal.t_ref);
                    run.adc.refractory = model;
                    const auto trace = simulate(w, run.adc);
                    points.push_back({a.v_ref, cal.t_ref});
                    report << a.quantity << ',' << num(a.target) << ','
                           << num(trace.off_fraction()) << ",refr_t_base_s,"
                           << num(model.t_base) << ",ok\n";
                }
                else
                {
                    const auto trace = simulate(w, run.adc);
                    const double e = calibrate_dynamic_energy(a.target, trace,
                            cfg.power.static_baseline, cfg.power.overhead, a.gating);
                    cfg.power.energy_per_event = e;
                    const auto achieved = power_report(trace, cfg.power, a.gating);
                    report << a.quantity << ',' << num(a.target) << ','
                           << num(achieved.total) << ",energy_per_event_j,"
                           << num(e) << ",ok\n";
                }
            }
            catch (const std::exception &e)
            {
                ok = false;
                report << a.quantity << ',' << num(a.target) << ",,,,error: "
                       << one_line(e.what()) << '\n';
            }
        }

        {
            auto f = open_output(opt, "calibrated.cfg");
            f << "# calibrated from " << fs::path(opt.anchors_path).filename().string()
              << '\n';
            write_run_config(f, cfg);
        }
        {
            auto f = open_output(opt, "calibration_report.csv");
            f << report.str();
        }
        {
            auto f = open_output(opt, "refractory_calibration.csv");
            write_refractory_points(f, points);
        }
        out << report.str();
        return ok ? 0 : 1;
    });
}

int cmd_verify(const Options &opt, std::ostream &out, std::ostream &err)
{
    return guarded(err, [&] {
        const RunConfig cfg = load_config(opt);
        if (cfg.adc.noise_sigma > 0.0)
        {
            throw UnsupportedError("verify needs a noise-free configuration");
        }
        if (opt.fine_factor < 10)
        {
            throw Error("--fine-factor must be >= 10");
        }
        cfg.adc.validate_for_frequency(cfg.stimulus.frequency);

        struct Case
        {
            std::string name;
            Waveform w;
        };
        const double lsb = cfg.adc.lsb();
        // Ramp crossing one LSB per millisecond.
        std::vector<double> ramp(5501);
        for (std::size_t k = 0; k < ramp.size(); ++k)
        {
            ramp[k] = lsb * static_cast<double>(k) / 1000.0;
        }
        std::vector<Case> cases;
        cases.push_back({"sine", make_stimulus(cfg.stimulus)});
        cases.push_back({"ramp", Waveform(1e6, std::move(ramp))});
        cases.push_back({"constant", Waveform(1e3, std::vector<double>(6, 0.3))});

        const double dt = cfg.adc.dt;
        const double dt_fine = dt / opt.fine_factor;
        auto f = open_output(opt, "verify.csv");
        f << "stimulus,count_simulate,count_dense,abs_delta_count,max_abs_delta_t_s,"
             "bound_s,status\n";
        out << std::left << std::setw(10) << "stimulus" << std::setw(10) << "count"
            << std::setw(10) << "dense" << std::setw(14) << "max|dt| s"
            << "status\n";
        bool ok = true;
        for (const auto &c : cases)
        {
            const auto a = simulate(c.w, cfg.adc);
            const auto b = simulate_dense(c.w, cfg.adc, dt_fine);
            const auto &ea = a.spikes.events;
            const auto &eb = b.spikes.events;
            const auto dcount = ea.size() > eb.size() ? ea.size() - eb.size()
                                                      : eb.size() - ea.size();
            double max_dt = 0.0;
            bool polarity_ok = true;
            for (std::size_t i = 0; i < std::min(ea.size(), eb.size()); ++i)
            {
                max_dt = std::max(max_dt, std::abs(ea[i].t - eb[i].t));
                polarity_ok = polarity_ok && ea[i].polarity == eb[i].polarity;
            }
            const bool pass = dcount == 0 && max_dt <= dt && polarity_ok;
            ok = ok && pass;
            f << c.name << ',' << ea.size() << ',' << eb.size() << ',' << dcount << ','
              << num(max_dt) << ',' << num(dt) << ',' << (pass ? "ok" : "violation")
              << '\n';
            out << std::setw(10) << c.name << std::setw(10) << ea.size()
                << std::setw(10) << eb.size() << std::setw(14) << std::setprecision(4)
                << max_dt << (pass ? "ok" : "VIOLATION") << '\n';
        }
        return ok ? 0 : 1;
    });
}

} // namespace nadc::cli
