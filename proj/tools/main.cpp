#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char **argv)
{
    using nadc::cli::Options;

    CLI::App app{"Neuron-ADC behavioral simulator"};
    app.require_subcommand(1);
    Options opt;
    std::string values;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--config", opt.config_path, "run configuration (key = value)")
                ->required()
                ->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "override rng_seed");
    };

    auto *simulate = app.add_subcommand("simulate", "simulate and write spikes.csv, trace.json");
    common(simulate);
    simulate->add_option("--input", opt.input_path, "waveform file (t_s,v); default: configured sine")
            ->check(CLI::ExistingFile);

    auto *analyze = app.add_subcommand("analyze", "reconstruct spikes and write metrics");
    common(analyze);
    analyze->add_option("--input", opt.input_path, "spike file (t_s,polarity)")->required();
    analyze->add_option("--fin", opt.f_in, "input frequency in Hz");
    analyze->add_option("--grid-rate", opt.grid_rate, "reconstruction grid rate in Hz");

    auto *sweep = app.add_subcommand("sweep", "sweep input frequency or refractory voltage");
    common(sweep);
    sweep->add_option("--param", opt.param, "frequency | v_ref")->required();
    sweep->add_option("--values", values, "comma separated values")->required();

    auto *calibrate = app.add_subcommand("calibrate", "fit refractory period and event energy");
    common(calibrate);
    calibrate->add_option("--anchors", opt.anchors_path, "anchors file")
            ->required()
            ->check(CLI::ExistingFile);

    auto *verify = app.add_subcommand("verify", "compare simulate against the dense oracle");
    common(verify);
    verify->add_option("--fine-factor", opt.fine_factor, "dt / dt_fine (>= 10)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (!values.empty())
        {
            opt.values = nadc::cli::parse_value_list(values);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    if (simulate->parsed())
    {
        return nadc::cli::cmd_simulate(opt, std::cout, std::cerr);
    }
    if (analyze->parsed())
    {
        return nadc::cli::cmd_analyze(opt, std::cout, std::cerr);
    }
    if (sweep->parsed())
    {
        return nadc::cli::cmd_sweep(opt, std::cout, std::cerr);
    }
    if (calibrate->parsed())
    {
        return nadc::cli::cmd_calibrate(opt, std::cout, std::cerr);
    }
    return nadc::cli::cmd_verify(opt, std::cout, std::cerr);
}
