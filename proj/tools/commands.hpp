#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nadc::cli {

struct Options
{
    std::string config_path;
    std::string input_path;   // waveform (simulate) or spike file (analyze)
    std::string anchors_path; // calibrate
    std::string out_dir = ".";
    std::string param;        // sweep: frequency | v_ref
    std::vector<double> values;
    std::optional<double> f_in;      // analyze
    std::optional<double> grid_rate; // analyze
    std::optional<std::uint64_t> seed;
    int fine_factor = 10;            // verify: dt_fine = dt / fine_factor
};

// Each command writes its artifacts under out_dir, prints a short summary
// to `out`, diagnostics to `err`, and returns the process exit code.
int cmd_simulate(const Options &opt, std::ostream &out, std::ostream &err);
int cmd_analyze(const Options &opt, std::ostream &out, std::ostream &err);
int cmd_sweep(const Options &opt, std::ostream &out, std::ostream &err);
int cmd_calibrate(const Options &opt, std::ostream &out, std::ostream &err);
int cmd_verify(const Options &opt, std::ostream &out, std::ostream &err);

// Parses "a,b,c" into numbers; throws nadc::FormatError.
std::vector<double> parse_value_list(const std::string &csv);

} // namespace nadc::cli
