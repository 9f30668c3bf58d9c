#pragma once

// Subcommand drivers behind the command-line tool. Each one writes its CSV
// artifacts, a manifest and the fully resolved configuration into an output
// directory.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "crflee/config.hpp"

namespace crflee {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitRange = 3,
    kExitUnescapable = 4,
    kExitIo = 5,
};

const std::vector<std::string>& subcommand_names();

/// n points from lo to hi, evenly spaced in log10. n = 1 gives lo.
std::vector<double> log_spaced(double lo, double hi, int n);

/// Values swept by a sweep-* subcommand: sweep_values if given, else
/// sweep_start..sweep_stop by sweep_step, else the default range for the
/// parameter. Throws RangeError for an empty or ill-formed range.
std::vector<double> resolve_sweep_values(const ExperimentConfig& c, SweepParameter param);

/// Fills in every value the run depends on (epicenter, hole-hit
/// probability, sweep range) so the written config replays the same run.
ExperimentConfig resolve(const std::string& subcommand, const ExperimentConfig& c);

/// Runs one subcommand and returns the file names written to out_dir.
/// Throws ConfigError, RangeError, UnescapableError or IoError; the caller
/// maps them to exit codes.
std::vector<std::string> run_subcommand(const std::string& subcommand, const ExperimentConfig& config,
                                        const std::filesystem::path& out_dir, unsigned threads = 1);

}  // namespace crflee
