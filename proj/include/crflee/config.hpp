#pragma once

// Experiment configuration: a flat `key = value` text file. Every physical
// key carries its unit in the name. Lines starting with '#' are comments.
// Unknown and repeated keys are errors.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crflee/feasibility.hpp"
#include "crflee/model.hpp"
#include "crflee/reliability.hpp"
#include "crflee/simulator.hpp"

namespace crflee {

/// Malformed configuration text: bad syntax, unknown key, unparsable value.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Well-formed values that are out of range for the requested run.
class RangeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    PhysicalParams physical;

    // solver and sweeps
    int d_max = kDefaultMaxDistance;
    HalfwayOffset halfway_offset = HalfwayOffset::Lattice;
    std::vector<StrikeKind> scenarios{StrikeKind::Halfway, StrikeKind::AtHole};
    std::vector<double> sweep_values;  // empty: use start/stop/step or the subcommand default
    std::optional<double> sweep_start;
    std::optional<double> sweep_stop;
    std::optional<double> sweep_step;

    // reliability
    double lambda_per_s = 0.1;
    double tau_min_s = 1e-4;
    double tau_max_s = 1.0;
    int tau_points = 41;
    std::uint64_t n_trials = 10000;  // 0 skips the Monte Carlo columns
    std::uint64_t seed = 1;
    double frame_width_cells = 10;
    double frame_height_cells = 5;
    std::optional<double> p_hole_hit;  // default: derived from the frame
    McMode mc_mode = McMode::Paper;

    // simulate
    int mapping_rows = 1;
    int mapping_cols = 1;
    std::optional<double> epicenter_x_mm;  // default: middle qubit of cell (0, 0)
    std::optional<double> epicenter_y_mm;
    Cycle event_t0_cycles = 0;
    DestructionRule destruction_rule = DestructionRule::Full;
    TransitModel transit_model = TransitModel::OriginAnchored;

    // replicate-paper
    std::vector<double> replicate_l_mm{1, 5, 10};
    int replicate_delta_min_cycles = 1;
    int replicate_delta_max_cycles = 25;
    double replicate_displacement_min_mm = 1;
    double replicate_displacement_max_mm = 1e6;

    bool emit_gnuplot = false;
};

/// Throws ConfigError with the offending line number.
ExperimentConfig parse_config(std::istream& in);

/// Throws IoError when the file cannot be read, ConfigError otherwise.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every key with its current value, one per line, in a fixed order. Parsing
/// the result gives back an identical configuration.
std::string format_config(const ExperimentConfig& c);

/// Names of all recognised keys, in output order.
std::vector<std::string> config_keys();

}  // namespace crflee
