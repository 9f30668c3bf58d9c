#pragma once

// Failure probability of a fleeing logical qubit: the strike lands inside a
// hole, or too many strikes arrive while the qubit is still moving.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "crflee/mapping.hpp"
#include "crflee/model.hpp"
#include "crflee/planner.hpp"
#include "crflee/simulator.hpp"

namespace crflee {

struct ReliabilityParams {
    double lambda_per_s = 0.1;  // chip-wide strike rate
    double tau_s = 1.0;         // time the qubit needs to reach safety
    int d = 2;
    double p_hole_hit = 2.0 / 50.0;

    void validate() const;
};

/// Chance that a strike uniformly placed in a frame of width x height cells
/// (each cell the size of one hole) lands in one of `holes` hole cells.
double p_hole_hit_frame(double width_cells = 10, double height_cells = 5, int holes = 2);

/// P(N <= d-2) for N ~ Poisson(lambda * tau).
double p_few_hits(int d, double lambda_per_s, double tau_s);

/// 1 - (1 - p_hole_hit) * P(N <= d-2).
double failure_probability(const ReliabilityParams& r);

enum class McMode {
    Paper,      // loss iff the strike is inside a hole or N >= d-1
    Simulator,  // plan and replay the flight; extra strikes land during the move
};

std::string_view to_string(McMode m);
McMode parse_mc_mode(std::string_view s);

struct McOptions {
    McMode mode = McMode::Paper;
    std::size_t qubit = 0;  // the qubit whose frame is sampled and whose loss counts
    double frame_width_cells = 10;
    double frame_height_cells = 5;
    std::optional<Rect> epicenter_region_mm;  // overrides the frame
    SimOptions sim;
    PlannerOptions planner;
    unsigned threads = 1;
};

struct McEstimate {
    double estimate = 0.0;
    double half_width = 0.0;  // 95% normal-approximation binomial interval
    std::uint64_t failures = 0;
    std::uint64_t trials = 0;
};

/// Each trial draws from its own generator seeded by (seed, trial index), so
/// the estimate does not depend on the thread count.
/// Throws std::invalid_argument when n_trials is zero.
McEstimate monte_carlo_failure(const Mapping& m, const PhysicalParams& p, const ReliabilityParams& r,
                               std::uint64_t n_trials, std::uint64_t seed,
                               const McOptions& options = {});

struct ReliabilityRow {
    double tau_s = 0.0;
    double analytic = 0.0;
    std::optional<McEstimate> mc;
};

/// CSV with header `tau,analytic_failure,mc_failure,mc_halfwidth`. The Monte
/// Carlo columns are NA when no estimate was run.
void write_reliability_csv(std::ostream& out, const std::vector<ReliabilityRow>& rows);

/// Per-trial seed mixing, exposed for reuse by other seeded drivers.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace crflee
