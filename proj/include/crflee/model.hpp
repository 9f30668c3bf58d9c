#pragma once

// Geometry and phonon primitives shared by the solver, planner and simulator.
//
// Lengths are in mm unless a name says "lattice units"; time is counted in
// lattice cycles (one cycle = t_c microseconds).

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace crflee {

using Cycle = std::int64_t;

struct PhysicalParams {
    double l_mm = 1.0;                  // physical lattice spacing
    int d = 2;                          // code distance
    double v_p_mm_per_us = 2.5;         // phonon speed
    int delta_cycles = 1;               // detection latency
    double t_c_us = 1.0;                // lattice cycle time
    double r_max_mm = 63.0;             // maximum phonon radius
    double move_displacement_mm = 1.0;  // distance travelled by a fleeing qubit
    // Cycles the front stays at r_max before dissipating. Infinite means the
    // disc persists for the whole simulated horizon.
    double dissipation_hold_cycles = std::numeric_limits<double>::infinity();

    /// Front growth per cycle, in mm.
    double growth_per_cycle_mm() const { return v_p_mm_per_us * t_c_us; }

    /// Front radius at the moment the flight begins (t = delta + 1), uncapped.
    double radius_at_move_start_mm() const {
        return growth_per_cycle_mm() * (delta_cycles + 1);
    }

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

enum class Orientation { Horizontal, Vertical };

std::string_view to_string(Orientation o);

struct Hole {
    LatticePoint center;
    double radius = 0.0;  // half-width of the square footprint, lattice units
};

/// Half-width of a hole footprint for code distance d (a square of side d/4).
double hole_half_width(int d);

/// Two holes separated by d lattice units along the orientation axis.
/// holes[0] is always the one with the smaller coordinate on that axis.
struct LogicalQubit {
    std::array<Hole, 2> holes{};
    Orientation orientation = Orientation::Horizontal;
    int code_distance = 2;

    static LogicalQubit make(LatticePoint first_hole, Orientation o, int d);

    /// Position of string qubit k, for k in [1, d-1].
    LatticePoint string_site(int k) const;

    LogicalQubit translated(std::int64_t dx, std::int64_t dy) const;
};

struct CreEvent {
    double x_mm = 0.0;
    double y_mm = 0.0;
    Cycle t0 = 0;
};

struct Disc {
    double cx_mm = 0.0;
    double cy_mm = 0.0;
    double r_mm = 0.0;
};

struct PhononFront {
    CreEvent event;
    PhysicalParams params;

    /// Cycles after t0 until the radius first reaches r_max.
    double growth_cycles() const;

    /// Cycle count after t0 at which the front is gone (may be infinite).
    double dissipation_cycles() const;

    bool active_at(Cycle t) const;

    Disc disc_at(Cycle t) const;
};

/// min(v_p * t_c * (t - t0), r_max) while the front is active, 0 afterwards.
/// Throws std::invalid_argument when t < t0.
double phonon_radius(const PhononFront& front, Cycle t);

enum class DestructionRule {
    Full,        // string fully compromised OR a hole swallowed
    StringOnly,  // only the d-1 string sites count
};

std::string_view to_string(DestructionRule r);

/// Number of string sites strictly inside the disc.
int compromised_count(const Disc& disc, const LogicalQubit& q, double l_mm);

/// Number of string sites strictly inside at least one of the discs.
int compromised_count(std::span<const Disc> discs, const LogicalQubit& q, double l_mm);

int compromised_count(const PhononFront& front, const LogicalQubit& q, Cycle t);

/// True when every corner of the hole footprint lies strictly inside the disc.
bool hole_swallowed(const Disc& disc, const Hole& hole, double l_mm);

bool is_destroyed(std::span<const Disc> discs, const LogicalQubit& q, double l_mm,
                  DestructionRule rule = DestructionRule::Full);

bool is_destroyed(const PhononFront& front, const LogicalQubit& q, Cycle t,
                  DestructionRule rule = DestructionRule::Full);

/// Distance in mm from a point to the nearer hole center of q.
double nearest_hole_distance_mm(const LogicalQubit& q, double x_mm, double y_mm, double l_mm);

}  // namespace crflee
