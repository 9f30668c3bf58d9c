#pragma once

// Survival conditions for the flight strategy and the minimum code distance
// search built on them.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crflee/model.hpp"

namespace crflee {

enum class StrikeKind { Halfway, AtHole };

/// How the halfway strike offset x0 is measured.
enum class HalfwayOffset {
    Lattice,   // x0 = d/2 mm, independent of the lattice spacing
    Physical,  // x0 = d*l/2 mm, the physical half-separation of the holes
};

std::string_view to_string(StrikeKind k);
std::string_view to_string(HalfwayOffset o);
StrikeKind parse_strike_kind(std::string_view s);
HalfwayOffset parse_halfway_offset(std::string_view s);

struct StrikeScenario {
    StrikeKind kind = StrikeKind::Halfway;
    HalfwayOffset offset = HalfwayOffset::Lattice;

    /// Distance from the epicenter to the nearest hole at t = 0.
    double x0_mm(int d, double l_mm) const;
};

struct FeasibilityVerdict {
    bool cond1 = false;
    bool cond2 = false;
    bool feasible() const { return cond1 && cond2; }
};

/// The qubit is not entirely compromised before the move starts:
/// v_p t_c (delta+1) < (x0 - v_p t_c (delta+1)) + l (d-1).
bool check_condition1(const PhysicalParams& p, const StrikeScenario& s);

/// The holes end up far enough away once the front reaches r_max:
/// r_max < (x0 - v_p t_c (delta+1)) + move_displacement + l (d-1).
bool check_condition2(const PhysicalParams& p, const StrikeScenario& s);

FeasibilityVerdict evaluate(const PhysicalParams& p, const StrikeScenario& s);

inline constexpr int kDefaultMaxDistance = 500;

/// Smallest d in [2, d_max] satisfying both conditions; p.d is ignored.
/// Returns nullopt (INFEASIBLE) when no such d exists.
std::optional<int> min_code_distance(const PhysicalParams& p, const StrikeScenario& s,
                                     int d_max = kDefaultMaxDistance);

enum class SweepParameter { L, RMax, Delta };

std::string_view to_string(SweepParameter p);  // column name, e.g. "l_mm"
SweepParameter parse_sweep_parameter(std::string_view s);

struct SweepRow {
    double value = 0.0;
    StrikeKind scenario = StrikeKind::Halfway;
    std::optional<int> min_d;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepResult {
    SweepParameter parameter = SweepParameter::L;
    std::vector<SweepRow> rows;  // ascending by value, one row per (value, scenario)

    friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

struct SweepOptions {
    std::vector<StrikeKind> scenarios{StrikeKind::Halfway, StrikeKind::AtHole};
    HalfwayOffset offset = HalfwayOffset::Lattice;
    int d_max = kDefaultMaxDistance;
    unsigned threads = 1;
};

/// Applies one swept value to a copy of the fixed parameters.
/// Throws std::invalid_argument for non-positive values, and for non-integral
/// detection latencies.
PhysicalParams with_swept_value(const PhysicalParams& fixed, SweepParameter param, double value);

/// One min_code_distance row per (value, scenario). Values are sorted
/// ascending; the output order never depends on the thread count.
SweepResult sweep(SweepParameter param, std::vector<double> values, const PhysicalParams& fixed,
                  const SweepOptions& options = {});

/// CSV with header `param,value,scenario,min_d,feasible`.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
SweepResult read_sweep_csv(std::istream& in);

}  // namespace crflee
