#pragma once

// Cycle-level replay of a strike: the front grows, the plan moves holes, and
// every qubit is checked against the destruction predicate until the
// horizon.

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crflee/feasibility.hpp"
#include "crflee/mapping.hpp"
#include "crflee/model.hpp"
#include "crflee/planner.hpp"

namespace crflee {

/// Where a qubit counts as being while its holes are in flight.
enum class TransitModel {
    OriginAnchored,  // at the origin until its last hole lands
    Immediate,       // at the target from its first move onwards
};

std::string_view to_string(TransitModel t);
TransitModel parse_transit_model(std::string_view s);
DestructionRule parse_destruction_rule(std::string_view s);

struct SimOptions {
    DestructionRule rule = DestructionRule::Full;
    TransitModel transit = TransitModel::OriginAnchored;
};

struct TimelineRecord {
    Cycle cycle = 0;
    std::string kind;  // strike, detect, move_start, move_complete, destroyed, dissipated, survived
    int qubit = -1;    // -1 for events that concern the whole chip
    std::string detail;

    friend bool operator==(const TimelineRecord&, const TimelineRecord&) = default;
};

struct SimOutcome {
    std::vector<bool> survived;
    std::vector<std::optional<Cycle>> destroyed_at;
    std::vector<TimelineRecord> timeline;
    Cycle horizon = 0;

    bool all_survived() const;
};

/// Position of qubit q at cycle t under the plan.
LogicalQubit qubit_at(const Mapping& m, const MovePlan& plan, int q, Cycle t, TransitModel transit);

/// Lattice cells held by every hole at cycle t: the swept strip for a hole
/// that is moving, its footprint otherwise. Indexed [qubit][hole].
std::vector<std::array<Rect, 2>> hole_states_at(const Mapping& m, const MovePlan& plan, Cycle t);

/// Runs until every front has finished growing, the plan has completed and,
/// for fronts that dissipate, one cycle past dissipation.
SimOutcome simulate(const Mapping& m, std::span<const CreEvent> events, const PhysicalParams& p,
                    const MovePlan& plan, const SimOptions& options = {});

SimOutcome simulate(const Mapping& m, const CreEvent& event, const PhysicalParams& p,
                    const MovePlan& plan, const SimOptions& options = {});

/// CSV with header `cycle,event_kind,qubit_id,detail`; qubit_id is empty for
/// chip-wide events.
void write_event_log(std::ostream& out, const SimOutcome& outcome);
std::vector<TimelineRecord> read_event_log(std::istream& in);

/// One horizontal qubit with hole 0 at the lattice origin and the epicenter
/// x0 mm to its left, hemmed in so that the only way out is along +x. This is
/// the geometry the survival conditions describe.
struct RadialScenario {
    Mapping mapping;
    CreEvent event;
};

RadialScenario radial_flight_scenario(const PhysicalParams& p, const StrikeScenario& s);

}  // namespace crflee
