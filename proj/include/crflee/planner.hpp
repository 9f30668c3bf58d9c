#pragma once

// Move planning after a strike is detected: which qubits must flee, where
// they go, and in which sequential batch each hole moves.

#include <optional>
#include <stdexcept>
#include <vector>

#include "crflee/mapping.hpp"
#include "crflee/model.hpp"

namespace crflee {

/// Fixed-latency detection: the strike is seen delta cycles after it lands.
Cycle detect(const CreEvent& event, const PhysicalParams& p);

struct MoveStep {
    int qubit = 0;
    int hole = 0;
    Axis axis = Axis::X;
    LatticePoint target;
    Cycle start = 0;
    Cycle duration = 0;
    int batch = 0;  // sequential move batch, 0-based

    Cycle end() const { return start + duration; }
};

struct MovePlan {
    Cycle begin = 0;         // first cycle of batch 0 (detection + 1)
    Cycle batch_cycles = 0;  // one hole move takes this long
    std::vector<MoveStep> steps;
    std::vector<int> displaced;  // qubits moved only to clear a path

    bool empty() const { return steps.empty(); }

    /// Sequential batches from the start of the plan through the completion
    /// of this qubit's move, waiting included. Zero if the qubit stays put.
    int steps_for(int qubit) const;
    int max_steps() const;

    std::vector<int> moved_qubits() const;

    /// Cycle of the qubit's first hole move, if it moves.
    std::optional<Cycle> start_of(int qubit) const;
    /// Cycle at which the qubit's last hole reaches its target.
    std::optional<Cycle> completion_of(int qubit) const;
    /// Rigid translation (lattice units) applied by the plan to the qubit.
    LatticePoint offset_of(const Mapping& m, int qubit) const;
};

class UnescapableError : public std::runtime_error {
  public:
    UnescapableError(std::vector<int> qubits);
    const std::vector<int>& qubits() const { return qubits_; }

  private:
    std::vector<int> qubits_;
};

struct PlannerOptions {
    DestructionRule rule = DestructionRule::Full;
    int max_batches = 8;
};

/// Qubits whose destruction predicate fires against a full-size front
/// (radius r_max) at their current position.
std::vector<int> threatened_qubits(const Mapping& m, const CreEvent& event,
                                   const PhysicalParams& p, DestructionRule rule);

/// Minimum distance (mm) from the epicenter to the nearer hole that a qubit
/// must reach so the front, once at r_max, leaves it standing:
/// r_max < (x_target - v_p t_c (delta+1)) + l (d-1).
double safe_hole_distance_mm(const PhysicalParams& p, int d);

/// Plans the flight of every threatened qubit. Moves start at detection + 1,
/// one batch per hole move of length d cycles. A move perpendicular to the
/// qubit axis shifts both holes together in one batch; a move along the axis
/// needs two batches because the holes go one after the other. Qubits
/// nearest the epicenter choose first; a blocked qubit waits or has the
/// qubits in its way displaced. Throws UnescapableError when some qubit
/// cannot reach a safe position inside the mapping bounds.
MovePlan plan_flight(const Mapping& m, const CreEvent& event, const PhysicalParams& p,
                     const PlannerOptions& options = {});

}  // namespace crflee
