#pragma once

// Placement of many logical qubits plus the open channels they flee along.
//
// The canonical unit cell holds three vertical qubits packed side by side
// (slot columns), a one-hole-wide vertical channel to their right and a
// horizontal channel below them. Cells repeat top-to-bottom and
// left-to-right; the outer border carries channels as well.
//
// Slot indices: x counts qubit columns (3 per cell), y alternates between a
// qubit row (even) and the channel row beneath it (odd).

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crflee/model.hpp"

namespace crflee {

enum class Axis { X, Y };

/// Axis-aligned rectangle in lattice units.
struct Rect {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

    /// Interiors intersect; shared edges do not count.
    bool overlaps(const Rect& o) const {
        return x_min < o.x_max && o.x_min < x_max && y_min < o.y_max && o.y_min < y_max;
    }
    bool contains(const Rect& o) const {
        return o.x_min >= x_min && o.x_max <= x_max && o.y_min >= y_min && o.y_max <= y_max;
    }
    Rect hull(const Rect& o) const;
};

Rect footprint(const Hole& h);

/// Bounding box of both hole footprints.
Rect footprint(const LogicalQubit& q);

struct SlotIndex {
    int x = 0;
    int y = 0;
    friend bool operator==(const SlotIndex&, const SlotIndex&) = default;
};

/// A straight strip kept free of holes. axis is the direction of travel:
/// X channels run horizontally and `center` is their y coordinate.
struct Channel {
    Axis axis = Axis::X;
    double center = 0;
    double half_width = 0;
};

struct Mapping {
    int rows = 0;  // unit cells; 0 for hand-built mappings
    int cols = 0;
    int d = 2;
    double l_mm = 1.0;
    Rect bounds;  // hole footprints must stay inside
    std::vector<LogicalQubit> qubits;
    std::vector<SlotIndex> slots;  // parallel to qubits
    std::vector<Channel> channels;
};

/// Lattice pitch of one slot, ceil(d/4): a hole footprint fits in one pitch.
std::int64_t slot_pitch(int d);

/// Tiles rows x cols unit cells using p.d and p.l_mm.
/// Throws std::invalid_argument for zero dimensions.
Mapping build_mapping(int rows, int cols, const PhysicalParams& p);

/// Mapping holding a single qubit inside the given bounds, no channels.
Mapping single_qubit_mapping(const LogicalQubit& q, const Rect& bounds, double l_mm);

std::optional<std::size_t> find_slot(const Mapping& m, SlotIndex s);

/// Physical position (mm) of a slot center. Qubit slots resolve to the
/// midpoint between the holes, channel slots to the channel cell beneath.
/// Only defined for canonical mappings.
std::pair<double, double> slot_position_mm(const Mapping& m, SlotIndex s);

/// Bounding box of the canonical unit cell (row, col), channels included.
Rect unit_cell_rect(const Mapping& m, int row, int col);

/// Frame of width_cells x height_cells squares of side d/4 centered on qubit
/// q, long side along the qubit axis. The default is the 10 x 5 frame in
/// which one qubit's two holes fill 2 of 50 cells.
Rect hole_frame(const Mapping& m, std::size_t qubit, double width_cells = 10,
                double height_cells = 5);

/// Empty when the layout is consistent; otherwise one message per problem
/// (overlapping holes, holes outside bounds, channels crossing holes).
std::vector<std::string> check_mapping(const Mapping& m);

void write_mapping_json(std::ostream& out, const Mapping& m);

}  // namespace crflee
