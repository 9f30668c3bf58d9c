#include "crflee/mapping.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace crflee {

Rect Rect::hull(const Rect& o) const {
    return Rect{std::min(x_min, o.x_min), std::min(y_min, o.y_min), std::max(x_max, o.x_max),
                std::max(y_max, o.y_max)};
}

Rect footprint(const Hole& h) {
    const auto x = static_cast<double>(h.center.x);
    const auto y = static_cast<double>(h.center.y);
    return Rect{x - h.radius, y - h.radius, x + h.radius, y + h.radius};
}

Rect footprint(const LogicalQubit& q) { return footprint(q.holes[0]).hull(footprint(q.holes[1])); }

std::int64_t slot_pitch(int d) { return std::max<std::int64_t>(1, (d + 3) / 4); }

namespace {

constexpr int kSlotsPerCell = 3;

struct CellGeometry {
    std::int64_t pitch;     // c
    double half;            // hole half-width h
    std::int64_t cell_w;    // 4c
    std::int64_t cell_h;    // d + 2c
    std::int64_t origin_x;  // X_0
    std::int64_t origin_y;  // Y_0

    explicit CellGeometry(int d)
        : pitch(slot_pitch(d)),
          half(hole_half_width(d)),
          cell_w(4 * pitch),
          cell_h(d + 2 * pitch),
          origin_x(2 * pitch),
          origin_y(2 * pitch) {}

    std::int64_t column_x(int slot_x) const {
        return origin_x + (slot_x / kSlotsPerCell) * cell_w + (slot_x % kSlotsPerCell) * pitch;
    }
    std::int64_t row_top(int cell_row) const { return origin_y + cell_row * cell_h; }
};

}  // namespace

Mapping build_mapping(int rows, int cols, const PhysicalParams& p) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("build_mapping: rows and cols must be >= 1");
    }
    p.validate();
    const CellGeometry g(p.d);

    Mapping m;
    m.rows = rows;
    m.cols = cols;
    m.d = p.d;
    m.l_mm = p.l_mm;

    for (int i = 0; i < rows; ++i) {
        for (int sx = 0; sx < cols * kSlotsPerCell; ++sx) {
            const LatticePoint top{g.column_x(sx), g.row_top(i)};
            m.qubits.push_back(LogicalQubit::make(top, Orientation::Vertical, p.d));
            m.slots.push_back(SlotIndex{sx, 2 * i});
        }
    }

    // The free strip between neighbouring footprints is 2c - 2h wide
    // everywhere, borders included.
    const double free_half = static_cast<double>(g.pitch) - g.half;
    const std::int64_t last_x = g.origin_x + (cols - 1) * g.cell_w;
    const std::int64_t last_y = g.row_top(rows - 1);
    m.bounds = Rect{g.half, g.half, static_cast<double>(last_x + g.cell_w) - g.half,
                    static_cast<double>(last_y + p.d + 2 * g.pitch) - g.half};

    for (int j = 0; j <= cols; ++j) {
        m.channels.push_back(Channel{Axis::Y, static_cast<double>(g.origin_x - g.pitch + j * g.cell_w),
                                     free_half});
    }
    m.channels.push_back(Channel{Axis::X, static_cast<double>(g.origin_y - g.pitch), free_half});
    for (int i = 0; i < rows; ++i) {
        m.channels.push_back(
            Channel{Axis::X, static_cast<double>(g.row_top(i) + p.d + g.pitch), free_half});
    }
    return m;
}

Mapping single_qubit_mapping(const LogicalQubit& q, const Rect& bounds, double l_mm) {
    Mapping m;
    m.d = q.code_distance;
    m.l_mm = l_mm;
    m.bounds = bounds;
    m.qubits.push_back(q);
    m.slots.push_back(SlotIndex{0, 0});
    return m;
}

std::optional<std::size_t> find_slot(const Mapping& m, SlotIndex s) {
    const auto it = std::find(m.slots.begin(), m.slots.end(), s);
    if (it == m.slots.end()) return std::nullopt;
    return static_cast<std::size_t>(it - m.slots.begin());
}

std::pair<double, double> slot_position_mm(const Mapping& m, SlotIndex s) {
    if (m.rows < 1 || s.x < 0 || s.y < 0 || s.x >= m.cols * kSlotsPerCell || s.y >= 2 * m.rows) {
        throw std::out_of_range("slot_position_mm: slot outside the canonical grid");
    }
    const CellGeometry g(m.d);
    const auto x = static_cast<double>(g.column_x(s.x));
    const auto top = static_cast<double>(g.row_top(s.y / 2));
    const double y = (s.y % 2 == 0) ? top + m.d / 2.0 : top + m.d + static_cast<double>(g.pitch);
    return {x * m.l_mm, y * m.l_mm};
}

Rect unit_cell_rect(const Mapping& m, int row, int col) {
    if (row < 0 || col < 0 || row >= m.rows || col >= m.cols) {
        throw std::out_of_range("unit_cell_rect: cell outside the mapping");
    }
    const CellGeometry g(m.d);
    const auto x0 = static_cast<double>(g.origin_x + col * g.cell_w - g.pitch);
    const auto y0 = static_cast<double>(g.row_top(row) - g.pitch);
    return Rect{x0, y0, x0 + static_cast<double>(g.cell_w), y0 + static_cast<double>(g.cell_h)};
}

Rect hole_frame(const Mapping& m, std::size_t qubit, double width_cells, double height_cells) {
    const LogicalQubit& q = m.qubits.at(qubit);
    const double side = q.code_distance / 4.0;
    const double cx = (q.holes[0].center.x + q.holes[1].center.x) / 2.0;
    const double cy = (q.holes[0].center.y + q.holes[1].center.y) / 2.0;
    double half_x = width_cells * side / 2.0;
    double half_y = height_cells * side / 2.0;
    if (q.orientation == Orientation::Vertical) {
        std::swap(half_x, half_y);
    }
    return Rect{cx - half_x, cy - half_y, cx + half_x, cy + half_y};
}

std::vector<std::string> check_mapping(const Mapping& m) {
    std::vector<std::string> problems;
    std::vector<Rect> rects;
    for (std::size_t i = 0; i < m.qubits.size(); ++i) {
        for (int h = 0; h < 2; ++h) {
            const Rect r = footprint(m.qubits[i].holes[h]);
            if (!m.bounds.contains(r)) {
                problems.push_back("qubit " + std::to_string(i) + " hole " + std::to_string(h) +
                                   " lies outside the bounds");
            }
            rects.push_back(r);
        }
    }
    for (std::size_t a = 0; a < rects.size(); ++a) {
        for (std::size_t b = a + 1; b < rects.size(); ++b) {
            if (rects[a].overlaps(rects[b])) {
                problems.push_back("holes " + std::to_string(a) + " and " + std::to_string(b) +
                                   " overlap");
            }
        }
    }
    for (std::size_t c = 0; c < m.channels.size(); ++c) {
        const Channel& ch = m.channels[c];
        const Rect strip = ch.axis == Axis::X
                               ? Rect{m.bounds.x_min, ch.center - ch.half_width, m.bounds.x_max,
                                      ch.center + ch.half_width}
                               : Rect{ch.center - ch.half_width, m.bounds.y_min,
                                      ch.center + ch.half_width, m.bounds.y_max};
        for (std::size_t a = 0; a < rects.size(); ++a) {
            if (strip.overlaps(rects[a])) {
                problems.push_back("channel " + std::to_string(c) + " crosses hole " +
                                   std::to_string(a));
            }
        }
    }
    return problems;
}

void write_mapping_json(std::ostream& out, const Mapping& m) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    j["d"] = m.d;
    j["l_mm"] = m.l_mm;
    j["slot_pitch"] = slot_pitch(m.d);
    j["bounds"] = {{"x_min", m.bounds.x_min},
                   {"y_min", m.bounds.y_min},
                   {"x_max", m.bounds.x_max},
                   {"y_max", m.bounds.y_max}};
    ordered_json qubits = ordered_json::array();
    for (std::size_t i = 0; i < m.qubits.size(); ++i) {
        const auto& q = m.qubits[i];
        ordered_json holes = ordered_json::array();
        for (const auto& h : q.holes) {
            holes.push_back({{"x", h.center.x}, {"y", h.center.y}, {"half_width", h.radius}});
        }
        qubits.push_back({{"id", i},
                          {"slot", {m.slots[i].x, m.slots[i].y}},
                          {"orientation", std::string(to_string(q.orientation))},
                          {"code_distance", q.code_distance},
                          {"holes", holes}});
    }
    j["qubits"] = qubits;
    ordered_json channels = ordered_json::array();
    for (const auto& c : m.channels) {
        channels.push_back({{"axis", c.axis == Axis::X ? "x" : "y"},
                            {"center", c.center},
                            {"half_width", c.half_width}});
    }
    j["channels"] = channels;
    out << j.dump(2) << '\n';
}

}  // namespace crflee
