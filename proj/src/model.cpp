#include "crflee/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crflee {

void PhysicalParams::validate() const {
    if (!(l_mm > 0)) {
        throw std::invalid_argument("l_mm must be > 0, got " + std::to_string(l_mm));
    }
    if (d < 2) {
        throw std::invalid_argument("code distance must be >= 2, got " + std::to_string(d));
    }
    if (!(v_p_mm_per_us >= 0)) {
        throw std::invalid_argument("v_p_mm_per_us must be >= 0");
    }
    if (delta_cycles < 0) {
        throw std::invalid_argument("delta_cycles must be >= 0");
    }
    if (!(t_c_us > 0)) {
        throw std::invalid_argument("t_c_us must be > 0");
    }
    if (!(r_max_mm >= 0)) {
        throw std::invalid_argument("r_max_mm must be >= 0");
    }
    if (!(move_displacement_mm >= 0)) {
        throw std::invalid_argument("move_displacement_mm must be >= 0");
    }
    if (!(dissipation_hold_cycles >= 0)) {
        throw std::invalid_argument("dissipation_hold_cycles must be >= 0");
    }
}

std::string_view to_string(Orientation o) {
    return o == Orientation::Horizontal ? "horizontal" : "vertical";
}

std::string_view to_string(DestructionRule r) {
    return r == DestructionRule::Full ? "full" : "string_only";
}

double hole_half_width(int d) { return d / 8.0; }

LogicalQubit LogicalQubit::make(LatticePoint first_hole, Orientation o, int d) {
    if (d < 2) {
        throw std::invalid_argument("code distance must be >= 2");
    }
    LogicalQubit q;
    q.orientation = o;
    q.code_distance = d;
    q.holes[0] = Hole{first_hole, hole_half_width(d)};
    LatticePoint second = first_hole;
    if (o == Orientation::Horizontal) {
        second.x += d;
    } else {
        second.y += d;
    }
    q.holes[1] = Hole{second, hole_half_width(d)};
    return q;
}

LatticePoint LogicalQubit::string_site(int k) const {
    LatticePoint p = holes[0].center;
    if (orientation == Orientation::Horizontal) {
        p.x += k;
    } else {
        p.y += k;
    }
    return p;
}

LogicalQubit LogicalQubit::translated(std::int64_t dx, std::int64_t dy) const {
    LogicalQubit q = *this;
    for (auto& h : q.holes) {
        h.center.x += dx;
        h.center.y += dy;
    }
    return q;
}

double PhononFront::growth_cycles() const {
    if (params.r_max_mm == 0) {
        return 0.0;
    }
    const double g = params.growth_per_cycle_mm();
    if (g == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return params.r_max_mm / g;
}

double PhononFront::dissipation_cycles() const {
    return growth_cycles() + params.dissipation_hold_cycles;
}

bool PhononFront::active_at(Cycle t) const {
    const auto elapsed = static_cast<double>(t - event.t0);
    return elapsed >= 0 && elapsed <= dissipation_cycles();
}

Disc PhononFront::disc_at(Cycle t) const {
    return Disc{event.x_mm, event.y_mm, phonon_radius(*this, t)};
}

double phonon_radius(const PhononFront& front, Cycle t) {
    if (t < front.event.t0) {
        throw std::invalid_argument("phonon_radius: t precedes the event time");
    }
    if (!front.active_at(t)) {
        return 0.0;
    }
    const auto elapsed = static_cast<double>(t - front.event.t0);
    return std::min(front.params.growth_per_cycle_mm() * elapsed, front.params.r_max_mm);
}

namespace {

bool strictly_inside(const Disc& disc, double x_mm, double y_mm) {
    const double dx = x_mm - disc.cx_mm;
    const double dy = y_mm - disc.cy_mm;
    return dx * dx + dy * dy < disc.r_mm * disc.r_mm;
}

}  // namespace

int compromised_count(const Disc& disc, const LogicalQubit& q, double l_mm) {
    return compromised_count(std::span<const Disc>(&disc, 1), q, l_mm);
}

int compromised_count(std::span<const Disc> discs, const LogicalQubit& q, double l_mm) {
    int count = 0;
    for (int k = 1; k < q.code_distance; ++k) {
        const LatticePoint s = q.string_site(k);
        const double x = static_cast<double>(s.x) * l_mm;
        const double y = static_cast<double>(s.y) * l_mm;
        if (std::any_of(discs.begin(), discs.end(),
                        [&](const Disc& c) { return strictly_inside(c, x, y); })) {
            ++count;
        }
    }
    return count;
}

int compromised_count(const PhononFront& front, const LogicalQubit& q, Cycle t) {
    return compromised_count(front.disc_at(t), q, front.params.l_mm);
}

bool hole_swallowed(const Disc& disc, const Hole& hole, double l_mm) {
    if (disc.r_mm <= 0) {
        return false;
    }
    const double cx = static_cast<double>(hole.center.x) * l_mm;
    const double cy = static_cast<double>(hole.center.y) * l_mm;
    const double h = hole.radius * l_mm;
    // A disc is convex, so the square is inside iff its four corners are.
    return strictly_inside(disc, cx - h, cy - h) && strictly_inside(disc, cx + h, cy - h) &&
           strictly_inside(disc, cx - h, cy + h) && strictly_inside(disc, cx + h, cy + h);
}

bool is_destroyed(std::span<const Disc> discs, const LogicalQubit& q, double l_mm,
                  DestructionRule rule) {
    if (compromised_count(discs, q, l_mm) >= q.code_distance - 1) {
        return true;
    }
    if (rule == DestructionRule::StringOnly) {
        return false;
    }
    // Hole coverage is tested per disc; a hole split across two overlapping
    // fronts is not counted as swallowed.
    for (const auto& disc : discs) {
        for (const auto& hole : q.holes) {
            if (hole_swallowed(disc, hole, l_mm)) {
                return true;
            }
        }
    }
    return false;
}

bool is_destroyed(const PhononFront& front, const LogicalQubit& q, Cycle t, DestructionRule rule) {
    const Disc disc = front.disc_at(t);
    return is_destroyed(std::span<const Disc>(&disc, 1), q, front.params.l_mm, rule);
}

double nearest_hole_distance_mm(const LogicalQubit& q, double x_mm, double y_mm, double l_mm) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& h : q.holes) {
        const double dx = static_cast<double>(h.center.x) * l_mm - x_mm;
        const double dy = static_cast<double>(h.center.y) * l_mm - y_mm;
        best = std::min(best, std::hypot(dx, dy));
    }
    return best;
}

}  // namespace crflee
