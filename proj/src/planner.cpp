#include "crflee/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace crflee {

Cycle detect(const CreEvent& event, const PhysicalParams& p) { return event.t0 + p.delta_cycles; }

int MovePlan::steps_for(int qubit) const {
    int last = -1;
    for (const auto& s : steps) {
        if (s.qubit == qubit) last = std::max(last, s.batch);
    }
    return last + 1;
}

int MovePlan::max_steps() const {
    int last = -1;
    for (const auto& s : steps) last = std::max(last, s.batch);
    return last + 1;
}

std::vector<int> MovePlan::moved_qubits() const {
    std::vector<int> out;
    for (const auto& s : steps) {
        if (std::find(out.begin(), out.end(), s.qubit) == out.end()) out.push_back(s.qubit);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Cycle> MovePlan::start_of(int qubit) const {
    std::optional<Cycle> out;
    for (const auto& s : steps) {
        if (s.qubit == qubit) out = out ? std::min(*out, s.start) : s.start;
    }
    return out;
}

std::optional<Cycle> MovePlan::completion_of(int qubit) const {
    std::optional<Cycle> out;
    for (const auto& s : steps) {
        if (s.qubit == qubit) out = out ? std::max(*out, s.end()) : s.end();
    }
    return out;
}

LatticePoint MovePlan::offset_of(const Mapping& m, int qubit) const {
    for (const auto& s : steps) {
        if (s.qubit == qubit) {
            const LatticePoint origin = m.qubits.at(qubit).holes[s.hole].center;
            return LatticePoint{s.target.x - origin.x, s.target.y - origin.y};
        }
    }
    return LatticePoint{};
}

namespace {

std::string describe(const std::vector<int>& qubits) {
    std::string s = "no safe escape inside the mapping for qubit(s)";
    for (int q : qubits) s += " " + std::to_string(q);
    return s;
}

}  // namespace

UnescapableError::UnescapableError(std::vector<int> qubits)
    : std::runtime_error(describe(qubits)), qubits_(std::move(qubits)) {}

std::vector<int> threatened_qubits(const Mapping& m, const CreEvent& event,
                                   const PhysicalParams& p, DestructionRule rule) {
    // The largest disc the front ever reaches.
    const double r = p.growth_per_cycle_mm() > 0 ? p.r_max_mm : 0.0;
    const Disc disc{event.x_mm, event.y_mm, r};
    std::vector<int> out;
    for (std::size_t i = 0; i < m.qubits.size(); ++i) {
        if (is_destroyed(std::span<const Disc>(&disc, 1), m.qubits[i], m.l_mm, rule)) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

double safe_hole_distance_mm(const PhysicalParams& p, int d) {
    return p.r_max_mm + p.radius_at_move_start_mm() - p.l_mm * (d - 1);
}

namespace {

struct Direction {
    int dx;
    int dy;
    Axis axis() const { return dx != 0 ? Axis::X : Axis::Y; }
};

constexpr std::array<Direction, 4> kDirections{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

struct Motion {
    int first_batch = 0;
    int last_batch = 0;
    LatticePoint offset;
    Rect swept;
};

struct Pending {
    int qubit = 0;
    bool threatened = true;
    // Displaced qubits only: forced direction and minimum push.
    Direction dir{0, 0};
    std::int64_t min_push = 0;
    int depth = 0;  // how many displacements separate it from a threatened qubit
    bool asked_for_room = false;
};

struct Candidate {
    Direction dir{0, 0};
    std::int64_t delta = 0;
    int batches = 0;
};

class Planner {
  public:
    Planner(const Mapping& m, const CreEvent& event, const PhysicalParams& p,
            const PlannerOptions& options)
        : m_(m), event_(event), p_(p), options_(options), motion_(m.qubits.size()) {
        plan_.begin = detect(event, p) + 1;
        plan_.batch_cycles = 0;
        for (const auto& q : m.qubits) {
            plan_.batch_cycles = std::max<Cycle>(plan_.batch_cycles, q.code_distance);
        }
    }

    MovePlan run() {
        std::vector<int> threatened = threatened_qubits(m_, event_, p_, options_.rule);
        std::vector<double> dist(m_.qubits.size());
        for (int q : threatened) {
            dist[q] = nearest_hole_distance_mm(m_.qubits[q], event_.x_mm, event_.y_mm, m_.l_mm);
        }
        std::stable_sort(threatened.begin(), threatened.end(), [&](int a, int b) {
            if (dist[a] != dist[b]) return dist[a] < dist[b];
            if (m_.slots[a].y != m_.slots[b].y) return m_.slots[a].y < m_.slots[b].y;
            return m_.slots[a].x < m_.slots[b].x;
        });
        for (int q : threatened) pending_.push_back(Pending{q});

        for (int batch = 0; !pending_.empty(); ++batch) {
            if (batch >= options_.max_batches) {
                fail();
            }
            bool progress = false;
            for (std::size_t i = 0; i < pending_.size();) {
                Pending& entry = pending_[i];
                if (auto c = best_candidate(entry, batch)) {
                    commit(entry.qubit, *c, batch);
                    pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(i));
                    progress = true;
                    continue;
                }
                if (!entry.asked_for_room && entry.depth < 2) {
                    entry.asked_for_room = true;
                    const std::size_t added = request_room(i, batch);
                    if (added > 0) {
                        progress = true;
                        i += added;
                    }
                }
                ++i;
            }
            if (!progress && !motion_after(batch)) {
                fail();
            }
        }
        std::stable_sort(plan_.steps.begin(), plan_.steps.end(),
                         [](const MoveStep& a, const MoveStep& b) { return a.batch < b.batch; });
        return std::move(plan_);
    }

  private:
    [[noreturn]] void fail() const {
        std::vector<int> ids;
        for (const auto& e : pending_) ids.push_back(e.qubit);
        std::sort(ids.begin(), ids.end());
        throw UnescapableError(std::move(ids));
    }

    bool motion_after(int batch) const {
        return std::any_of(motion_.begin(), motion_.end(), [&](const std::optional<Motion>& mo) {
            return mo && mo->last_batch > batch;
        });
    }

    // Space held by qubit q during batch k.
    Rect rect_at(int q, int batch) const {
        const auto& mo = motion_[q];
        if (mo && mo->first_batch <= batch && batch <= mo->last_batch) {
            return mo->swept;
        }
        LogicalQubit moved = m_.qubits[q];
        if (mo && mo->last_batch < batch) {
            moved = moved.translated(mo->offset.x, mo->offset.y);
        }
        return footprint(moved);
    }

    // Distance the qubit's footprint can travel in dir before touching the
    // bounds; obstacles are ignored.
    double bounds_room(const Rect& r, Direction dir) const {
        if (dir.dx > 0) return m_.bounds.x_max - r.x_max;
        if (dir.dx < 0) return r.x_min - m_.bounds.x_min;
        if (dir.dy > 0) return m_.bounds.y_max - r.y_max;
        return r.y_min - m_.bounds.y_min;
    }

    // Gap between r and obstacle o along dir, or nullopt if o is not in the
    // way (no overlap across the travel axis, or it lies behind).
    static std::optional<double> gap_to(const Rect& r, const Rect& o, Direction dir) {
        if (dir.dx != 0) {
            if (!(o.y_min < r.y_max && r.y_min < o.y_max)) return std::nullopt;
            if (dir.dx > 0) {
                if (o.x_max <= r.x_max) return std::nullopt;
                return std::max(0.0, o.x_min - r.x_max);
            }
            if (o.x_min >= r.x_min) return std::nullopt;
            return std::max(0.0, r.x_min - o.x_max);
        }
        if (!(o.x_min < r.x_max && r.x_min < o.x_max)) return std::nullopt;
        if (dir.dy > 0) {
            if (o.y_max <= r.y_max) return std::nullopt;
            return std::max(0.0, o.y_min - r.y_max);
        }
        if (o.y_min >= r.y_min) return std::nullopt;
        return std::max(0.0, r.y_min - o.y_max);
    }

    std::int64_t free_room(int q, Direction dir, int batch) const {
        const Rect r = footprint(m_.qubits[q]);
        double room = bounds_room(r, dir);
        for (std::size_t o = 0; o < m_.qubits.size(); ++o) {
            if (static_cast<int>(o) == q) continue;
            if (auto g = gap_to(r, rect_at(static_cast<int>(o), batch), dir)) {
                room = std::min(room, *g);
            }
        }
        return room < 0 ? -1 : static_cast<std::int64_t>(std::floor(room + 1e-9));
    }

    bool safe_at(int q, Direction dir, std::int64_t delta) const {
        const LogicalQubit moved = m_.qubits[q].translated(dir.dx * delta, dir.dy * delta);
        const double reach = nearest_hole_distance_mm(moved, event_.x_mm, event_.y_mm, m_.l_mm);
        return reach > safe_hole_distance_mm(p_, moved.code_distance);
    }

    // Smallest push >= 1 (and <= limit) after which the qubit is safe.
    std::optional<std::int64_t> smallest_safe_push(int q, Direction dir, std::int64_t limit) const {
        if (limit < 1) return std::nullopt;
        const LogicalQubit& qb = m_.qubits[q];
        const double need = safe_hole_distance_mm(p_, qb.code_distance) / m_.l_mm;
        const double ex = event_.x_mm / m_.l_mm;
        const double ey = event_.y_mm / m_.l_mm;

        // Each hole is unsafe on a closed interval of pushes.
        std::vector<std::pair<double, double>> unsafe;
        if (need >= 0) {
            for (const auto& h : qb.holes) {
                const double along = dir.dx != 0 ? ex - static_cast<double>(h.center.x)
                                                 : ey - static_cast<double>(h.center.y);
                const double across = dir.dx != 0 ? static_cast<double>(h.center.y) - ey
                                                  : static_cast<double>(h.center.x) - ex;
                const double sign = dir.dx + dir.dy;
                if (std::abs(across) > need) continue;
                const double w = std::sqrt(need * need - across * across);
                const double a = sign * (along - w);
                const double b = sign * (along + w);
                unsafe.emplace_back(std::min(a, b), std::max(a, b));
            }
        }
        std::int64_t delta = 1;
        for (bool moved = true; moved;) {
            moved = false;
            for (const auto& [lo, hi] : unsafe) {
                if (static_cast<double>(delta) >= lo && static_cast<double>(delta) <= hi) {
                    delta = static_cast<std::int64_t>(std::floor(hi)) + 1;
                    moved = true;
                }
            }
        }
        // The interval arithmetic is a fast path; the direct distance test
        // has the final word.
        for (int nudge = 0; nudge < 4 && delta <= limit; ++nudge, ++delta) {
            if (safe_at(q, dir, delta)) return delta;
        }
        return std::nullopt;
    }

    int batches_for(int q, Direction dir) const {
        const Axis along = m_.qubits[q].orientation == Orientation::Horizontal ? Axis::X : Axis::Y;
        return dir.axis() == along ? 2 : 1;
    }

    std::optional<Candidate> best_candidate(const Pending& entry, int batch) const {
        std::optional<Candidate> best;
        std::optional<LatticePoint> best_target;
        for (const Direction dir : kDirections) {
            if (!entry.threatened && (dir.dx != entry.dir.dx || dir.dy != entry.dir.dy)) continue;
            const std::int64_t room = free_room(entry.qubit, dir, batch);
            std::optional<std::int64_t> delta;
            if (entry.threatened) {
                delta = smallest_safe_push(entry.qubit, dir, room);
            } else if (std::max<std::int64_t>(1, entry.min_push) <= room) {
                delta = std::max<std::int64_t>(1, entry.min_push);
            }
            if (!delta) continue;
            const Candidate c{dir, *delta, batches_for(entry.qubit, dir)};
            const LatticePoint target{m_.qubits[entry.qubit].holes[0].center.x + dir.dx * c.delta,
                                      m_.qubits[entry.qubit].holes[0].center.y + dir.dy * c.delta};
            if (!best || c.batches < best->batches ||
                (c.batches == best->batches &&
                 (c.delta < best->delta ||
                  (c.delta == best->delta &&
                   (target.y < best_target->y ||
                    (target.y == best_target->y && target.x < best_target->x)))))) {
                best = c;
                best_target = target;
            }
        }
        return best;
    }

    void commit(int q, const Candidate& c, int batch) {
        const LogicalQubit& qb = m_.qubits[q];
        const LatticePoint offset{c.dir.dx * c.delta, c.dir.dy * c.delta};
        const LogicalQubit moved = qb.translated(offset.x, offset.y);
        motion_[q] = Motion{batch, batch + c.batches - 1, offset, footprint(qb).hull(footprint(moved))};

        const Cycle d = plan_.batch_cycles;
        auto step = [&](int hole, int b) {
            plan_.steps.push_back(MoveStep{q, hole, c.dir.axis(), moved.holes[hole].center,
                                           plan_.begin + b * d, d, b});
        };
        if (c.batches == 1) {
            step(0, batch);
            step(1, batch);
        } else {
            // holes[1] sits further along the axis, so it leads a positive move.
            const int lead = (c.dir.dx + c.dir.dy) > 0 ? 1 : 0;
            step(lead, batch);
            step(1 - lead, batch + 1);
        }
    }

    bool is_pending(int q) const {
        return std::any_of(pending_.begin(), pending_.end(),
                           [&](const Pending& e) { return e.qubit == q; });
    }

    // Asks idle qubits in the way of pending_[index] to step aside. Returns
    // the number of entries inserted ahead of it.
    std::size_t request_room(std::size_t index, int batch) {
        const Pending entry = pending_[index];
        const int q = entry.qubit;
        const Rect r = footprint(m_.qubits[q]);

        std::vector<Direction> order(kDirections.begin(), kDirections.end());
        if (!entry.threatened) order = {entry.dir};
        std::stable_sort(order.begin(), order.end(), [&](Direction a, Direction b) {
            return batches_for(q, a) < batches_for(q, b);
        });

        for (const Direction dir : order) {
            const double room = bounds_room(r, dir);
            if (room < 1) continue;
            const auto limit = static_cast<std::int64_t>(std::floor(room + 1e-9));
            std::optional<std::int64_t> push;
            if (entry.threatened) {
                push = smallest_safe_push(q, dir, limit);
            } else if (std::max<std::int64_t>(1, entry.min_push) <= limit) {
                push = std::max<std::int64_t>(1, entry.min_push);
            }
            if (!push) continue;

            Rect path = r;
            if (dir.dx > 0) path.x_max += static_cast<double>(*push);
            if (dir.dx < 0) path.x_min -= static_cast<double>(*push);
            if (dir.dy > 0) path.y_max += static_cast<double>(*push);
            if (dir.dy < 0) path.y_min -= static_cast<double>(*push);

            std::vector<Pending> blockers;
            bool movable = true;
            for (std::size_t o = 0; o < m_.qubits.size() && movable; ++o) {
                const int oi = static_cast<int>(o);
                if (oi == q) continue;
                const Rect obstacle = rect_at(oi, batch);
                if (!path.overlaps(obstacle)) continue;
                if (motion_[oi] || is_pending(oi)) {
                    movable = false;  // it will clear on its own, or is already queued
                    break;
                }
                std::int64_t need = 0;
                if (dir.dx > 0) need = static_cast<std::int64_t>(std::ceil(path.x_max - obstacle.x_min - 1e-9));
                if (dir.dx < 0) need = static_cast<std::int64_t>(std::ceil(obstacle.x_max - path.x_min - 1e-9));
                if (dir.dy > 0) need = static_cast<std::int64_t>(std::ceil(path.y_max - obstacle.y_min - 1e-9));
                if (dir.dy < 0) need = static_cast<std::int64_t>(std::ceil(obstacle.y_max - path.y_min - 1e-9));
                blockers.push_back(Pending{oi, false, dir, need, entry.depth + 1});
            }
            if (!movable || blockers.empty() || blockers.size() > 2) continue;
            pending_.insert(pending_.begin() + static_cast<std::ptrdiff_t>(index), blockers.begin(),
                            blockers.end());
            for (const auto& b : blockers) plan_.displaced.push_back(b.qubit);
            return blockers.size();
        }
        return 0;
    }

    const Mapping& m_;
    CreEvent event_;
    PhysicalParams p_;
    PlannerOptions options_;
    std::vector<std::optional<Motion>> motion_;
    std::vector<Pending> pending_;
    MovePlan plan_;
};

}  // namespace

MovePlan plan_flight(const Mapping& m, const CreEvent& event, const PhysicalParams& p,
                     const PlannerOptions& options) {
    p.validate();
    return Planner(m, event, p, options).run();
}

}  // namespace crflee
