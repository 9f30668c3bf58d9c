#include "crflee/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "crflee/csv.hpp"

namespace crflee {

std::string_view to_string(TransitModel t) {
    return t == TransitModel::OriginAnchored ? "origin_anchored" : "immediate";
}

TransitModel parse_transit_model(std::string_view s) {
    if (s == "origin_anchored") return TransitModel::OriginAnchored;
    if (s == "immediate") return TransitModel::Immediate;
    throw std::invalid_argument("unknown transit model '" + std::string(s) + "'");
}

DestructionRule parse_destruction_rule(std::string_view s) {
    if (s == "full") return DestructionRule::Full;
    if (s == "string_only") return DestructionRule::StringOnly;
    throw std::invalid_argument("unknown destruction rule '" + std::string(s) + "'");
}

bool SimOutcome::all_survived() const {
    return std::all_of(survived.begin(), survived.end(), [](bool s) { return s; });
}

namespace {

// First cycle at which the qubit counts as displaced, if it moves at all.
std::optional<Cycle> switch_cycle(const MovePlan& plan, int q, TransitModel transit) {
    return transit == TransitModel::OriginAnchored ? plan.completion_of(q) : plan.start_of(q);
}

}  // namespace

LogicalQubit qubit_at(const Mapping& m, const MovePlan& plan, int q, Cycle t, TransitModel transit) {
    const LogicalQubit& origin = m.qubits.at(q);
    const auto when = switch_cycle(plan, q, transit);
    if (when && t >= *when) {
        const LatticePoint off = plan.offset_of(m, q);
        return origin.translated(off.x, off.y);
    }
    return origin;
}

std::vector<std::array<Rect, 2>> hole_states_at(const Mapping& m, const MovePlan& plan, Cycle t) {
    std::vector<std::array<Rect, 2>> out(m.qubits.size());
    for (std::size_t q = 0; q < m.qubits.size(); ++q) {
        for (int h = 0; h < 2; ++h) out[q][h] = footprint(m.qubits[q].holes[h]);
    }
    for (const auto& s : plan.steps) {
        if (t < s.start) continue;
        Hole target = m.qubits[s.qubit].holes[s.hole];
        target.center = s.target;
        const Rect origin = footprint(m.qubits[s.qubit].holes[s.hole]);
        out[s.qubit][s.hole] = t < s.end() ? origin.hull(footprint(target)) : footprint(target);
    }
    return out;
}

namespace {

struct FrontWindow {
    PhononFront front;
    Cycle first;                // t0
    std::optional<Cycle> gone;  // first cycle the front is inactive again
};

std::string point_detail(double x, double y) {
    return "x_mm=" + csv::format_double(x) + " y_mm=" + csv::format_double(y);
}

}  // namespace

SimOutcome simulate(const Mapping& m, std::span<const CreEvent> events, const PhysicalParams& p,
                    const MovePlan& plan, const SimOptions& options) {
    p.validate();
    SimOutcome out;
    const std::size_t n = m.qubits.size();
    out.survived.assign(n, true);
    out.destroyed_at.assign(n, std::nullopt);

    std::vector<FrontWindow> fronts;
    Cycle horizon = events.empty() ? 0 : events.front().t0;
    for (const auto& e : events) {
        FrontWindow w{PhononFront{e, p}, e.t0, std::nullopt};
        const double grow = w.front.growth_cycles();
        horizon = std::max(horizon, e.t0);
        if (std::isfinite(grow)) {
            horizon = std::max(horizon, e.t0 + static_cast<Cycle>(std::ceil(grow)));
        }
        const double diss = w.front.dissipation_cycles();
        if (std::isfinite(diss)) {
            w.gone = e.t0 + static_cast<Cycle>(std::floor(diss)) + 1;
            horizon = std::max(horizon, *w.gone);
        }
        fronts.push_back(w);
    }
    for (const auto& s : plan.steps) horizon = std::max(horizon, s.end());
    out.horizon = horizon;

    auto destroyed = [&](const LogicalQubit& q, Cycle t) {
        std::vector<Disc> discs;
        for (const auto& f : fronts) {
            if (t >= f.first && f.front.active_at(t)) discs.push_back(f.front.disc_at(t));
        }
        return !discs.empty() && is_destroyed(discs, q, m.l_mm, options.rule);
    };

    for (std::size_t q = 0; q < n && !fronts.empty(); ++q) {
        const int qi = static_cast<int>(q);
        std::vector<Cycle> cuts;
        for (const auto& f : fronts) {
            cuts.push_back(f.first);
            if (f.gone) cuts.push_back(*f.gone);
        }
        if (auto c = switch_cycle(plan, qi, options.transit)) cuts.push_back(*c);
        cuts.push_back(horizon + 1);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        // Within a segment the qubit does not move and every active front only
        // grows, so the predicate can only switch from false to true.
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const Cycle a = cuts[i];
            const Cycle b = std::min(cuts[i + 1], horizon + 1);
            if (a >= b) continue;
            const LogicalQubit pos = qubit_at(m, plan, qi, a, options.transit);
            if (!destroyed(pos, b - 1)) continue;
            Cycle lo = a;
            Cycle hi = b - 1;
            while (lo < hi) {
                const Cycle mid = lo + (hi - lo) / 2;
                if (destroyed(pos, mid)) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            out.survived[q] = false;
            out.destroyed_at[q] = lo;
            break;
        }
    }

    for (const auto& f : fronts) {
        out.timeline.push_back({f.first, "strike", -1, point_detail(f.front.event.x_mm, f.front.event.y_mm)});
    }
    for (const auto& f : fronts) {
        out.timeline.push_back({detect(f.front.event, p), "detect", -1, ""});
    }
    for (const int q : plan.moved_qubits()) {
        const LatticePoint off = plan.offset_of(m, q);
        const bool displaced =
            std::find(plan.displaced.begin(), plan.displaced.end(), q) != plan.displaced.end();
        out.timeline.push_back({*plan.start_of(q), "move_start", q,
                                "dx=" + std::to_string(off.x) + " dy=" + std::to_string(off.y) +
                                    " batches=" + std::to_string(plan.steps_for(q)) +
                                    (displaced ? " displaced" : "")});
        out.timeline.push_back({*plan.completion_of(q), "move_complete", q, ""});
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (out.destroyed_at[q]) {
            out.timeline.push_back({*out.destroyed_at[q], "destroyed", static_cast<int>(q), ""});
        }
    }
    for (const auto& f : fronts) {
        if (f.gone) out.timeline.push_back({*f.gone, "dissipated", -1, ""});
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (out.survived[q]) out.timeline.push_back({horizon, "survived", static_cast<int>(q), ""});
    }
    std::stable_sort(out.timeline.begin(), out.timeline.end(),
                     [](const TimelineRecord& a, const TimelineRecord& b) { return a.cycle < b.cycle; });
    return out;
}

SimOutcome simulate(const Mapping& m, const CreEvent& event, const PhysicalParams& p,
                    const MovePlan& plan, const SimOptions& options) {
    return simulate(m, std::span<const CreEvent>(&event, 1), p, plan, options);
}

void write_event_log(std::ostream& out, const SimOutcome& outcome) {
    out << "cycle,event_kind,qubit_id,detail\n";
    for (const auto& r : outcome.timeline) {
        out << r.cycle << ',' << r.kind << ',' << (r.qubit >= 0 ? std::to_string(r.qubit) : "") << ','
            << r.detail << '\n';
    }
}

std::vector<TimelineRecord> read_event_log(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "cycle,event_kind,qubit_id,detail") {
        throw std::runtime_error("event log: missing or unexpected header");
    }
    std::vector<TimelineRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = csv::split(line);
        if (f.size() != 4) {
            throw std::runtime_error("event log: expected 4 fields in '" + line + "'");
        }
        TimelineRecord r;
        r.cycle = csv::parse_int(f[0]);
        r.kind = f[1];
        r.qubit = f[2].empty() ? -1 : static_cast<int>(csv::parse_int(f[2]));
        r.detail = f[3];
        records.push_back(std::move(r));
    }
    return records;
}

RadialScenario radial_flight_scenario(const PhysicalParams& p, const StrikeScenario& s) {
    p.validate();
    const LogicalQubit q = LogicalQubit::make({0, 0}, Orientation::Horizontal, p.d);
    const double h = hole_half_width(p.d);
    const double reach = std::ceil(p.move_displacement_mm / p.l_mm);
    const Rect bounds{-h, -h, p.d + h + reach + 2, h};
    return RadialScenario{single_qubit_mapping(q, bounds, p.l_mm),
                          CreEvent{-s.x0_mm(p.d, p.l_mm), 0.0, 0}};
}

}  // namespace crflee
