#include "crflee/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "crflee/csv.hpp"
#include "parallel.hpp"

namespace crflee {

std::string_view to_string(StrikeKind k) {
    return k == StrikeKind::Halfway ? "halfway" : "at_hole";
}

std::string_view to_string(HalfwayOffset o) {
    return o == HalfwayOffset::Lattice ? "lattice" : "physical";
}

StrikeKind parse_strike_kind(std::string_view s) {
    if (s == "halfway") return StrikeKind::Halfway;
    if (s == "at_hole") return StrikeKind::AtHole;
    throw std::invalid_argument("unknown scenario '" + std::string(s) + "'");
}

HalfwayOffset parse_halfway_offset(std::string_view s) {
    if (s == "lattice") return HalfwayOffset::Lattice;
    if (s == "physical") return HalfwayOffset::Physical;
    throw std::invalid_argument("unknown halfway offset '" + std::string(s) + "'");
}

double StrikeScenario::x0_mm(int d, double l_mm) const {
    if (kind == StrikeKind::AtHole) {
        return 0.0;
    }
    return offset == HalfwayOffset::Physical ? d * l_mm / 2.0 : d / 2.0;
}

namespace {

// Gap between the front and the nearest hole when the move starts.
double gap_at_move_start(const PhysicalParams& p, const StrikeScenario& s) {
    return s.x0_mm(p.d, p.l_mm) - p.radius_at_move_start_mm();
}

double string_length_mm(const PhysicalParams& p) { return p.l_mm * (p.d - 1); }

}  // namespace

bool check_condition1(const PhysicalParams& p, const StrikeScenario& s) {
    return p.radius_at_move_start_mm() < gap_at_move_start(p, s) + string_length_mm(p);
}

bool check_condition2(const PhysicalParams& p, const StrikeScenario& s) {
    return p.r_max_mm < gap_at_move_start(p, s) + p.move_displacement_mm + string_length_mm(p);
}

FeasibilityVerdict evaluate(const PhysicalParams& p, const StrikeScenario& s) {
    return FeasibilityVerdict{check_condition1(p, s), check_condition2(p, s)};
}

std::optional<int> min_code_distance(const PhysicalParams& p, const StrikeScenario& s, int d_max) {
    if (d_max < 2) {
        throw std::invalid_argument("min_code_distance: d_max must be >= 2");
    }
    PhysicalParams q = p;
    auto feasible = [&](int d) {
        q.d = d;
        return evaluate(q, s).feasible();
    };
    // Both right-hand sides grow with d while the left-hand sides do not, so
    // the feasible set is an upward-closed interval and bisection finds its
    // lower end.
    if (!feasible(d_max)) {
        return std::nullopt;
    }
    int lo = 2;
    int hi = d_max;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (feasible(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::L: return "l_mm";
        case SweepParameter::RMax: return "r_max_mm";
        case SweepParameter::Delta: return "delta_cycles";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(std::string_view s) {
    if (s == "l_mm") return SweepParameter::L;
    if (s == "r_max_mm") return SweepParameter::RMax;
    if (s == "delta_cycles") return SweepParameter::Delta;
    throw std::invalid_argument("unknown sweep parameter '" + std::string(s) + "'");
}

PhysicalParams with_swept_value(const PhysicalParams& fixed, SweepParameter param, double value) {
    if (!(value > 0) || !std::isfinite(value)) {
        throw std::invalid_argument("sweep values must be positive and finite, got " +
                                    csv::format_double(value));
    }
    PhysicalParams p = fixed;
    switch (param) {
        case SweepParameter::L:
            p.l_mm = value;
            break;
        case SweepParameter::RMax:
            p.r_max_mm = value;
            break;
        case SweepParameter::Delta:
            if (value != std::floor(value) || value > 1e9) {
                throw std::invalid_argument("delta_cycles sweep values must be whole cycles, got " +
                                            csv::format_double(value));
            }
            p.delta_cycles = static_cast<int>(value);
            break;
    }
    return p;
}

SweepResult sweep(SweepParameter param, std::vector<double> values, const PhysicalParams& fixed,
                  const SweepOptions& options) {
    if (values.empty()) {
        throw std::invalid_argument("sweep: empty value range");
    }
    if (options.scenarios.empty()) {
        throw std::invalid_argument("sweep: no scenarios selected");
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<PhysicalParams> points;
    points.reserve(values.size());
    for (double v : values) {
        points.push_back(with_swept_value(fixed, param, v));
    }

    const std::size_t n_scen = options.scenarios.size();
    SweepResult result;
    result.parameter = param;
    result.rows.resize(values.size() * n_scen);
    detail::parallel_for(result.rows.size(), options.threads, [&](std::size_t i) {
        const std::size_t vi = i / n_scen;
        const StrikeScenario s{options.scenarios[i % n_scen], options.offset};
        result.rows[i] = SweepRow{values[vi], s.kind, min_code_distance(points[vi], s, options.d_max)};
    });
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "param,value,scenario,min_d,feasible\n";
    const std::string name(to_string(result.parameter));
    for (const auto& row : result.rows) {
        out << name << ',' << csv::format_double(row.value) << ',' << to_string(row.scenario) << ','
            << (row.min_d ? std::to_string(*row.min_d) : std::string("NA")) << ','
            << (row.min_d ? "true" : "false") << '\n';
    }
}

SweepResult read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "param,value,scenario,min_d,feasible") {
        throw std::runtime_error("sweep csv: missing or unexpected header");
    }
    SweepResult result;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = csv::split(line);
        if (f.size() != 5) {
            throw std::runtime_error("sweep csv: expected 5 fields in '" + line + "'");
        }
        const SweepParameter p = parse_sweep_parameter(f[0]);
        if (first) {
            result.parameter = p;
            first = false;
        } else if (p != result.parameter) {
            throw std::runtime_error("sweep csv: mixed parameters");
        }
        SweepRow row;
        row.value = csv::parse_double(f[1]);
        row.scenario = parse_strike_kind(f[2]);
        if (f[4] == "true") {
            row.min_d = static_cast<int>(csv::parse_int(f[3]));
        } else if (f[4] != "false" || f[3] != "NA") {
            throw std::runtime_error("sweep csv: inconsistent min_d/feasible in '" + line + "'");
        }
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace crflee
