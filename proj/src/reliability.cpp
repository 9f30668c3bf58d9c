#include "crflee/reliability.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "crflee/csv.hpp"
#include "parallel.hpp"

namespace crflee {

void ReliabilityParams::validate() const {
    if (!(lambda_per_s >= 0) || !std::isfinite(lambda_per_s)) {
        throw std::invalid_argument("lambda_per_s must be finite and >= 0");
    }
    if (!(tau_s >= 0) || !std::isfinite(tau_s)) {
        throw std::invalid_argument("tau_s must be finite and >= 0");
    }
    if (d < 2) {
        throw std::invalid_argument("code distance must be >= 2");
    }
    if (!(p_hole_hit >= 0 && p_hole_hit <= 1)) {
        throw std::invalid_argument("p_hole_hit must lie in [0, 1]");
    }
}

double p_hole_hit_frame(double width_cells, double height_cells, int holes) {
    const double cells = width_cells * height_cells;
    if (!(width_cells > 0 && height_cells > 0) || holes < 0 || holes > cells) {
        throw std::invalid_argument("frame must be positive and hold at least as many cells as holes");
    }
    return holes / cells;
}

double p_few_hits(int d, double lambda_per_s, double tau_s) {
    if (d < 2) {
        throw std::invalid_argument("p_few_hits: d must be >= 2");
    }
    const double mu = lambda_per_s * tau_s;
    if (!(mu >= 0)) {
        throw std::invalid_argument("p_few_hits: lambda * tau must be >= 0");
    }
    double term = std::exp(-mu);
    double sum = term;
    for (int k = 0; k < d - 2; ++k) {
        term *= mu / (k + 1);
        sum += term;
    }
    return std::min(1.0, sum);
}

double failure_probability(const ReliabilityParams& r) {
    r.validate();
    return 1.0 - (1.0 - r.p_hole_hit) * p_few_hits(r.d, r.lambda_per_s, r.tau_s);
}

std::string_view to_string(McMode m) { return m == McMode::Paper ? "paper" : "simulator"; }

McMode parse_mc_mode(std::string_view s) {
    if (s == "paper") return McMode::Paper;
    if (s == "simulator") return McMode::Simulator;
    throw std::invalid_argument("unknown mc_mode '" + std::string(s) + "'");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool inside(const Rect& r, double x, double y) {
    return x >= r.x_min && x <= r.x_max && y >= r.y_min && y <= r.y_max;
}

Rect scaled(const Rect& r, double k) { return Rect{r.x_min * k, r.y_min * k, r.x_max * k, r.y_max * k}; }

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ index);
}

McEstimate monte_carlo_failure(const Mapping& m, const PhysicalParams& p, const ReliabilityParams& r,
                               std::uint64_t n_trials, std::uint64_t seed, const McOptions& options) {
    if (n_trials == 0) {
        throw std::invalid_argument("monte_carlo_failure: n_trials must be >= 1");
    }
    r.validate();
    p.validate();
    if (options.qubit >= m.qubits.size()) {
        throw std::invalid_argument("monte_carlo_failure: qubit index outside the mapping");
    }
    const Rect region = options.epicenter_region_mm.value_or(
        scaled(hole_frame(m, options.qubit, options.frame_width_cells, options.frame_height_cells),
               m.l_mm));
    const Rect chip = scaled(m.bounds, m.l_mm);
    const LogicalQubit& target = m.qubits[options.qubit];
    const double mu = r.lambda_per_s * r.tau_s;
    const double tau_cycles = r.tau_s * 1e6 / p.t_c_us;

    std::vector<unsigned char> lost(n_trials, 0);
    detail::parallel_for(n_trials, options.threads, [&](std::size_t trial) {
        std::mt19937_64 rng(stream_seed(seed, trial));
        std::uniform_real_distribution<double> ux(region.x_min, region.x_max);
        std::uniform_real_distribution<double> uy(region.y_min, region.y_max);
        const double x = ux(rng);
        const double y = uy(rng);
        const auto extra = mu > 0 ? std::poisson_distribution<long long>(mu)(rng) : 0LL;

        if (options.mode == McMode::Paper) {
            bool hit = false;
            for (const auto& h : target.holes) {
                hit = hit || inside(scaled(footprint(h), m.l_mm), x, y);
            }
            lost[trial] = hit || extra >= r.d - 1;
            return;
        }

        std::vector<CreEvent> events{CreEvent{x, y, 0}};
        std::uniform_real_distribution<double> cx(chip.x_min, chip.x_max);
        std::uniform_real_distribution<double> cy(chip.y_min, chip.y_max);
        std::uniform_real_distribution<double> ct(0.0, tau_cycles);
        for (long long k = 0; k < extra; ++k) {
            const double ex = cx(rng);
            const double ey = cy(rng);
            events.push_back(CreEvent{ex, ey, static_cast<Cycle>(std::floor(ct(rng)))});
        }
        try {
            const MovePlan plan = plan_flight(m, events.front(), p, options.planner);
            const SimOutcome out = simulate(m, events, p, plan, options.sim);
            lost[trial] = !out.survived[options.qubit];
        } catch (const UnescapableError&) {
            lost[trial] = 1;
        }
    });

    McEstimate e;
    e.trials = n_trials;
    for (unsigned char v : lost) e.failures += v;
    e.estimate = static_cast<double>(e.failures) / static_cast<double>(n_trials);
    e.half_width = 1.96 * std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(n_trials));
    return e;
}

void write_reliability_csv(std::ostream& out, const std::vector<ReliabilityRow>& rows) {
    out << "tau,analytic_failure,mc_failure,mc_halfwidth\n";
    for (const auto& row : rows) {
        out << csv::format_double(row.tau_s) << ',' << csv::format_double(row.analytic) << ',';
        if (row.mc) {
            out << csv::format_double(row.mc->estimate) << ',' << csv::format_double(row.mc->half_width);
        } else {
            out << "NA,NA";
        }
        out << '\n';
    }
}

}  // namespace crflee
