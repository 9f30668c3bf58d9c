#include "crflee/experiments.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "crflee/csv.hpp"
#include "crflee/feasibility.hpp"
#include "crflee/mapping.hpp"
#include "crflee/planner.hpp"
#include "crflee/reliability.hpp"
#include "crflee/simulator.hpp"

namespace crflee {

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names{"sweep-l",  "sweep-rmax",  "sweep-delta",
                                                "simulate", "reliability", "replicate-paper"};
    return names;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0) || !(hi >= lo) || n < 1) {
        throw RangeError("log grid needs 0 < lo <= hi and at least one point");
    }
    std::vector<double> out;
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < n; ++i) {
        out.push_back(n == 1 ? lo : std::pow(10.0, a + (b - a) * i / (n - 1)));
    }
    // Pin the ends so they survive the log/pow round trip.
    out.front() = lo;
    if (n > 1) out.back() = hi;
    return out;
}

namespace {

SweepParameter parameter_of(const std::string& sub) {
    if (sub == "sweep-l") return SweepParameter::L;
    if (sub == "sweep-rmax") return SweepParameter::RMax;
    return SweepParameter::Delta;
}

std::vector<double> default_range(SweepParameter p) {
    const int last = p == SweepParameter::L ? 60 : p == SweepParameter::RMax ? 100 : 25;
    std::vector<double> v;
    for (int i = 1; i <= last; ++i) v.push_back(i);
    return v;
}

}  // namespace

std::vector<double> resolve_sweep_values(const ExperimentConfig& c, SweepParameter param) {
    if (!c.sweep_values.empty()) {
        return c.sweep_values;
    }
    const int given = c.sweep_start.has_value() + c.sweep_stop.has_value() + c.sweep_step.has_value();
    if (given == 0) {
        return default_range(param);
    }
    if (given != 3) {
        throw RangeError("sweep_start, sweep_stop and sweep_step must be given together");
    }
    const double start = *c.sweep_start;
    const double stop = *c.sweep_stop;
    const double step = *c.sweep_step;
    if (!(step > 0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw RangeError("sweep range needs sweep_step > 0 and sweep_stop >= sweep_start");
    }
    const auto n = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (n > 1000000) {
        throw RangeError("sweep range holds more than 10^6 values");
    }
    std::vector<double> v;
    for (std::int64_t i = 0; i < n; ++i) v.push_back(start + static_cast<double>(i) * step);
    return v;
}

namespace {

std::pair<double, double> default_epicenter(const Mapping& m) {
    return slot_position_mm(m, SlotIndex{1, 0});
}

}  // namespace

ExperimentConfig resolve(const std::string& sub, const ExperimentConfig& in) {
    ExperimentConfig c = in;
    if (sub.rfind("sweep-", 0) == 0) {
        c.sweep_values = resolve_sweep_values(in, parameter_of(sub));
        c.sweep_start.reset();
        c.sweep_stop.reset();
        c.sweep_step.reset();
    }
    if (sub == "simulate" && (!c.epicenter_x_mm || !c.epicenter_y_mm)) {
        const Mapping m = build_mapping(c.mapping_rows, c.mapping_cols, c.physical);
        const auto [x, y] = default_epicenter(m);
        if (!c.epicenter_x_mm) c.epicenter_x_mm = x;
        if (!c.epicenter_y_mm) c.epicenter_y_mm = y;
    }
    if (sub == "reliability" && !c.p_hole_hit) {
        c.p_hole_hit = p_hole_hit_frame(c.frame_width_cells, c.frame_height_cells);
    }
    return c;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

class Artifacts {
  public:
    explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string text) { files_.emplace_back(name, std::move(text)); }

    // Everything is computed before the first byte is written, so a failing
    // run leaves no partial artifacts behind.
    std::vector<std::string> commit(const std::string& sub, const ExperimentConfig& c) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) {
            throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
        }
        std::vector<std::string> names;
        for (const auto& [name, text] : files_) {
            write_file(dir_ / name, text);
            names.push_back(name);
        }
        write_file(dir_ / "resolved.cfg", format_config(c));
        names.push_back("resolved.cfg");
        write_file(dir_ / "manifest.json", manifest(sub, c, names));
        names.push_back("manifest.json");
        return names;
    }

  private:
    static std::string manifest(const std::string& sub, const ExperimentConfig& c,
                                const std::vector<std::string>& artifacts) {
        using nlohmann::ordered_json;
        ordered_json j;
        j["tool"] = "crflee";
        j["version"] = CRFLEE_VERSION;
        j["subcommand"] = sub;
        j["seed"] = c.seed;
        ordered_json config = ordered_json::object();
        std::istringstream lines(format_config(c));
        for (std::string line; std::getline(lines, line);) {
            const auto eq = line.find(" = ");
            config[line.substr(0, eq)] = line.substr(eq + 3);
        }
        j["config"] = config;
        j["conventions"] = {
            {"delta_unit", "lattice cycles, converted with t_c_us"},
            {"halfway_x0", c.halfway_offset == HalfwayOffset::Lattice ? "d/2 mm" : "d*l/2 mm"},
            {"move_displacement", "explicit parameter in mm"},
            {"inequalities", "strict; equality counts as failure"},
            {"destruction_rule", std::string(to_string(c.destruction_rule))},
            {"transit_model", std::string(to_string(c.transit_model))},
            {"mc_mode", std::string(to_string(c.mc_mode))},
        };
        j["artifacts"] = artifacts;
        j["replay"] = "crflee " + sub + " --config resolved.cfg";
        return j.dump(2) + "\n";
    }

    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string sweep_gnuplot(const std::string& csv_name, SweepParameter p) {
    std::ostringstream g;
    g << "set datafile separator ','\n"
      << "set xlabel '" << to_string(p) << "'\n"
      << "set ylabel 'minimum code distance'\n"
      << "set key top right\n"
      << "plot '" << csv_name << "' every ::1 using 2:(strcol(3) eq 'halfway' ? $4 : NaN) with steps title 'halfway', \\\n"
      << "     '" << csv_name << "' every ::1 using 2:(strcol(3) eq 'at_hole' ? $4 : NaN) with steps title 'at hole'\n";
    return g.str();
}

std::string reliability_gnuplot(const std::string& csv_name) {
    std::ostringstream g;
    g << "set datafile separator ','\n"
      << "set logscale x\n"
      << "set xlabel 'tau (s)'\n"
      << "set ylabel 'failure probability'\n"
      << "plot '" << csv_name << "' every ::1 using 1:2 with lines title 'analytic', \\\n"
      << "     '" << csv_name << "' every ::1 using 1:3:4 with yerrorbars title 'monte carlo'\n";
    return g.str();
}

std::string sweep_file_name(SweepParameter p) { return "sweep_" + std::string(to_string(p)) + ".csv"; }

void run_sweep(const std::string& sub, const ExperimentConfig& c, unsigned threads, Artifacts& out) {
    const SweepParameter param = parameter_of(sub);
    SweepOptions opt;
    opt.scenarios = c.scenarios;
    opt.offset = c.halfway_offset;
    opt.d_max = c.d_max;
    opt.threads = threads;
    const SweepResult r = sweep(param, c.sweep_values, c.physical, opt);
    std::ostringstream csv;
    write_sweep_csv(csv, r);
    const std::string name = sweep_file_name(param);
    out.add(name, csv.str());
    if (c.emit_gnuplot) out.add(name.substr(0, name.size() - 4) + ".gp", sweep_gnuplot(name, param));
    spdlog::info("{}: {} rows", sub, r.rows.size());
}

void run_simulate(const ExperimentConfig& c, Artifacts& out) {
    const Mapping m = build_mapping(c.mapping_rows, c.mapping_cols, c.physical);
    const CreEvent event{*c.epicenter_x_mm, *c.epicenter_y_mm, c.event_t0_cycles};
    const MovePlan plan = plan_flight(m, event, c.physical, PlannerOptions{c.destruction_rule});
    const SimOutcome outcome =
        simulate(m, event, c.physical, plan, SimOptions{c.destruction_rule, c.transit_model});

    std::ostringstream mapping;
    write_mapping_json(mapping, m);
    out.add("mapping.json", mapping.str());

    std::ostringstream steps;
    steps << "qubit,hole,axis,target_x,target_y,start_cycle,duration_cycles,batch\n";
    for (const auto& s : plan.steps) {
        steps << s.qubit << ',' << s.hole << ',' << (s.axis == Axis::X ? "x" : "y") << ','
              << s.target.x << ',' << s.target.y << ',' << s.start << ',' << s.duration << ','
              << s.batch << '\n';
    }
    out.add("plan.csv", steps.str());

    std::ostringstream log;
    write_event_log(log, outcome);
    out.add("events.csv", log.str());
    spdlog::info("simulate: {} qubits, {} moved, {} destroyed", m.qubits.size(),
                 plan.moved_qubits().size(),
                 std::count(outcome.survived.begin(), outcome.survived.end(), false));
}

void run_reliability(const ExperimentConfig& c, unsigned threads, Artifacts& out) {
    const std::vector<double> taus = log_spaced(c.tau_min_s, c.tau_max_s, c.tau_points);
    const Mapping m = build_mapping(1, 1, c.physical);
    McOptions mc;
    mc.mode = c.mc_mode;
    mc.frame_width_cells = c.frame_width_cells;
    mc.frame_height_cells = c.frame_height_cells;
    mc.sim = SimOptions{c.destruction_rule, c.transit_model};
    mc.planner = PlannerOptions{c.destruction_rule};
    mc.threads = threads;
    std::vector<ReliabilityRow> rows;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const ReliabilityParams r{c.lambda_per_s, taus[i], c.physical.d, *c.p_hole_hit};
        ReliabilityRow row{taus[i], failure_probability(r), std::nullopt};
        if (c.n_trials > 0) {
            row.mc = monte_carlo_failure(m, c.physical, r, c.n_trials, stream_seed(c.seed, i), mc);
        }
        rows.push_back(row);
    }
    std::ostringstream csv;
    write_reliability_csv(csv, rows);
    out.add("reliability.csv", csv.str());
    if (c.emit_gnuplot) out.add("reliability.gp", reliability_gnuplot("reliability.csv"));
    spdlog::info("reliability: {} tau points, {} trials each", rows.size(), c.n_trials);
}

// Point-wise random detection latency and displacement, one independent
// draw per (sweep family, spacing, swept value).
void run_replicate(const ExperimentConfig& c, Artifacts& out) {
    if (c.replicate_delta_min_cycles < 0 || c.replicate_delta_max_cycles < c.replicate_delta_min_cycles) {
        throw RangeError("replicate delta range must satisfy 0 <= min <= max");
    }
    if (!(c.replicate_displacement_min_mm >= 0) ||
        !(c.replicate_displacement_max_mm >= c.replicate_displacement_min_mm) ||
        !std::isfinite(c.replicate_displacement_max_mm)) {
        throw RangeError("replicate displacement range must satisfy 0 <= min <= max < inf");
    }
    struct Family {
        std::string name;
        SweepParameter param;
        bool per_spacing;
    };
    const std::vector<Family> families{{"l", SweepParameter::L, false},
                                       {"rmax", SweepParameter::RMax, true},
                                       {"delta", SweepParameter::Delta, true}};
    std::ostringstream draws;
    draws << "family,l_mm,value,delta_cycles,move_displacement_mm\n";
    std::uint64_t index = 0;
    for (const auto& fam : families) {
        const std::vector<double> spacings =
            fam.per_spacing ? c.replicate_l_mm : std::vector<double>{c.physical.l_mm};
        for (const double l : spacings) {
            SweepResult result;
            result.parameter = fam.param;
            for (const double v : default_range(fam.param)) {
                std::mt19937_64 rng(stream_seed(c.seed, index++));
                PhysicalParams p = c.physical;
                p.l_mm = l;
                p.delta_cycles = std::uniform_int_distribution<int>(c.replicate_delta_min_cycles,
                                                                    c.replicate_delta_max_cycles)(rng);
                p.move_displacement_mm = std::uniform_real_distribution<double>(
                    c.replicate_displacement_min_mm, c.replicate_displacement_max_mm)(rng);
                p = with_swept_value(p, fam.param, v);
                draws << fam.name << ',' << csv::format_double(p.l_mm) << ',' << csv::format_double(v)
                      << ',' << p.delta_cycles << ',' << csv::format_double(p.move_displacement_mm)
                      << '\n';
                for (const StrikeKind k : c.scenarios) {
                    result.rows.push_back(
                        SweepRow{v, k, min_code_distance(p, StrikeScenario{k, c.halfway_offset}, c.d_max)});
                }
            }
            std::ostringstream csv;
            write_sweep_csv(csv, result);
            const std::string stem = fam.per_spacing
                                         ? "replicate_" + fam.name + "_l" + csv::format_double(l)
                                         : "replicate_" + fam.name;
            out.add(stem + ".csv", csv.str());
            if (c.emit_gnuplot) out.add(stem + ".gp", sweep_gnuplot(stem + ".csv", fam.param));
        }
    }
    out.add("replicate_draws.csv", draws.str());
}

}  // namespace

std::vector<std::string> run_subcommand(const std::string& sub, const ExperimentConfig& config,
                                        const std::filesystem::path& out_dir, unsigned threads) {
    const auto& names = subcommand_names();
    if (std::find(names.begin(), names.end(), sub) == names.end()) {
        throw ConfigError("unknown subcommand '" + sub + "'");
    }
    Artifacts out(out_dir);
    ExperimentConfig c;
    try {
        config.physical.validate();
        if (config.d_max < 2) throw RangeError("d_max must be >= 2");
        c = resolve(sub, config);
        if (sub.rfind("sweep-", 0) == 0) {
            run_sweep(sub, c, threads, out);
        } else if (sub == "simulate") {
            run_simulate(c, out);
        } else if (sub == "reliability") {
            run_reliability(c, threads, out);
        } else {
            run_replicate(c, out);
        }
    } catch (const std::invalid_argument& e) {
        throw RangeError(e.what());
    } catch (const std::out_of_range& e) {
        throw RangeError(e.what());
    }
    return out.commit(sub, c);
}

}  // namespace crflee
