#include "crflee/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "crflee/csv.hpp"

namespace crflee {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& v) { return csv::parse_double(v); }

std::int64_t to_int(const std::string& v) { return csv::parse_int(v); }

int to_int32(const std::string& v) {
    const std::int64_t x = to_int(v);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw std::invalid_argument("integer out of range: " + v);
    }
    return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& v) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("expected an unsigned integer, got '" + v + "'");
    }
    std::uint64_t x = 0;
    std::istringstream in(v);
    if (!(in >> x)) throw std::invalid_argument("unsigned integer out of range: " + v);
    return x;
}

bool to_bool(const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::invalid_argument("expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v) {
    std::vector<double> out;
    for (const auto& item : csv::split(v)) {
        out.push_back(to_double(trim(item)));
    }
    return out;
}

std::string list_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += csv::format_double(v[i]);
    }
    return s;
}

std::vector<StrikeKind> to_scenarios(const std::string& v) {
    if (v == "both") return {StrikeKind::Halfway, StrikeKind::AtHole};
    return {parse_strike_kind(v)};
}

std::string scenarios_text(const std::vector<StrikeKind>& s) {
    if (s.size() == 2) return "both";
    return std::string(to_string(s.at(0)));
}

struct Key {
    std::string name;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    // nullopt: unset optional, left out of the formatted config
    std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

std::string num(double v) { return csv::format_double(v); }

template <typename T>
std::optional<std::string> opt_num(const std::optional<T>& v) {
    if (!v) return std::nullopt;
    return num(*v);
}

const std::vector<Key>& keys() {
    using C = ExperimentConfig;
    using S = const std::string&;
    static const std::vector<Key> table{
        {"l_mm", [](C& c, S v) { c.physical.l_mm = to_double(v); },
         [](const C& c) { return std::optional(num(c.physical.l_mm)); }},
        {"d", [](C& c, S v) { c.physical.d = to_int32(v); },
         [](const C& c) { return std::optional(std::to_string(c.physical.d)); }},
        {"v_p_mm_per_us", [](C& c, S v) { c.physical.v_p_mm_per_us = to_double(v); },
         [](const C& c) { return std::optional(num(c.physical.v_p_mm_per_us)); }},
        {"delta_cycles", [](C& c, S v) { c.physical.delta_cycles = to_int32(v); },
         [](const C& c) { return std::optional(std::to_string(c.physical.delta_cycles)); }},
        {"t_c_us", [](C& c, S v) { c.physical.t_c_us = to_double(v); },
         [](const C& c) { return std::optional(num(c.physical.t_c_us)); }},
        {"r_max_mm", [](C& c, S v) { c.physical.r_max_mm = to_double(v); },
         [](const C& c) { return std::optional(num(c.physical.r_max_mm)); }},
        {"move_displacement_mm", [](C& c, S v) { c.physical.move_displacement_mm = to_double(v); },
         [](const C& c) { return std::optional(num(c.physical.move_displacement_mm)); }},
        {"dissipation_hold_cycles",
         [](C& c, S v) { c.physical.dissipation_hold_cycles = to_double(v); },
         [](const C& c) { return std::optional(num(c.physical.dissipation_hold_cycles)); }},

        {"d_max", [](C& c, S v) { c.d_max = to_int32(v); },
         [](const C& c) { return std::optional(std::to_string(c.d_max)); }},
        {"halfway_offset", [](C& c, S v) { c.halfway_offset = parse_halfway_offset(v); },
         [](const C& c) { return std::optional(std::string(to_string(c.halfway_offset))); }},
        {"scenario", [](C& c, S v) { c.scenarios = to_scenarios(v); },
         [](const C& c) { return std::optional(scenarios_text(c.scenarios)); }},
        {"sweep_values",
         [](C& c, S v) {
             if (v.empty()) throw std::invalid_argument("sweep_values is empty");
             c.sweep_values = to_list(v);
         },
         [](const C& c) {
             return c.sweep_values.empty() ? std::nullopt : std::optional(list_text(c.sweep_values));
         }},
        {"sweep_start", [](C& c, S v) { c.sweep_start = to_double(v); },
         [](const C& c) { return opt_num(c.sweep_start); }},
        {"sweep_stop", [](C& c, S v) { c.sweep_stop = to_double(v); },
         [](const C& c) { return opt_num(c.sweep_stop); }},
        {"sweep_step", [](C& c, S v) { c.sweep_step = to_double(v); },
         [](const C& c) { return opt_num(c.sweep_step); }},

        {"lambda_per_s", [](C& c, S v) { c.lambda_per_s = to_double(v); },
         [](const C& c) { return std::optional(num(c.lambda_per_s)); }},
        {"tau_min_s", [](C& c, S v) { c.tau_min_s = to_double(v); },
         [](const C& c) { return std::optional(num(c.tau_min_s)); }},
        {"tau_max_s", [](C& c, S v) { c.tau_max_s = to_double(v); },
         [](const C& c) { return std::optional(num(c.tau_max_s)); }},
        {"tau_points", [](C& c, S v) { c.tau_points = to_int32(v); },
         [](const C& c) { return std::optional(std::to_string(c.tau_points)); }},
        {"n_trials", [](C& c, S v) { c.n_trials = to_u64(v); },
         [](const C& c) { return std::optional(std::to_string(c.n_trials)); }},
        {"seed", [](C& c, S v) { c.seed = to_u64(v); },
         [](const C& c) { return std::optional(std::to_string(c.seed)); }},
        {"frame_width_cells", [](C& c, S v) { c.frame_width_cells = to_double(v); },
         [](const C& c) { return std::optional(num(c.frame_width_cells)); }},
        {"frame_height_cells", [](C& c, S v) { c.frame_height_cells = to_double(v); },
         [](const C& c) { return std::optional(num(c.frame_height_cells)); }},
        {"p_hole_hit", [](C& c, S v) { c.p_hole_hit = to_double(v); },
         [](const C& c) { return opt_num(c.p_hole_hit); }},
        {"mc_mode", [](C& c, S v) { c.mc_mode = parse_mc_mode(v); },
         [](const C& c) { return std::optional(std::string(to_string(c.mc_mode))); }},

        {"mapping_rows", [](C& c, S v) { c.mapping_rows = to_int32(v); },
         [](const C& c) { return std::optional(std::to_string(c.mapping_rows)); }},
        {"mapping_cols", [](C& c, S v) { c.mapping_cols = to_int32(v); },
         [](const C& c) { return std::optional(std::to_string(c.mapping_cols)); }},
        {"epicenter_x_mm", [](C& c, S v) { c.epicenter_x_mm = to_double(v); },
         [](const C& c) { return opt_num(c.epicenter_x_mm); }},
        {"epicenter_y_mm", [](C& c, S v) { c.epicenter_y_mm = to_double(v); },
         [](const C& c) { return opt_num(c.epicenter_y_mm); }},
        {"event_t0_cycles", [](C& c, S v) { c.event_t0_cycles = to_int(v); },
         [](const C& c) { return std::optional(std::to_string(c.event_t0_cycles)); }},
        {"destruction_rule", [](C& c, S v) { c.destruction_rule = parse_destruction_rule(v); },
         [](const C& c) { return std::optional(std::string(to_string(c.destruction_rule))); }},
        {"transit_model", [](C& c, S v) { c.transit_model = parse_transit_model(v); },
         [](const C& c) { return std::optional(std::string(to_string(c.transit_model))); }},

        {"replicate_l_mm",
         [](C& c, S v) {
             if (v.empty()) throw std::invalid_argument("replicate_l_mm is empty");
             c.replicate_l_mm = to_list(v);
         },
         [](const C& c) { return std::optional(list_text(c.replicate_l_mm)); }},
        {"replicate_delta_min_cycles", [](C& c, S v) { c.replicate_delta_min_cycles = to_int32(v); },
         [](const C& c) { return std::optional(std::to_string(c.replicate_delta_min_cycles)); }},
        {"replicate_delta_max_cycles", [](C& c, S v) { c.replicate_delta_max_cycles = to_int32(v); },
         [](const C& c) { return std::optional(std::to_string(c.replicate_delta_max_cycles)); }},
        {"replicate_displacement_min_mm",
         [](C& c, S v) { c.replicate_displacement_min_mm = to_double(v); },
         [](const C& c) { return std::optional(num(c.replicate_displacement_min_mm)); }},
        {"replicate_displacement_max_mm",
         [](C& c, S v) { c.replicate_displacement_max_mm = to_double(v); },
         [](const C& c) { return std::optional(num(c.replicate_displacement_max_mm)); }},

        {"emit_gnuplot", [](C& c, S v) { c.emit_gnuplot = to_bool(v); },
         [](const C& c) { return std::optional(std::string(c.emit_gnuplot ? "true" : "false")); }},
    };
    return table;
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> names;
    for (const auto& k : keys()) names.push_back(k.name);
    return names;
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig c;
    std::map<std::string, int> seen;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) {
            throw ConfigError(where + "expected 'key = value', got '" + body + "'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto it = std::find_if(keys().begin(), keys().end(),
                                     [&](const Key& k) { return k.name == key; });
        if (it == keys().end()) {
            throw ConfigError(where + "unknown key '" + key + "'");
        }
        if (const auto [prev, fresh] = seen.emplace(key, lineno); !fresh) {
            throw ConfigError(where + "key '" + key + "' already set on line " +
                              std::to_string(prev->second));
        }
        try {
            it->set(c, value);
        } catch (const std::exception& e) {
            throw ConfigError(where + key + ": " + e.what());
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path.string());
    }
    return parse_config(in);
}

std::string format_config(const ExperimentConfig& c) {
    std::string out;
    for (const auto& k : keys()) {
        if (const auto v = k.get(c)) out += k.name + " = " + *v + "\n";
    }
    return out;
}

}  // namespace crflee
