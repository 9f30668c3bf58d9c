// crflee: minimum code distances, flight simulations and failure curves for
// logical qubits fleeing cosmic-ray phonon fronts.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "crflee/config.hpp"
#include "crflee/experiments.hpp"
#include "crflee/planner.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_st("crflee");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("CRFLEE_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off; only accept real names
        if (level != spdlog::level::off || std::string(env) == "off") {
            spdlog::set_level(level);
        } else {
            spdlog::warn("ignoring unknown CRFLEE_LOG level '{}'", env);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Code distance, flight and reliability experiments for cosmic-ray strikes"};
    app.set_version_flag("--version", std::string(CRFLEE_VERSION));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    unsigned threads = 1;

    const std::map<std::string, std::string> blurbs{
        {"sweep-l", "Minimum code distance against site spacing"},
        {"sweep-rmax", "Minimum code distance against maximum front radius"},
        {"sweep-delta", "Minimum code distance against detection latency"},
        {"simulate", "Plan and simulate an escape on a canonical mapping"},
        {"reliability", "Failure probability over a window of exposure times"},
        {"replicate-paper", "Reference sweeps and random draws in one run"},
    };
    for (const auto& name : crflee::subcommand_names()) {
        auto* sub = app.add_subcommand(name, blurbs.at(name));
        sub->add_option("--config", config_path, "Experiment configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", seed, "Overrides the configured seed");
        sub->add_option("--threads", threads, "Worker threads")
            ->capture_default_str()
            ->check(CLI::Range(1u, 1024u));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return crflee::kExitUsage;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        crflee::ExperimentConfig config = crflee::load_config(config_path);
        if (app.get_subcommands().front()->count("--seed") > 0) config.seed = seed;
        const auto written = crflee::run_subcommand(sub, config, out_dir, threads);
        for (const auto& f : written) std::cout << out_dir << '/' << f << '\n';
        return crflee::kExitOk;
    } catch (const crflee::ConfigError& e) {
        spdlog::error("config error: {}", e.what());
        return crflee::kExitConfig;
    } catch (const crflee::RangeError& e) {
        spdlog::error("range error: {}", e.what());
        return crflee::kExitRange;
    } catch (const crflee::UnescapableError& e) {
        spdlog::error("unescapable: {}", e.what());
        return crflee::kExitUnescapable;
    } catch (const crflee::IoError& e) {
        spdlog::error("i/o error: {}", e.what());
        return crflee::kExitIo;
    }
}
