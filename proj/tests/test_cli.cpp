#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "crflee/feasibility.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(CRFLEE_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path file = dir / "run.cfg";
    std::ofstream(file) << text;
    return file;
}

int run(const std::string& args) {
    const std::string cmd = std::string(CRFLEE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t data_rows(const fs::path& file) {
    std::istringstream in(slurp(file));
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += !line.empty();
    return n - 1;
}

}  // namespace

TEST(Cli, SweepRadiusWritesTwoRowsPerValue) {
    const fs::path dir = scratch("sweep_rmax");
    const fs::path cfg = write_config(dir, "l_mm = 1\nsweep_start = 1\nsweep_stop = 100\nsweep_step = 1\n");
    ASSERT_EQ(run("sweep-rmax --config " + cfg.string() + " --out " + (dir / "out").string()), 0);
    EXPECT_EQ(data_rows(dir / "out" / "sweep_r_max_mm.csv"), 200u);
    std::ifstream in(dir / "out" / "sweep_r_max_mm.csv");
    const auto r = crflee::read_sweep_csv(in);
    EXPECT_EQ(r.rows.front().value, 1.0);
    EXPECT_EQ(r.rows.back().value, 100.0);

    const auto manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
    EXPECT_EQ(manifest["subcommand"], "sweep-rmax");
    EXPECT_EQ(manifest["config"]["l_mm"], "1");
    EXPECT_TRUE(manifest["conventions"].contains("halfway_x0"));
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("exit_codes");
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("sweep-l"), 1);
    EXPECT_EQ(run("nonsense --config x"), 1);
    EXPECT_EQ(run("sweep-l --config " + write_config(dir, "sweep_values =\n").string()), 2);
    EXPECT_EQ(run("sweep-l --config " + write_config(dir, "mystery = 1\n").string()), 2);
    EXPECT_EQ(run("sweep-l --config " + write_config(dir, "sweep_values = 1, -2\n").string() +
                  " --out " + (dir / "o").string()),
              3);
    EXPECT_EQ(run("sweep-l --config " + write_config(dir, "d_max = 1\n").string() + " --out " +
                  (dir / "o").string()),
              3);
    // A strike between the holes of a qubit with nowhere to go.
    EXPECT_EQ(run("simulate --config " +
                  write_config(dir, "d = 8\nr_max_mm = 60\nmapping_rows = 1\nmapping_cols = 1\n").string() +
                  " --out " + (dir / "o").string()),
              4);
    std::ofstream(dir / "blocker") << "x";
    EXPECT_EQ(run("sweep-l --config " + write_config(dir, "").string() + " --out " +
                  (dir / "blocker" / "sub").string()),
              5);
}

TEST(Cli, SimulateWritesLogs) {
    const fs::path dir = scratch("simulate");
    const fs::path cfg = write_config(dir, "d = 8\nr_max_mm = 5\nmapping_rows = 3\nmapping_cols = 2\n"
                                           "epicenter_x_mm = 14\nepicenter_y_mm = 38\n");
    ASSERT_EQ(run("simulate --config " + cfg.string() + " --out " + (dir / "out").string()), 0);
    EXPECT_EQ(data_rows(dir / "out" / "plan.csv"), 6u);
    EXPECT_TRUE(fs::exists(dir / "out" / "mapping.json"));
    EXPECT_EQ(slurp(dir / "out" / "events.csv").rfind("cycle,event_kind,qubit_id,detail\n", 0), 0u);
}

TEST(Cli, ReliabilityLeftEndpoint) {
    const fs::path dir = scratch("reliability");
    const fs::path cfg = write_config(dir, "lambda_per_s = 0.1\ntau_min_s = 0.0001\ntau_max_s = 1\n"
                                           "tau_points = 9\nn_trials = 2000\nemit_gnuplot = true\n");
    ASSERT_EQ(run("reliability --config " + cfg.string() + " --out " + (dir / "out").string()), 0);
    std::istringstream in(slurp(dir / "out" / "reliability.csv"));
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header, "tau,analytic_failure,mc_failure,mc_halfwidth");
    EXPECT_NEAR(std::stod(first.substr(first.find(',') + 1)), 0.04, 1e-4);
    EXPECT_TRUE(fs::exists(dir / "out" / "reliability.gp"));
}

TEST(Cli, ReplaysByteForByteFromResolvedConfig) {
    const fs::path dir = scratch("replay");
    const fs::path cfg = write_config(dir, "tau_points = 5\nn_trials = 3000\n");
    ASSERT_EQ(run("reliability --config " + cfg.string() + " --seed 77 --out " + (dir / "a").string()), 0);
    ASSERT_EQ(run("reliability --config " + (dir / "a" / "resolved.cfg").string() + " --threads 3 --out " +
                  (dir / "b").string()),
              0);
    for (const char* f : {"reliability.csv", "resolved.cfg", "manifest.json"}) {
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    }
    EXPECT_NE(slurp(dir / "a" / "resolved.cfg").find("seed = 77"), std::string::npos);
}

TEST(Cli, ReplicateIsSeeded) {
    const fs::path dir = scratch("replicate");
    const fs::path cfg = write_config(dir, "seed = 5\n");
    ASSERT_EQ(run("replicate-paper --config " + cfg.string() + " --out " + (dir / "a").string()), 0);
    ASSERT_EQ(run("replicate-paper --config " + cfg.string() + " --out " + (dir / "b").string()), 0);
    for (const char* f : {"replicate_l.csv", "replicate_rmax_l5.csv", "replicate_delta_l10.csv",
                          "replicate_draws.csv"}) {
        ASSERT_TRUE(fs::exists(dir / "a" / f)) << f;
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    }
    EXPECT_EQ(data_rows(dir / "a" / "replicate_l.csv"), 120u);
}
