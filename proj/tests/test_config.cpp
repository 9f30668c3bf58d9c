#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "crflee/config.hpp"
#include "crflee/experiments.hpp"

using namespace crflee;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

}  // namespace

TEST(Config, Defaults) {
    const ExperimentConfig c = parse("");
    EXPECT_EQ(c.physical.l_mm, 1.0);
    EXPECT_EQ(c.physical.r_max_mm, 63.0);
    EXPECT_EQ(c.scenarios.size(), 2u);
    EXPECT_EQ(c.seed, 1u);
}

TEST(Config, ParsesTypedValues) {
    const ExperimentConfig c = parse(
        "# comment\n"
        "l_mm = 5\n"
        "  delta_cycles=3  \n"
        "scenario = at_hole\n"
        "sweep_values = 1, 2.5, 4\n"
        "dissipation_hold_cycles = inf\n"
        "seed = 18446744073709551615\n"
        "emit_gnuplot = true\n"
        "transit_model = immediate\n");
    EXPECT_EQ(c.physical.l_mm, 5.0);
    EXPECT_EQ(c.physical.delta_cycles, 3);
    ASSERT_EQ(c.scenarios.size(), 1u);
    EXPECT_EQ(c.scenarios[0], StrikeKind::AtHole);
    EXPECT_EQ(c.sweep_values, (std::vector<double>{1, 2.5, 4}));
    EXPECT_TRUE(std::isinf(c.physical.dissipation_hold_cycles));
    EXPECT_EQ(c.seed, 18446744073709551615ULL);
    EXPECT_TRUE(c.emit_gnuplot);
    EXPECT_EQ(c.transit_model, TransitModel::Immediate);
}

TEST(Config, UnknownKeyIsAnError) { EXPECT_THROW(parse("r_max = 63\n"), ConfigError); }

TEST(Config, DuplicateKeyIsAnError) { EXPECT_THROW(parse("l_mm = 1\nl_mm = 2\n"), ConfigError); }

TEST(Config, EmptySweepListIsAnError) { EXPECT_THROW(parse("sweep_values =\n"), ConfigError); }

TEST(Config, BadValuesAreErrors) {
    EXPECT_THROW(parse("l_mm = one\n"), ConfigError);
    EXPECT_THROW(parse("d = 3.5\n"), ConfigError);
    EXPECT_THROW(parse("seed = -1\n"), ConfigError);
    EXPECT_THROW(parse("scenario = nowhere\n"), ConfigError);
    EXPECT_THROW(parse("just some words\n"), ConfigError);
}

TEST(Config, ErrorNamesLine) {
    try {
        parse("l_mm = 1\n\nbogus = 2\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(Config, FormatRoundTrips) {
    ExperimentConfig c = parse("l_mm = 0.1\nsweep_start = 1\nsweep_stop = 3\nsweep_step = 0.5\n"
                               "p_hole_hit = 0.02\nepicenter_x_mm = 3.25\nmc_mode = simulator\n");
    const std::string text = format_config(c);
    EXPECT_EQ(format_config(parse(text)), text);
    EXPECT_EQ(parse(text).physical.l_mm, 0.1);
}

TEST(Config, EveryKeyIsListed) {
    const std::string text = format_config(ExperimentConfig{});
    for (const auto& k : config_keys()) {
        const bool optional = k.rfind("sweep_", 0) == 0 || k == "p_hole_hit" || k.rfind("epicenter_", 0) == 0;
        EXPECT_EQ(text.find(k + " = ") != std::string::npos, !optional) << k;
    }
}

TEST(SweepValues, Resolution) {
    ExperimentConfig c;
    EXPECT_EQ(resolve_sweep_values(c, SweepParameter::RMax).size(), 100u);
    EXPECT_EQ(resolve_sweep_values(c, SweepParameter::L).size(), 60u);
    EXPECT_EQ(resolve_sweep_values(c, SweepParameter::Delta).size(), 25u);
    c.sweep_start = 1;
    c.sweep_stop = 2;
    c.sweep_step = 0.25;
    EXPECT_EQ(resolve_sweep_values(c, SweepParameter::L), (std::vector<double>{1, 1.25, 1.5, 1.75, 2}));
    c.sweep_step.reset();
    EXPECT_THROW(resolve_sweep_values(c, SweepParameter::L), RangeError);
}

TEST(LogSpaced, EndsAreExact) {
    const auto v = log_spaced(1e-4, 1, 5);
    ASSERT_EQ(v.size(), 5u);
    EXPECT_EQ(v.front(), 1e-4);
    EXPECT_EQ(v.back(), 1.0);
    EXPECT_NEAR(v[2], 1e-2, 1e-15);
    EXPECT_THROW(log_spaced(0, 1, 3), RangeError);
}
