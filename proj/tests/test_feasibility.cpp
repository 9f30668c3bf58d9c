#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <vector>

#include "crflee/feasibility.hpp"
#include "oracles.hpp"

using namespace crflee;

namespace {

const StrikeScenario kHalfway{StrikeKind::Halfway};
const StrikeScenario kAtHole{StrikeKind::AtHole};

std::vector<int> curve(SweepParameter param, const std::vector<double>& values, StrikeKind kind,
                       PhysicalParams fixed = {}) {
    SweepOptions opt;
    opt.scenarios = {kind};
    std::vector<int> out;
    for (const auto& row : sweep(param, values, fixed, opt).rows) out.push_back(row.min_d.value_or(-1));
    return out;
}

std::vector<double> range(int lo, int hi) {
    std::vector<double> v;
    for (int i = lo; i <= hi; ++i) v.push_back(i);
    return v;
}

}  // namespace

TEST(StrikeScenario, Offsets) {
    EXPECT_EQ(kAtHole.x0_mm(11, 3), 0.0);
    EXPECT_EQ(kHalfway.x0_mm(11, 3), 5.5);
    EXPECT_EQ((StrikeScenario{StrikeKind::Halfway, HalfwayOffset::Physical}.x0_mm(11, 3)), 16.5);
}

TEST(Condition1, HalfwayExample) {
    PhysicalParams p;
    p.d = 11;
    EXPECT_TRUE(check_condition1(p, kHalfway));  // 5 < 0.5 + 10
}

TEST(Condition1, StillFrontAlwaysHolds) {
    PhysicalParams p;
    p.v_p_mm_per_us = 0;
    EXPECT_TRUE(check_condition1(p, kAtHole));
}

TEST(Condition1, EqualityFails) {
    PhysicalParams p;
    p.d = 11;
    p.v_p_mm_per_us = 2.5;
    p.delta_cycles = 1;  // 5 < -5 + 10 is false
    EXPECT_FALSE(check_condition1(p, kAtHole));
}

TEST(Condition2, ZeroRadiusHolds) {
    PhysicalParams p;
    p.r_max_mm = 0;
    p.d = 11;
    EXPECT_TRUE(check_condition2(p, kHalfway));
}

TEST(Condition2, HugeDisplacementHolds) {
    PhysicalParams p;
    p.move_displacement_mm = 1e300;
    EXPECT_TRUE(check_condition2(p, kAtHole));
}

TEST(MinCodeDistance, CanonicalHalfway) {
    // 63 < (d/2 - 5) + 1 + (d - 1)  <=>  d > 45.33
    EXPECT_EQ(min_code_distance(PhysicalParams{}, kHalfway), 46);
    EXPECT_EQ(oracle::scan_min_d(oracle::Tuple{}), 46);
}

TEST(MinCodeDistance, CanonicalAtHole) {
    // 63 < -5 + 1 + (d - 1)  <=>  d > 68
    EXPECT_EQ(min_code_distance(PhysicalParams{}, kAtHole), 69);
}

TEST(MinCodeDistance, InfeasibleWhenFrontIsTooFast) {
    PhysicalParams p;
    p.v_p_mm_per_us = 1e6;
    EXPECT_EQ(min_code_distance(p, kHalfway), std::nullopt);
}

TEST(MinCodeDistance, RejectsTinyUpperBound) {
    EXPECT_THROW(min_code_distance(PhysicalParams{}, kHalfway, 1), std::invalid_argument);
}

TEST(MinCodeDistance, IsMinimal) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        PhysicalParams p;
        p.l_mm = 0.25 * std::uniform_int_distribution<int>(1, 80)(rng);
        p.r_max_mm = 0.5 * std::uniform_int_distribution<int>(0, 300)(rng);
        p.delta_cycles = std::uniform_int_distribution<int>(0, 25)(rng);
        const StrikeScenario s{i % 2 ? StrikeKind::AtHole : StrikeKind::Halfway};
        const auto d = min_code_distance(p, s);
        if (!d) continue;
        p.d = *d;
        EXPECT_TRUE(evaluate(p, s).feasible());
        if (*d > 2) {
            p.d = *d - 1;
            EXPECT_FALSE(evaluate(p, s).feasible());
        }
    }
}

TEST(MinCodeDistance, MatchesExhaustiveScan) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        oracle::Tuple t;
        t.l = 0.25 * std::uniform_int_distribution<int>(1, 100)(rng);
        t.v = 0.25 * std::uniform_int_distribution<int>(0, 40)(rng);
        t.tc = std::array{0.5, 1.0, 2.0}[i % 3];
        t.delta = std::uniform_int_distribution<int>(0, 25)(rng);
        t.r_max = 0.5 * std::uniform_int_distribution<int>(0, 400)(rng);
        t.dl = 0.5 * std::uniform_int_distribution<int>(0, 100)(rng);
        t.at_hole = rng() % 2;
        t.physical_offset = rng() % 2;
        PhysicalParams p;
        p.l_mm = t.l;
        p.v_p_mm_per_us = t.v;
        p.t_c_us = t.tc;
        p.delta_cycles = t.delta;
        p.r_max_mm = t.r_max;
        p.move_displacement_mm = t.dl;
        const StrikeScenario s{t.at_hole ? StrikeKind::AtHole : StrikeKind::Halfway,
                               t.physical_offset ? HalfwayOffset::Physical : HalfwayOffset::Lattice};
        ASSERT_EQ(min_code_distance(p, s), oracle::scan_min_d(t)) << "tuple " << i;
    }
}

TEST(Sweep, SingleValueMatchesSolver) {
    SweepOptions opt;
    opt.scenarios = {StrikeKind::Halfway};
    const auto r = sweep(SweepParameter::RMax, {63}, PhysicalParams{}, opt);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].min_d, min_code_distance(PhysicalParams{}, kHalfway));
}

TEST(Sweep, RejectsEmptyAndNonPositive) {
    EXPECT_THROW(sweep(SweepParameter::L, {}, PhysicalParams{}), std::invalid_argument);
    EXPECT_THROW(sweep(SweepParameter::L, {1, 0}, PhysicalParams{}), std::invalid_argument);
    EXPECT_THROW(sweep(SweepParameter::RMax, {-3}, PhysicalParams{}), std::invalid_argument);
    EXPECT_THROW(sweep(SweepParameter::Delta, {1.5}, PhysicalParams{}), std::invalid_argument);
}

TEST(Sweep, OrderIndependentOfThreads) {
    SweepOptions one;
    SweepOptions four;
    four.threads = 4;
    const std::vector<double> values{7, 3, 1, 60, 22, 3};
    EXPECT_EQ(sweep(SweepParameter::L, values, PhysicalParams{}, one),
              sweep(SweepParameter::L, values, PhysicalParams{}, four));
}

TEST(Sweep, SpacingCurveFrozen) {
    const std::vector<int> halfway{46, 28, 21, 16, 14, 12, 10, 9, 9, 8, 7, 7, 6};
    const std::vector<int> at_hole{69, 35, 24, 18, 15, 13, 11, 10, 9, 8};
    const auto h = curve(SweepParameter::L, range(1, 13), StrikeKind::Halfway);
    const auto a = curve(SweepParameter::L, range(1, 10), StrikeKind::AtHole);
    EXPECT_EQ(h, halfway);
    EXPECT_EQ(a, at_hole);
}

TEST(Sweep, SpacingCurvesMonotoneAndConverge) {
    const auto h = curve(SweepParameter::L, range(1, 60), StrikeKind::Halfway);
    const auto a = curve(SweepParameter::L, range(1, 60), StrikeKind::AtHole);
    for (std::size_t i = 0; i < h.size(); ++i) {
        EXPECT_GE(a[i], h[i]);
        if (i > 0) {
            EXPECT_LE(h[i], h[i - 1]);
            EXPECT_LE(a[i], a[i - 1]);
        }
        if (i + 1 >= 34) {
            EXPECT_EQ(a[i], h[i]) << "l = " << i + 1;
        }
    }
    EXPECT_NE(a[32], h[32]);  // l = 33 is the last split
}

TEST(Sweep, RadiusCurveMonotone) {
    for (double l : {1.0, 5.0, 10.0}) {
        PhysicalParams p;
        p.l_mm = l;
        for (auto kind : {StrikeKind::Halfway, StrikeKind::AtHole}) {
            const auto c = curve(SweepParameter::RMax, range(1, 100), kind, p);
            for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GE(c[i], c[i - 1]);
        }
    }
}

TEST(Sweep, RadiusBandsFrozen) {
    auto ends = [](double l, StrikeKind k) {
        PhysicalParams p;
        p.l_mm = l;
        const auto c = curve(SweepParameter::RMax, range(1, 100), k, p);
        return std::pair{c.front(), c.back()};
    };
    EXPECT_EQ(ends(1, StrikeKind::Halfway), (std::pair{8, 71}));
    EXPECT_EQ(ends(1, StrikeKind::AtHole), (std::pair{12, 106}));
    EXPECT_EQ(ends(5, StrikeKind::Halfway), (std::pair{3, 20}));
    EXPECT_EQ(ends(5, StrikeKind::AtHole), (std::pair{4, 22}));
    EXPECT_EQ(ends(10, StrikeKind::Halfway), (std::pair{2, 11}));
    EXPECT_EQ(ends(10, StrikeKind::AtHole), (std::pair{3, 12}));
}

TEST(Sweep, LatencyCurveMonotone) {
    for (auto kind : {StrikeKind::Halfway, StrikeKind::AtHole}) {
        const auto c = curve(SweepParameter::Delta, range(1, 25), kind);
        for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GE(c[i], c[i - 1]);
    }
}

TEST(SweepCsv, RoundTrips) {
    PhysicalParams p;
    p.v_p_mm_per_us = 40;  // makes the tail infeasible
    SweepResult r = sweep(SweepParameter::Delta, range(1, 25), p);
    bool has_na = false;
    for (const auto& row : r.rows) has_na = has_na || !row.min_d;
    ASSERT_TRUE(has_na);
    std::stringstream s;
    write_sweep_csv(s, r);
    EXPECT_EQ(read_sweep_csv(s), r);
}

TEST(SweepCsv, FormatIsFixed) {
    SweepOptions opt;
    opt.scenarios = {StrikeKind::Halfway};
    std::ostringstream s;
    write_sweep_csv(s, sweep(SweepParameter::L, {1.5}, PhysicalParams{}, opt));
    EXPECT_EQ(s.str(), "param,value,scenario,min_d,feasible\nl_mm,1.5,halfway,35,true\n");
}

TEST(SweepCsv, RejectsInconsistentRows) {
    std::istringstream s("param,value,scenario,min_d,feasible\nl_mm,1,halfway,NA,true\n");
    EXPECT_THROW(read_sweep_csv(s), std::exception);
}
