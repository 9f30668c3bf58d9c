#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "crflee/reliability.hpp"
#include "oracles.hpp"

using namespace crflee;

namespace {

Mapping tiny_mapping(int d = 2) {
    PhysicalParams p;
    p.d = d;
    return build_mapping(1, 1, p);
}

}  // namespace

TEST(HoleHitFrame, CellCounts) {
    EXPECT_DOUBLE_EQ(p_hole_hit_frame(), 0.04);
    EXPECT_DOUBLE_EQ(p_hole_hit_frame(20, 5), 0.02);
    EXPECT_DOUBLE_EQ(p_hole_hit_frame(2, 1), 1.0);
    EXPECT_THROW(p_hole_hit_frame(1, 1), std::invalid_argument);
}

TEST(FewHits, NoEventsMeansCertainty) { EXPECT_EQ(p_few_hits(2, 0.0, 5.0), 1.0); }

TEST(FewHits, DistanceTwo) { EXPECT_NEAR(p_few_hits(2, 0.1, 1.0), std::exp(-0.1), 1e-15); }

TEST(FewHits, RejectsTinyDistance) { EXPECT_THROW(p_few_hits(1, 0.1, 1.0), std::invalid_argument); }

TEST(FewHits, MatchesHighPrecisionReference) {
    for (int d : {2, 3, 4, 7, 12, 25, 50, 100, 150, 200}) {
        for (double mu : {1e-9, 1e-4, 0.01, 0.1, 0.5, 1.0, 2.5, 4.0, 7.0, 10.0}) {
            const double ref = oracle::poisson_cdf(d, mu);
            EXPECT_LT(std::abs(p_few_hits(d, mu, 1.0) - ref) / ref, 1e-12) << "d=" << d << " mu=" << mu;
        }
    }
}

TEST(FewHits, Monotone) {
    for (double mu : {0.1, 1.0, 5.0}) {
        double prev = 0;
        for (int d = 2; d <= 60; ++d) {
            const double v = p_few_hits(d, mu, 1.0);
            EXPECT_GE(v, prev);
            prev = v;
        }
        EXPECT_NEAR(prev, 1.0, 1e-12);
    }
    for (int d : {2, 5, 20}) {
        double prev = 1;
        for (double mu = 0; mu <= 10; mu += 0.25) {
            const double v = p_few_hits(d, mu, 1.0);
            EXPECT_LE(v, prev + 1e-15);  // rounding in the last place
            prev = v;
        }
    }
}

TEST(FailureProbability, Endpoints) {
    EXPECT_NEAR(failure_probability({0.1, 0.0, 2, 2.0 / 50}), 0.04, 1e-12);
    EXPECT_EQ(failure_probability({0.1, 0.0, 2, 0.0}), 0.0);
    EXPECT_NEAR(failure_probability({0.1, 1.0, 2, 2.0 / 50}), 1 - 0.96 * std::exp(-0.1), 1e-15);
    EXPECT_NEAR(failure_probability({0.1, 1.0, 2, 2.0 / 50}), 0.131356, 1e-6);
}

TEST(FailureProbability, MonotoneAndBoundedBelow) {
    for (double ph : {0.0, 0.02, 0.04, 0.5}) {
        double prev = 0;
        for (double tau = 1e-4; tau <= 1.0; tau *= 1.5) {
            const double v = failure_probability({0.1, tau, 3, ph});
            EXPECT_GE(v, prev);
            EXPECT_GE(v, ph - 1e-15);
            prev = v;
        }
    }
    EXPECT_LE(failure_probability({0.1, 1, 2, 0.02}), failure_probability({0.1, 1, 2, 0.04}));
}

TEST(FailureProbability, RejectsInvalidParams) {
    EXPECT_THROW(failure_probability({-1, 1, 2, 0.04}), std::invalid_argument);
    EXPECT_THROW(failure_probability({0.1, -1, 2, 0.04}), std::invalid_argument);
    EXPECT_THROW(failure_probability({0.1, 1, 1, 0.04}), std::invalid_argument);
    EXPECT_THROW(failure_probability({0.1, 1, 2, 1.5}), std::invalid_argument);
}

TEST(MonteCarlo, RejectsZeroTrials) {
    EXPECT_THROW(monte_carlo_failure(tiny_mapping(), PhysicalParams{}, {}, 0, 1), std::invalid_argument);
}

TEST(MonteCarlo, DistantForcedStrikeNeverFails) {
    PhysicalParams p;
    p.d = 2;
    McOptions opt;
    opt.epicenter_region_mm = Rect{900, 900, 901, 901};
    for (McMode mode : {McMode::Paper, McMode::Simulator}) {
        opt.mode = mode;
        const auto e = monte_carlo_failure(tiny_mapping(), p, {0.0, 1.0, 2, 0.04}, 1, 42, opt);
        EXPECT_EQ(e.estimate, 0.0);
        EXPECT_EQ(e.trials, 1u);
    }
}

TEST(MonteCarlo, SameSeedSameEstimate) {
    const ReliabilityParams r{0.1, 1.0, 2, 0.04};
    PhysicalParams p;
    p.d = 2;
    const auto a = monte_carlo_failure(tiny_mapping(), p, r, 5000, 99);
    const auto b = monte_carlo_failure(tiny_mapping(), p, r, 5000, 99);
    EXPECT_EQ(a.failures, b.failures);
    McOptions threaded;
    threaded.threads = 3;
    EXPECT_EQ(monte_carlo_failure(tiny_mapping(), p, r, 5000, 99, threaded).failures, a.failures);
    EXPECT_NE(monte_carlo_failure(tiny_mapping(), p, r, 5000, 100).failures, a.failures);
}

TEST(MonteCarlo, ClosedFormModeAgreesWithFormula) {
    for (double tau : {1e-4, 0.3, 1.0, 10.0}) {
        const ReliabilityParams r{0.1, tau, 3, 0.04};
        PhysicalParams p;
        p.d = 3;
        const auto e = monte_carlo_failure(tiny_mapping(3), p, r, 40000, 5);
        const double expected = failure_probability(r);
        const double sigma = std::sqrt(expected * (1 - expected) / 40000.0);
        EXPECT_LT(std::abs(e.estimate - expected), 4 * sigma) << "tau=" << tau;
    }
}

TEST(MonteCarlo, SimulatorModeRuns) {
    PhysicalParams p;
    p.d = 8;
    p.r_max_mm = 5;
    McOptions opt;
    opt.mode = McMode::Simulator;
    opt.qubit = 1;
    const auto e = monte_carlo_failure(build_mapping(1, 1, p), p, {0.1, 1e-5, 8, 0.04}, 200, 3, opt);
    EXPECT_GE(e.estimate, 0.0);
    EXPECT_LE(e.estimate, 1.0);
}

TEST(ReliabilityCsv, Format) {
    std::ostringstream s;
    write_reliability_csv(s, {{0.5, 0.25, std::nullopt}, {1.0, 0.5, McEstimate{0.125, 0.0625, 1, 8}}});
    EXPECT_EQ(s.str(), "tau,analytic_failure,mc_failure,mc_halfwidth\n0.5,0.25,NA,NA\n1,0.5,0.125,0.0625\n");
}
