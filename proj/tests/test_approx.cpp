#include <cmath>

#include <gtest/gtest.h>

#include "dimfree/apps/approx.hpp"
#include "support/generators.hpp"

using namespace dimfree;

namespace {

ApproxScenario identity_split(int k) {
    ApproxScenario sc;
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a(0, 0) = 1;
    b(1, 1) = 1;
    sc.summands = {a, b};
    sc.probabilities = {0.5, 0.5};
    sc.k = k;
    sc.epsilon = 1.0;
    return sc;
}

} // namespace

TEST(Approx, SingleSummandIsExact) {
    ApproxScenario sc;
    gen::Source src(61);
    sc.summands = {src.matrix(3, 4)};
    sc.probabilities = {1.0};
    sc.k = 5;
    auto r = run_approximation(sc, 50, 1);
    EXPECT_NEAR(r.mean_error_ratio, 0.0, 1e-14);
    EXPECT_TRUE(r.condition_ok);
}

TEST(Approx, TwoBlockSplitKOne) {
    auto r = run_approximation(identity_split(1), 500, 2);
    EXPECT_NEAR(r.mean_error_ratio, 1.0, 1e-14);
    EXPECT_NEAR(r.standard_error, 0.0, 1e-14);
}

// Each coordinate of the K=100 average is Bin(100, 1/2) * 2 / 100; the error is max |2X/100 - 1|
// over the two coordinates, which are perfectly anti-correlated so both deviations agree.
TEST(Approx, TwoBlockSplitLargeKMatchesBinomialOracle) {
    double expected = 0.0;
    double logc = 0.0;
    for (int x = 0; x <= 100; ++x) {
        if (x > 0) logc += std::log((100.0 - x + 1) / x);
        expected += std::exp(logc - 100 * std::log(2.0)) * std::abs(2.0 * x / 100 - 1);
    }
    auto r = run_approximation(identity_split(100), 1000, 3);
    EXPECT_LT(r.mean_error_ratio, 1.0);
    EXPECT_NEAR(r.mean_error_ratio, expected, 4 * r.standard_error);
}

TEST(Approx, Unbiasedness) {
    gen::Source src(62);
    for (int rep = 0; rep < 200; ++rep) {
        ApproxScenario sc;
        int l = src.integer(1, 8), m = src.integer(1, 5), n = src.integer(1, 5);
        double tot = 0;
        for (int i = 0; i < l; ++i) {
            sc.summands.push_back(src.matrix(m, n, src.log_uniform(0.01, 100)));
            sc.probabilities.push_back(src.uniform(0.05, 1));
            tot += sc.probabilities.back();
        }
        for (double& p : sc.probabilities) p /= tot;
        Matrix diff = estimator_mean(sc) - target_matrix(sc);
        double scale = std::max(1.0, target_matrix(sc).cwiseAbs().maxCoeff());
        EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-12 * scale * l);
    }
}

TEST(Approx, Errors) {
    ApproxScenario sc = identity_split(1);
    sc.summands = {Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
    try {
        run_approximation(sc, 10, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ZeroMuB);
    }
    sc = identity_split(1);
    sc.probabilities = {0.5, 0.6};
    EXPECT_THROW(run_approximation(sc, 10, 0), Error);
}

TEST(Approx, DeterministicAcrossThreads) {
    auto a = run_approximation(identity_split(7), 300, 5, 1);
    auto b = run_approximation(identity_split(7), 300, 5, 4);
    EXPECT_EQ(a.mean_error_ratio, b.mean_error_ratio);
}

TEST(Approx, ConditionAndThreshold) {
    auto sc = identity_split(4);
    // every copy deviates by 1 from the identity; threshold sqrt(1 + 2 eps) - 1
    EXPECT_NEAR(worst_copy_deviation(sc), 1.0, 1e-14);
    EXPECT_NEAR(smallest_admissible_epsilon(sc), 1.5, 1e-14);
    sc.epsilon = 1.5;
    EXPECT_TRUE(run_approximation(sc, 20, 0).condition_ok);
    sc.epsilon = 1.0;
    EXPECT_FALSE(run_approximation(sc, 20, 0).condition_ok);
    EXPECT_NEAR(copy_deviation_threshold(1.5, 1.0), 1.0, 1e-15);
}

TEST(Approx, BoundRatioEqualsEpsilon) {
    auto sc = identity_split(3);
    for (double c : {0.1, 1.0, 10.0}) {
        sc.c = c;
        sc.epsilon = 1.7;
        EXPECT_NEAR(run_approximation(sc, 5, 0).bound_ratio, 1.7, 1e-12);
    }
}

TEST(Tropp, Examples) {
    EXPECT_EQ(tropp_sample_count(1, 1, 1, 1, 1), 2);
    EXPECT_EQ(tropp_sample_count(1, 1, 1, 1, 1e9), 1);
    EXPECT_EQ(tropp_sample_count(3, 3, 0, 0, 1), 1);
}

TEST(CopyMoments, Identity) {
    auto m = copy_moments(identity_split(1));
    // R is 2 e_i e_i^T: E R R^T = diag(2, 2), max ||R|| = 2
    EXPECT_NEAR(m.m2, 2.0, 1e-14);
    EXPECT_NEAR(m.L, 2.0, 1e-14);
}
