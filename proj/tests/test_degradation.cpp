#include "cbm/degradation.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cbm;

TEST(GammaCdf, MatchesSeriesOracle) {
    for (double shape : {0.3, 0.542 * 12, 1.0, 2.5, 7.0, 25.0}) {
        for (double rate : {0.2, 1.147, 3.0}) {
            for (double x : {0.01, 0.5, 2.0, 5.0, 12.0, 40.0}) {
                EXPECT_NEAR(gamma_increment_cdf(x, shape, rate), oracle::lower_gamma_p(shape, rate * x), 1e-10)
                    << shape << ' ' << rate << ' ' << x;
            }
        }
    }
}

TEST(GammaCdf, ExponentialSpecialCase) {
    EXPECT_NEAR(gamma_increment_cdf(1.3863, 1.0, 1.0), 0.75, 1e-4);
    EXPECT_NEAR(gamma_increment_cdf(std::log(4.0), 1.0, 1.0), 0.75, 1e-14);
    EXPECT_EQ(gamma_increment_cdf(0.0, 2.0, 1.0), 0.0);
    EXPECT_EQ(gamma_increment_cdf(INFINITY, 2.0, 1.0), 1.0);
}

TEST(GammaCdf, RejectsBadArguments) {
    EXPECT_THROW(gamma_increment_cdf(-1.0, 1.0, 1.0), std::domain_error);
    EXPECT_THROW(gamma_increment_cdf(NAN, 1.0, 1.0), std::domain_error);
    EXPECT_THROW(gamma_increment_cdf(1.0, 0.0, 1.0), std::domain_error);
    EXPECT_THROW(gamma_increment_cdf(1.0, 1.0, -2.0), std::domain_error);
    EXPECT_THROW(compound_gamma_increment_cdf(1.0, 1.0, 0.0, 1.0), std::domain_error);
    EXPECT_THROW(compound_gamma_increment_cdf(1.0, 1.0, 1.0, -1.0), std::domain_error);
    EXPECT_THROW(GammaProcessParams::fixed(-1.0, 1.0).validate(), std::domain_error);
}

TEST(CompoundCdf, MatchesMixtureIntegral) {
    for (double x : {0.05, 0.2, 0.7, 1.5, 3.0}) {
        EXPECT_NEAR(compound_gamma_increment_cdf(x, 1.0824, 8.556, 7.654),
                    oracle::mixed_gamma_cdf(x, 1.0824, 8.556, 7.654), 1e-7)
            << x;
    }
    EXPECT_NEAR(compound_gamma_increment_cdf(2.0, 3.0, 2.0, 5.0), oracle::mixed_gamma_cdf(2.0, 3.0, 2.0, 5.0), 1e-7);
}

TEST(CompoundCdf, MonteCarlo) {
    std::mt19937_64 gen(99);
    const double shape = 1.0824, kappa = 8.556, lambda = 7.654;
    std::gamma_distribution<double> rate_dist(kappa, 1.0 / lambda);
    const int draws = 200000;
    std::vector<double> xs(draws);
    for (auto& v : xs) {
        std::gamma_distribution<double> inc(shape, 1.0 / rate_dist(gen));
        v = inc(gen);
    }
    for (double probe : {0.1, 0.5, 1.0, 2.0}) {
        const double p = compound_gamma_increment_cdf(probe, shape, kappa, lambda);
        double hit = 0;
        for (double v : xs) hit += v <= probe;
        const double se = std::sqrt(p * (1 - p) / draws);
        EXPECT_NEAR(hit / draws, p, 4 * se) << probe;
    }
}

TEST(CompoundCdf, ConvergesToFixedRate) {
    const double rate = 1.3, kappa = 1e6;
    for (double x : {0.3, 1.0, 2.5}) {
        EXPECT_NEAR(compound_gamma_increment_cdf(x, 2.0, kappa, kappa / rate), gamma_increment_cdf(x, 2.0, rate), 1e-3);
    }
}

TEST(StateGrid, EqualWidthBins) {
    const auto g = make_state_grid(20.0, 11);
    ASSERT_EQ(g.bin_edges.size(), 10u);
    for (int b = 1; b <= 10; ++b) EXPECT_DOUBLE_EQ(g.upper_edge(b), 2.0 * b);
    EXPECT_EQ(g.level(1), 0.0);
    EXPECT_DOUBLE_EQ(g.level(2), 3.0);
    EXPECT_DOUBLE_EQ(g.level(10), 19.0);

    const auto p = make_state_grid(2.0, 11);
    EXPECT_NEAR(p.upper_edge(1), 0.2, 1e-15);
    EXPECT_EQ(p.upper_edge(10), 2.0);

    const auto two = make_state_grid(1.0, 2);
    EXPECT_EQ(two.bin_edges, std::vector<double>{1.0});
    EXPECT_THROW(make_state_grid(1.0, 1), std::invalid_argument);
    EXPECT_THROW(make_state_grid(0.0, 5), std::invalid_argument);
}

TEST(TransitionMatrix, EntriesMatchOracle) {
    const auto grid = make_state_grid(20.0, 11);
    const auto params = GammaProcessParams::fixed(2.3, 0.7);
    const auto q = build_transition_matrix(params, grid, 1.0);
    auto F = [&](double x) { return x <= 0 ? 0.0 : oracle::lower_gamma_p(2.3, 0.7 * x); };
    for (int g = 1; g < 11; ++g) {
        const double d = g == 1 ? 0.0 : 2.0 * (g - 0.5);
        for (int h = 1; h < 11; ++h) {
            const double expect = h < g ? 0.0 : F(2.0 * h - d) - F(h == g ? (g == 1 ? 0.0 : 2.0 * (g - 1) - d) : 2.0 * (h - 1) - d);
            EXPECT_NEAR(q(g, h), expect, 1e-10) << g << ' ' << h;
        }
        EXPECT_NEAR(q(g, 11), 1.0 - F(20.0 - d), 1e-10);
    }
    EXPECT_EQ(q(11, 11), 1.0);
}

TEST(TransitionMatrix, RandomMatricesAreWellFormed) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> a(0.1, 6.0), r(0.1, 3.0), tau(0.5, 12.0);
    for (int k = 0; k < 300; ++k) {
        const int m = 2 + k % 12;
        const auto grid = make_state_grid(k % 2 ? 20.0 : 2.0, m);
        const auto params = k % 3 == 0 ? GammaProcessParams::with_random_effect(a(gen), a(gen), r(gen))
                                       : GammaProcessParams::fixed(a(gen), r(gen));
        const auto q = build_transition_matrix(params, grid, tau(gen));
        EXPECT_EQ(q.check(1e-9), "");
        for (int g = 1; g <= m; ++g) {
            for (int h = 1; h < g; ++h) EXPECT_EQ(q(g, h), 0.0);
            if (g > 1) {
                EXPECT_GE(q.failure_prob(g), q.failure_prob(g - 1) - 1e-12);
            }
        }
    }
}

TEST(TransitionMatrix, NewComponentFailureMonteCarlo) {
    // yearly inspection of the blade model: P(increment over 12 units >= 20)
    const auto q = build_transition_matrix(GammaProcessParams::fixed(0.542, 1.147), make_state_grid(20.0, 11), 12.0);
    std::mt19937_64 gen(3);
    std::gamma_distribution<double> inc(0.542 * 12, 1.0 / 1.147);
    const int draws = 400000;
    int fails = 0;
    for (int i = 0; i < draws; ++i) fails += inc(gen) >= 20.0;
    const double p = q.failure_prob(1);
    EXPECT_NEAR(static_cast<double>(fails) / draws, p, 4 * std::sqrt(p * (1 - p) / draws));
}

TEST(TransitionMatrix, RejectsBadInterval) {
    EXPECT_THROW(build_transition_matrix(GammaProcessParams::fixed(1, 1), make_state_grid(1, 3), 0.0),
                 std::invalid_argument);
    EXPECT_THROW(build_transition_matrix(GammaProcessParams::fixed(0, 1), make_state_grid(1, 3), 1.0),
                 std::domain_error);
}
