#include "cbm/multistage.hpp"
#include "cbm/bench.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cbm;

namespace {

SystemInstance with_horizon(SystemInstance inst, int T) {
    inst.horizon = T;
    return inst;
}

}  // namespace

TEST(ExactMultistage, TwoStagesReduceToAlgorithm1) {
    std::mt19937_64 gen(51);
    for (int k = 0; k < 200; ++k) {
        const auto inst = oracle::random_instance(1 + k % 3, 3 + k % 4, gen);
        const double v = exact_multistage(inst).value;
        const double a = algorithm1(inst).cost;
        EXPECT_NEAR(v, a, 1e-9 * std::max(1.0, a));
    }
}

TEST(ExactMultistage, MatchesScenarioTree) {
    std::mt19937_64 gen(53);
    for (int k = 0; k < 12; ++k) {
        const std::size_t n = k < 8 ? 2 : 3;
        const auto inst = with_horizon(oracle::random_instance(n, 4, gen), 3);
        const auto sol = exact_multistage(inst);
        const double tree = oracle::tree_value(inst, inst.states(), 1);
        EXPECT_NEAR(sol.value, tree, 1e-10 * tree);
        // every stage-2 state too
        for (int a = 1; a <= 4; ++a) {
            std::vector<int> s(n, a);
            EXPECT_NEAR(sol.value_at(2, s), oracle::tree_value(inst, s, 2), 1e-10 * std::max(1.0, sol.value_at(2, s)));
        }
    }
    const auto inst = with_horizon(oracle::random_instance(2, 5, gen), 4);
    EXPECT_NEAR(exact_multistage(inst).value, oracle::tree_value(inst, inst.states(), 1), 1e-9);
}

TEST(ExactMultistage, MonotoneInCosts) {
    std::mt19937_64 gen(57);
    for (int k = 0; k < 30; ++k) {
        const auto inst = with_horizon(oracle::random_instance(3, 5, gen), 4);
        const double v = exact_multistage(inst).value;
        auto more_setup = inst;
        more_setup.setup_cost *= 1.5;
        EXPECT_GE(exact_multistage(more_setup).value, v - 1e-9);
        auto more_cm = inst;
        more_cm.components[k % 3].cm_cost += 5.0;
        EXPECT_GE(exact_multistage(more_cm).value, v - 1e-9);
        auto longer = with_horizon(inst, 5);
        EXPECT_GE(exact_multistage(longer).value, v - 1e-9);
    }
}

TEST(ExactMultistage, PolicyIsFeasible) {
    std::mt19937_64 gen(59);
    const auto inst = with_horizon(oracle::random_instance(3, 5, gen), 3);
    const auto sol = exact_multistage(inst);
    for (std::size_t idx = 0; idx < sol.space.size(); ++idx) {
        const auto s = sol.space.decode(idx);
        EXPECT_EQ(sol.space.encode(s), idx);
        const auto d = sol.decision_at(1, s, inst.m);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_TRUE(s[i] != inst.m || d.y.contains(i));
        }
    }
}

TEST(ExactMultistage, Guards) {
    std::mt19937_64 gen(61);
    EXPECT_THROW(exact_multistage(oracle::random_instance(5, 3, gen)), GuardError);
    EXPECT_THROW(exact_multistage(oracle::random_instance(2, 13, gen)), GuardError);
    EXPECT_THROW(exact_multistage(with_horizon(oracle::random_instance(2, 3, gen), 7)), GuardError);
}

TEST(RollingHorizon, DeterministicDegradationHasNoVariance) {
    SystemInstance inst;
    inst.m = 4;
    inst.setup_cost = 10.0;
    inst.horizon = 5;
    for (int i = 0; i < 2; ++i) {
        ComponentSpec c;
        c.id = i + 1;
        c.pm_cost = 2.0;
        c.cm_cost = 30.0;
        c.state = 1 + i;
        c.transition = TransitionMatrix(4);
        c.transition(1, 2) = c.transition(2, 3) = c.transition(3, 4) = c.transition(4, 4) = 1.0;
        inst.components.push_back(c);
    }
    const auto sim = simulate_rolling_horizon(inst, 50, 3);
    EXPECT_EQ(sim.std_dev, 0.0);
    const double exact = exact_multistage(inst).value;
    EXPECT_GE(sim.mean, exact - 1e-9);
    EXPECT_EQ(sim.sample.stages.size(), 5u);
}

TEST(RollingHorizon, ReproducibleAndAboveExact) {
    BenchConfig cfg;
    for (std::uint64_t k = 0; k < 4; ++k) {
        const auto inst = sample_instance(cfg, 2 + k % 2, k, 3 + static_cast<int>(k % 3));
        const auto a = simulate_rolling_horizon(inst, 300, 9);
        const auto b = simulate_rolling_horizon(inst, 300, 9);
        EXPECT_EQ(a.mean, b.mean);
        EXPECT_EQ(a.std_dev, b.std_dev);
        const double exact = exact_multistage(inst).value;
        EXPECT_GE(a.mean, exact - 3 * a.std_error());
        double total = 0.0;
        for (const auto& sp : a.sample.stages) total += sp.cost;
        EXPECT_NEAR(total, a.sample.total_cost, 1e-9);
    }
}

TEST(RollingHorizon, SampledTransitionsFollowRows) {
    BenchConfig cfg;
    const auto inst = sample_instance(cfg, 1, 3);
    Rng rng(4);
    const auto d = decision_for({5}, inst.m, ComponentSet(1));
    std::vector<double> freq(static_cast<std::size_t>(inst.m), 0.0);
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) freq[static_cast<std::size_t>(sample_next_states(inst, {5}, d, rng)[0] - 1)] += 1.0 / draws;
    for (int h = 1; h <= inst.m; ++h) {
        const double p = inst.components[0].transition(5, h);
        EXPECT_NEAR(freq[static_cast<std::size_t>(h - 1)], p, 5 * std::sqrt(p * (1 - p) / draws) + 1e-12);
    }
}
