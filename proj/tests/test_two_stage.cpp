#include "cbm/two_stage.hpp"
#include "cbm/bench.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cbm;

TEST(BruteForce, MatchesOracleMinimum) {
    std::mt19937_64 gen(31);
    for (int k = 0; k < 400; ++k) {
        const auto inst = oracle::random_instance(1 + k % 9, 3 + k % 9, gen);
        const auto sol = brute_force_two_stage(inst);
        const double expect = oracle::best_cost(inst);
        EXPECT_NEAR(sol.cost, expect, 1e-10 * std::max(1.0, expect));
        EXPECT_TRUE(is_feasible(inst, sol.partition));
    }
}

TEST(BruteForce, Guard) {
    std::mt19937_64 gen(1);
    const auto inst = oracle::random_instance(21, 4, gen);
    EXPECT_THROW(brute_force_two_stage(inst), GuardError);
}

TEST(Algorithm1, OptimalOnRandomInstances) {
    std::mt19937_64 gen(41);
    for (int k = 0; k < 3000; ++k) {
        const auto inst = oracle::random_instance(2 + k % 10, 3 + k % 10, gen);
        const auto a = algorithm1(inst);
        const double expect = oracle::best_cost(inst);
        ASSERT_TRUE(a.partition.is_partition_of(inst.size()));
        EXPECT_NEAR(a.cost, expect, 1e-9 * std::max(1.0, expect)) << "instance " << k;
        EXPECT_TRUE(inst.failed_set().is_subset_of(a.partition.n1));
    }
}

TEST(Algorithm1, OptimalOnGammaInstances) {
    BenchConfig cfg;
    cfg.seed = 77;
    for (std::size_t n = 2; n <= 10; ++n) {
        for (std::uint64_t k = 0; k < 40; ++k) {
            const auto inst = sample_instance(cfg, n, k);
            const double expect = oracle::best_cost(inst);
            EXPECT_NEAR(algorithm1(inst).cost, expect, 1e-9 * std::max(1.0, expect));
        }
    }
}

TEST(Algorithm1, TraceReplaysToResult) {
    std::mt19937_64 gen(43);
    for (int k = 0; k < 300; ++k) {
        const auto inst = oracle::random_instance(8, 6, gen);
        const auto a = algorithm1(inst);
        ComponentSet n0(8), n1 = inst.failed_set();
        for (const auto& mv : a.trace.moves) {
            EXPECT_FALSE(mv.set.intersects(n0 | n1));
            EXPECT_LE(mv.cardinality, a.trace.j_max + (a.trace.tie_resolved ? 8 : 0));
            (mv.destination == Destination::maintain ? n1 : n0) |= mv.set;
        }
        EXPECT_EQ(n0, a.partition.n0);
        EXPECT_EQ(n1, a.partition.n1);
        EXPECT_GE(a.trace.j_max, 1u);
    }
}

TEST(Algorithm1, WideInstances) {
    BenchConfig cfg;
    const auto inst = sample_instance(cfg, 100, 0);
    const auto a = algorithm1(inst);
    EXPECT_TRUE(a.partition.is_partition_of(100));
    EXPECT_NEAR(a.cost, two_stage_total_cost(inst, a.partition), 1e-9 * a.cost);
    // no single-component flip improves the result
    for (std::size_t i = 0; i < 100; ++i) {
        if (inst.components[i].state == inst.m) continue;
        auto q = a.partition;
        if (q.n1.contains(i)) {
            q.n1.erase(i);
            q.n0.insert(i);
        } else {
            q.n0.erase(i);
            q.n1.insert(i);
        }
        EXPECT_GE(two_stage_total_cost(inst, q), a.cost - 1e-9 * a.cost);
    }
}

TEST(Algorithm1, CapLeavesComponentsUndetermined) {
    BenchConfig cfg;
    bool saw_cap = false;
    for (std::uint64_t k = 0; k < 200 && !saw_cap; ++k) {
        const auto inst = sample_instance(cfg, 12, k);
        Algo1Options opts;
        opts.max_cardinality = 1;
        const auto r = algorithm1_search(inst, opts);
        if (r.trace.capped) {
            saw_cap = true;
            EXPECT_FALSE(r.undetermined.empty());
            EXPECT_FALSE(r.undetermined.intersects(r.partition.n0 | r.partition.n1));
        }
    }
    EXPECT_TRUE(saw_cap);
}

TEST(Algorithm2, DeterministicAndNeverBetterThanExact) {
    BenchConfig cfg;
    for (std::uint64_t k = 0; k < 200; ++k) {
        const auto inst = sample_instance(cfg, 15, k);
        const double exact = algorithm1(inst).cost;
        for (std::size_t J : {1u, 2u, 3u}) {
            const auto a = algorithm2(inst, Algo2Config{J, 100, 5}, k);
            const auto b = algorithm2(inst, Algo2Config{J, 100, 5}, k);
            EXPECT_EQ(a.partition.n1, b.partition.n1);
            EXPECT_EQ(a.cost, b.cost);
            EXPECT_GE(a.cost, exact - 1e-9 * exact);
            EXPECT_NEAR(a.cost, two_stage_total_cost(inst, a.partition), 1e-9 * a.cost);
        }
        const auto full = algorithm2(inst, Algo2Config{15, 100, 5}, k);
        EXPECT_NEAR(full.cost, exact, 1e-12 * exact);
        EXPECT_EQ(full.undetermined_after_search, 0u);
    }
    EXPECT_THROW(algorithm2(sample_instance(cfg, 3, 0), Algo2Config{0, 100, 1}), std::invalid_argument);
    EXPECT_THROW(algorithm2(sample_instance(cfg, 3, 0), Algo2Config{1, 1, 1}), std::invalid_argument);
}

TEST(DecomposedCost, EqualsDirectCost) {
    std::mt19937_64 gen(47);
    for (int k = 0; k < 500; ++k) {
        const auto inst = oracle::random_instance(1 + k % 6, 4, gen);
        const auto p = algorithm1(inst).partition;
        EXPECT_NEAR(decomposed_partition_cost(inst, p), two_stage_total_cost(inst, p), 1e-10 * 100);
    }
}
