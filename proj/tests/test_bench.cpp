#include "cbm/bench.hpp"

#include <gtest/gtest.h>

using namespace cbm;

TEST(SampleInstance, ParameterRanges) {
    BenchConfig cfg;
    cfg.seed = 3;
    for (std::uint64_t k = 0; k < 50; ++k) {
        const auto inst = sample_instance(cfg, 12, k);
        ASSERT_EQ(inst.size(), 12u);
        EXPECT_EQ(inst.setup_cost, 20.0);
        EXPECT_EQ(inst.m, 11);
        for (const auto& c : inst.components) {
            ASSERT_TRUE(c.degradation.has_value());
            EXPECT_GE(c.degradation->alpha, 1.0);
            EXPECT_LE(c.degradation->alpha, 5.0);
            EXPECT_GE(c.degradation->rate, 0.2);
            EXPECT_LE(c.degradation->rate, 1.0);
            EXPECT_GE(c.pm_cost, 1.0);
            EXPECT_LE(c.pm_cost, 5.0);
            EXPECT_GE(c.cm_cost, 10.0);
            EXPECT_LE(c.cm_cost, 30.0);
            EXPECT_GE(c.state, 1);
            EXPECT_LE(c.state, 11);
        }
        EXPECT_FALSE(has_violations(validate_instance(inst)));
    }
}

TEST(SampleInstance, DeterministicPerIndex) {
    BenchConfig cfg;
    const auto a = sample_instance(cfg, 8, 5);
    const auto b = sample_instance(cfg, 8, 5);
    const auto c = sample_instance(cfg, 8, 6);
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_EQ(a.components[i].transition, b.components[i].transition);
        EXPECT_EQ(a.components[i].state, b.components[i].state);
    }
    bool differs = false;
    for (std::size_t i = 0; i < 8; ++i) differs |= a.components[i].pm_cost != c.components[i].pm_cost;
    EXPECT_TRUE(differs);
}

TEST(TwoStageBench, ReproducibleRowsAndNoViolations) {
    BenchConfig cfg;
    cfg.n_values = {3, 7};
    cfg.instances_per_n = 15;
    cfg.seed = 11;
    const auto a = run_two_stage_bench(cfg);
    const auto b = run_two_stage_bench(cfg);
    EXPECT_TRUE(a.ok());
    EXPECT_EQ(two_stage_rows_csv(a), two_stage_rows_csv(b));
    ASSERT_EQ(a.two_stage_summary.size(), 2u);
    EXPECT_EQ(a.two_stage_summary[0].instances, 15u);
    EXPECT_EQ(a.two_stage_summary[0].max_brute_error, 0.0);
    const auto doc = report_to_json(a);
    EXPECT_TRUE(doc["ok"].get<bool>());
    EXPECT_EQ(doc["two_stage_rows"].size(), 30u);
}

TEST(MultistageBench, GapsAndGuard) {
    BenchConfig cfg;
    cfg.cells = {{2, 3}};
    cfg.replications = 200;
    const auto r = run_multistage_bench(cfg);
    ASSERT_EQ(r.multistage.size(), 1u);
    EXPECT_TRUE(r.multistage[0].lower_bound_ok);
    EXPECT_EQ(multistage_csv(r), multistage_csv(run_multistage_bench(cfg)));
    cfg.cells = {{4, 3}};
    EXPECT_THROW(run_multistage_bench(cfg), GuardError);
}

TEST(BenchConfig, JsonAndValidation) {
    const auto cfg = bench_config_from_json(json::parse(R"({"n_values":[4],"alpha":[2,3],"J_values":[2],"seed":9})"));
    EXPECT_EQ(cfg.n_values, std::vector<std::size_t>{4});
    EXPECT_EQ(cfg.alpha.lo, 2.0);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_THROW(bench_config_from_json(json::parse(R"({"alpha":[3,2]})")), SchemaError);
    EXPECT_THROW(bench_config_from_json(json::parse(R"({"M":1})")), SchemaError);
    EXPECT_THROW(bench_config_from_json(json::parse(R"({"n_values":"x"})")), SchemaError);
}
