#include <gtest/gtest.h>

#include "mtswarm/error.hpp"
#include "mtswarm/experiment.hpp"

namespace mtswarm::experiment {
namespace {

TEST(Plan, ForagingCellsInPlanOrder) {
    const auto plan = parse_plan(R"({"robots": [1, 4], "n": [2, 8], "k": 3, "seed": 10,
                                     "network": {"latency_ticks": 2, "drop_prob": 0.1}})");
    EXPECT_EQ(plan.k, 3u);
    EXPECT_EQ(plan.network.latency_ticks, 2);
    const auto cells = plan_cells(plan);
    ASSERT_EQ(cells.size(), 4u);
    EXPECT_EQ(cells[0].robots, 1u);
    EXPECT_EQ(cells[0].mission.operations.size(), 2u);
    EXPECT_EQ(cells[1].mission.operations.size(), 8u);
    EXPECT_EQ(cells[3].robots, 4u);
}

TEST(Plan, MazeDefaultsToTheShippedBlueprint) {
    const auto plan = parse_plan(R"({"mission_kind": "maze", "robots": [16], "arena": {"time_cap": 100}})");
    ASSERT_TRUE(plan.mission.has_value());
    EXPECT_EQ(plan.mission->operations.size(), 16u);
    EXPECT_EQ(plan.mission->arena.time_cap, 100.0);
    EXPECT_EQ(plan_cells(plan).size(), 1u);
}

TEST(Plan, Errors) {
    EXPECT_THROW(parse_plan(R"({"robots": [2]})"), FormatError);
    EXPECT_THROW(parse_plan(R"({"robots": [2], "n": [2], "k": 0})"), FormatError);
    EXPECT_THROW(parse_plan(R"({"robots": [0], "n": [2]})"), FormatError);
    EXPECT_THROW(parse_plan(R"({"robots": [2], "n": [2], "network": {"drop_prob": 1.5}})"), FormatError);
    EXPECT_THROW(parse_plan(R"({"mission_kind": "swim", "robots": [2]})"), FormatError);
    EXPECT_THROW(parse_plan("{\"robots\": [2],\n \"n\": [2,]}"), FormatError);
}

TEST(Sweep, EveryCellGetsKRunsAndJobsDoNotChangeResults) {
    auto plan = parse_plan(R"({"robots": [2, 3], "n": [2], "k": 4, "seed": 7})");
    const auto one = run_sweep(plan, 1);
    const auto many = run_sweep(plan, 3);
    ASSERT_EQ(one.cells.size(), 2u);
    for (const auto& c : one.cells) {
        EXPECT_EQ(c.runs.size(), 4u);
        ASSERT_TRUE(c.report.has_value());
        EXPECT_EQ(c.report->k, 4u);
    }
    EXPECT_EQ(runs_csv(one), runs_csv(many));
    EXPECT_EQ(metrics_csv(one), metrics_csv(many));
    EXPECT_EQ(one.cells[0].runs[2].seed, 9u);
}

TEST(Sweep, FailedRunsAreRecordedNotFatal) {
    auto plan = parse_plan(R"({"robots": [400], "n": [2], "k": 2, "arena": {"side": 0.5}})");
    const auto result = run_sweep(plan, 1);
    EXPECT_EQ(result.errors.size(), 2u);
    EXPECT_FALSE(result.cells[0].report.has_value());
}

TEST(Bench, MemoryColumnAndTimingsArePositive) {
    const std::size_t ns[] = {100, 7541};
    const auto rows = bench(ns, 3, 1);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].memory_bytes, metrics::memory_footprint(7541));
    EXPECT_EQ(rows[1].ac_per_robot_bytes, 7541u * 15 * 32);
    EXPECT_GT(rows[1].generate_s.mean, 0.0);
    EXPECT_GE(rows[0].prove_s.mean, 0.0);
    EXPECT_NE(bench_table(rows).find("7541"), std::string::npos);
    const std::size_t one[] = {16};
    EXPECT_EQ(bench(one, 1)[0].generate_s.stddev, 0.0);
}

}  // namespace
}  // namespace mtswarm::experiment
