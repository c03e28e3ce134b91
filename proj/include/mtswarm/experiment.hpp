#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtswarm/metrics.hpp"
#include "mtswarm/mission.hpp"
#include "mtswarm/sim.hpp"

namespace mtswarm::experiment {

/// Grid of (R_n, n) cells with k seeded runs each.
///
/// JSON form:
///   {"mission_kind": "foraging", "robots": [1, 2, 4], "n": [2, 8], "k": 100,
///    "seed": 1, "network": {"latency_ticks": 0, "drop_prob": 0.0},
///    "arena": {...}, "mission_file": "maze.json", "t_step": 10,
///    "outputs": {"runs": "runs.csv", "metrics": "metrics.csv", "curves": "ps.csv"}}
/// Foraging cells take n from the list; a mission file (or the default maze
/// for maze plans) fixes the operations of every cell instead.
struct SweepPlan {
    mission::MissionKind kind = mission::MissionKind::Foraging;
    std::vector<std::size_t> robots;
    std::vector<std::size_t> n_values;
    std::optional<mission::MissionSpec> mission;
    std::size_t k = 1;
    std::uint64_t seed = 1;
    sim::NetworkConfig network;
    ArenaConfig arena;
    double t_step = 10.0;
    std::optional<std::filesystem::path> runs_csv;
    std::optional<std::filesystem::path> metrics_csv;
    std::optional<std::filesystem::path> curves_csv;
};

/// Relative mission_file and output paths resolve against base_dir.
/// Throws FormatError for malformed plans.
SweepPlan parse_plan(std::string_view json_text, const std::filesystem::path& base_dir = {});
SweepPlan load_plan(const std::filesystem::path& path);

struct CellSpec {
    std::size_t robots = 0;
    mission::MissionSpec mission;
};

/// Cells in plan order: robots outer, n inner.
std::vector<CellSpec> plan_cells(const SweepPlan& plan);

struct RunError {
    std::size_t cell = 0;
    std::uint64_t seed = 0;
    std::string message;
};

struct CellResult {
    CellSpec cell;
    std::vector<sim::RunRecord> runs;
    /// Empty when every run of the cell failed.
    std::optional<metrics::MetricsReport> report;
};

struct SweepResult {
    std::vector<CellResult> cells;
    std::vector<RunError> errors;
};

/// Runs every cell with seeds seed, seed + 1, ..., seed + k - 1. Work is spread
/// over `jobs` threads; results come back in plan order either way.
SweepResult run_sweep(const SweepPlan& plan, std::size_t jobs = 1);

std::string runs_csv(const SweepResult& result);
std::string metrics_csv(const SweepResult& result);

struct BenchRow {
    std::size_t n = 0;
    std::uint64_t memory_bytes = 0;
    /// Proof bytes one robot receives to learn a whole mission: n * P_l * |H|.
    std::uint64_t ac_per_robot_bytes = 0;
    metrics::Summary generate_s;
    metrics::Summary prove_s;
    metrics::Summary verify_s;
};

/// Times tree generation (leaf commitments from random operation strings plus
/// the tree), one proof and one verification, `repeats` times per n.
std::vector<BenchRow> bench(std::span<const std::size_t> n_values, std::size_t repeats, std::uint64_t seed = 1);

std::string bench_csv(std::span<const BenchRow> rows);
std::string bench_table(std::span<const BenchRow> rows);

}  // namespace mtswarm::experiment
