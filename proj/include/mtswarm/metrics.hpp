#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtswarm/sim.hpp"

namespace mtswarm::metrics {

/// P_s(t) = |{j : r_j <= t}| / k at every grid point. Unfinished runs are
/// passed as any time above the cap (infinity works).
/// Throws std::invalid_argument for k == 0 or run_times.size() != k.
std::vector<double> success_curve(std::span<const double> run_times, std::size_t k, std::span<const double> t_grid);

/// Earliest run time at which P_s reaches `level`, or nothing if it never does.
std::optional<double> time_to_success(std::span<const double> run_times, double level);

/// (R_n - 1) * n * (log2(n̂) + 2) * hash_size. Throws for robots or n below 1.
std::uint64_t ac_upper_limit(std::size_t robots, std::size_t n, std::size_t hash_size = kHashSize);

/// Evenness of completed operations over the robots that completed any.
/// 0 for fewer than two contributors; exactly 1 when contributors did equal
/// work. Throws std::invalid_argument if the counts add up to more than n.
double shannon_equitability(std::span<const std::size_t> ops_per_robot, std::size_t n);

/// Leaf-hash storage for an n-operation mission.
std::uint64_t memory_footprint(std::size_t n, std::size_t hash_size = kHashSize);

/// Proof messages times proof size.
std::uint64_t measured_ac(const sim::RunRecord& record);

struct Summary {
    double mean = 0.0;
    /// Sample standard deviation; 0 for a single value.
    double stddev = 0.0;
};

/// Throws std::invalid_argument on an empty list.
Summary summarize(std::span<const double> values);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares y = slope * x + intercept. Needs at least two distinct xs.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

/// Aggregates over the k runs of one (kind, R_n, n, network) cell.
struct MetricsReport {
    mission::MissionKind kind = mission::MissionKind::Foraging;
    std::size_t robots = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    sim::NetworkConfig network;
    std::size_t finished = 0;
    std::size_t all_synced = 0;
    Summary ft_s;
    /// Time at which P_s reaches 0.5, if it does.
    std::optional<double> t50_s;
    std::vector<double> t_grid;
    std::vector<double> ps;
    Summary ac_bytes;
    std::uint64_t ac_upper_bytes = 0;
    std::uint64_t ac_max_bytes = 0;
    Summary ie;
    std::uint64_t memory_bytes = 0;
};

/// Throws std::invalid_argument for an empty list or runs from different cells.
MetricsReport build_report(std::span<const sim::RunRecord> runs, std::span<const double> t_grid);

/// Evenly spaced points 0, step, ..., up to and including `until`.
std::vector<double> time_grid(double until, double step);

std::string report_csv_header();
std::string report_csv_row(const MetricsReport& r);
/// Long-form success curves: kind, robots, n, t_s, ps.
std::string curve_csv(std::span<const MetricsReport> reports);
/// Fixed-width table of the per-cell aggregates, sizes in KiB.
std::string summary_table(std::span<const MetricsReport> reports);

}  // namespace mtswarm::metrics
