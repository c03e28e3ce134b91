#include "mtswarm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mtswarm::metrics {

namespace {

std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::vector<double> success_curve(std::span<const double> run_times, std::size_t k, std::span<const double> t_grid) {
    if (k == 0 || run_times.empty()) throw std::invalid_argument("success curve needs at least one run");
    if (run_times.size() != k) throw std::invalid_argument("success curve needs exactly k run times");
    std::vector<double> sorted(run_times.begin(), run_times.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (const double t : t_grid) {
        const auto hits = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
        out.push_back(static_cast<double>(hits) / static_cast<double>(k));
    }
    return out;
}

std::optional<double> time_to_success(std::span<const double> run_times, double level) {
    if (run_times.empty()) throw std::invalid_argument("success curve needs at least one run");
    std::vector<double> sorted(run_times.begin(), run_times.end());
    std::sort(sorted.begin(), sorted.end());
    const auto k = static_cast<double>(sorted.size());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        if (!std::isfinite(sorted[j])) break;
        if (static_cast<double>(j + 1) / k >= level) return sorted[j];
    }
    return std::nullopt;
}

std::uint64_t ac_upper_limit(std::size_t robots, std::size_t n, std::size_t hash_size) {
    if (robots < 1 || n < 1) throw std::invalid_argument("robots and n must be positive");
    return static_cast<std::uint64_t>(robots - 1) * n * merkle::proof_length(n) * hash_size;
}

double shannon_equitability(std::span<const std::size_t> ops_per_robot, std::size_t n) {
    const std::size_t total = std::accumulate(ops_per_robot.begin(), ops_per_robot.end(), std::size_t{0});
    if (total > n) throw std::invalid_argument("more completions than operations");
    std::vector<std::size_t> contributors;
    for (const auto c : ops_per_robot) {
        if (c > 0) contributors.push_back(c);
    }
    if (contributors.size() <= 1) return 0.0;
    std::sort(contributors.begin(), contributors.end());
    if (std::all_of(contributors.begin(), contributors.end(), [&](std::size_t c) { return c == contributors[0]; })) {
        return 1.0;
    }
    // Shares of the work actually done; for a finished mission the total is n.
    double entropy = 0.0;
    for (const auto c : contributors) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        entropy -= p * std::log(p);
    }
    return std::min(1.0, entropy / std::log(static_cast<double>(contributors.size())));
}

std::uint64_t memory_footprint(std::size_t n, std::size_t hash_size) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    return static_cast<std::uint64_t>(n) * hash_size;
}

std::uint64_t measured_ac(const sim::RunRecord& record) {
    if (record.proof_count == 0) return 0;
    return record.proof_count * merkle::proof_length(record.n) * kHashSize;
}

Summary summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("nothing to summarize");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() == 1) return {mean, 0.0};
    double sq = 0.0;
    for (const double v : values) sq += (v - mean) * (v - mean);
    return {mean, std::sqrt(sq / (n - 1))};
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("linear fit needs paired points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        sxx += (xs[j] - mx) * (xs[j] - mx);
        sxy += (xs[j] - mx) * (ys[j] - my);
        syy += (ys[j] - my) * (ys[j] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("linear fit needs two distinct x values");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

MetricsReport build_report(std::span<const sim::RunRecord> runs, std::span<const double> t_grid) {
    if (runs.empty()) throw std::invalid_argument("report needs at least one run");
    MetricsReport rep;
    const auto& first = runs.front();
    rep.kind = first.kind;
    rep.robots = first.robots;
    rep.n = first.n;
    rep.k = runs.size();
    rep.network = first.network;

    std::vector<double> ft, r, ac, ie;
    for (const auto& run : runs) {
        if (run.kind != rep.kind || run.robots != rep.robots || run.n != rep.n) {
            throw std::invalid_argument("report mixes runs from different cells");
        }
        rep.finished += run.finished;
        rep.all_synced += run.all_synced;
        ft.push_back(run.finishing_time_s);
        r.push_back(run.finished ? run.finishing_time_s : std::numeric_limits<double>::infinity());
        const auto bytes = measured_ac(run);
        ac.push_back(static_cast<double>(bytes));
        rep.ac_max_bytes = std::max(rep.ac_max_bytes, bytes);
        ie.push_back(shannon_equitability(run.ops_per_robot, run.n));
    }
    rep.ft_s = summarize(ft);
    rep.t_grid.assign(t_grid.begin(), t_grid.end());
    rep.ps = success_curve(r, rep.k, t_grid);
    rep.t50_s = time_to_success(r, 0.5);
    rep.ac_bytes = summarize(ac);
    rep.ac_upper_bytes = ac_upper_limit(rep.robots, rep.n);
    rep.ie = summarize(ie);
    rep.memory_bytes = memory_footprint(rep.n);
    return rep;
}

std::vector<double> time_grid(double until, double step) {
    if (!(step > 0) || until < 0) throw std::invalid_argument("time grid needs a positive step");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor(until / step + 1e-9));
    for (std::size_t j = 0; j <= count; ++j) out.push_back(static_cast<double>(j) * step);
    if (out.back() < until) out.push_back(until);
    return out;
}

std::string report_csv_header() {
    return "kind,robots,n,k,latency_ticks,drop_prob,finished,all_synced,ft_mean_s,ft_sd_s,t50_s,"
           "ac_mean_bytes,ac_sd_bytes,ac_max_bytes,ac_ul_bytes,ie_mean,ie_sd,memory_bytes";
}

std::string report_csv_row(const MetricsReport& r) {
    std::string row;
    row += std::string(mission::to_string(r.kind)) + ",";
    row += std::to_string(r.robots) + "," + std::to_string(r.n) + "," + std::to_string(r.k) + ",";
    row += std::to_string(r.network.latency_ticks) + "," + fmt(r.network.drop_prob, 3) + ",";
    row += std::to_string(r.finished) + "," + std::to_string(r.all_synced) + ",";
    row += fmt(r.ft_s.mean, 2) + "," + fmt(r.ft_s.stddev, 2) + ",";
    row += (r.t50_s ? fmt(*r.t50_s, 1) : std::string("")) + ",";
    row += fmt(r.ac_bytes.mean, 1) + "," + fmt(r.ac_bytes.stddev, 1) + ",";
    row += std::to_string(r.ac_max_bytes) + "," + std::to_string(r.ac_upper_bytes) + ",";
    row += fmt(r.ie.mean, 4) + "," + fmt(r.ie.stddev, 4) + ",";
    row += std::to_string(r.memory_bytes);
    return row;
}

std::string curve_csv(std::span<const MetricsReport> reports) {
    std::string out = "kind,robots,n,t_s,ps\n";
    for (const auto& r : reports) {
        for (std::size_t j = 0; j < r.t_grid.size(); ++j) {
            out += std::string(mission::to_string(r.kind)) + "," + std::to_string(r.robots) + "," +
                   std::to_string(r.n) + "," + fmt(r.t_grid[j], 1) + "," + fmt(r.ps[j], 4) + "\n";
        }
    }
    return out;
}

std::string summary_table(std::span<const MetricsReport> reports) {
    char line[256];
    std::string out;
    std::snprintf(line, sizeof line, "%-9s %4s %4s %4s %6s %10s %9s %9s %10s %10s %7s %7s\n", "kind", "R_n", "n",
                  "k", "P_s", "F_t mean", "F_t sd", "t50", "AC KiB", "AC_ul KiB", "I_e", "I_e sd");
    out += line;
    for (const auto& r : reports) {
        const double ps_end = r.ps.empty() ? static_cast<double>(r.finished) / static_cast<double>(r.k) : r.ps.back();
        std::snprintf(line, sizeof line, "%-9s %4zu %4zu %4zu %6.2f %10.1f %9.1f %9s %10.2f %10.2f %7.4f %7.4f\n",
                      std::string(mission::to_string(r.kind)).c_str(), r.robots, r.n, r.k, ps_end, r.ft_s.mean,
                      r.ft_s.stddev, r.t50_s ? fmt(*r.t50_s, 1).c_str() : "-", r.ac_bytes.mean / 1024.0,
                      static_cast<double>(r.ac_upper_bytes) / 1024.0, r.ie.mean, r.ie.stddev);
        out += line;
    }
    return out;
}

}  // namespace mtswarm::metrics
