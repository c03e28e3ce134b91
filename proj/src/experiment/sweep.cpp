#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "../mission/arena_json.hpp"
#include "mtswarm/experiment.hpp"
#include "mtswarm/mission_file.hpp"

namespace mtswarm::experiment {

namespace {

using mission::detail::field_or;

std::vector<std::size_t> size_list(const nlohmann::json& doc, const char* key, const std::string& where) {
    std::vector<std::size_t> out;
    if (!doc.contains(key)) return out;
    const auto& arr = doc.at(key);
    if (!arr.is_array()) throw FormatError(where + ": '" + key + "' must be an array");
    for (const auto& v : arr) {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
            throw FormatError(where + ": '" + key + "' entries must be positive integers");
        }
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

SweepPlan parse_plan(std::string_view json_text, const std::filesystem::path& base_dir) {
    const std::string where = "sweep plan";
    const auto doc = mission::detail::parse_json(json_text, where);
    if (!doc.is_object()) throw FormatError(where + ": top level must be an object");

    SweepPlan plan;
    try {
        plan.kind = mission::mission_kind_from_string(field_or<std::string>(doc, "mission_kind", "foraging", where));
    } catch (const std::invalid_argument& e) {
        throw FormatError(where + ": " + e.what());
    }
    plan.robots = size_list(doc, "robots", where);
    plan.n_values = size_list(doc, "n", where);
    if (plan.robots.empty()) throw FormatError(where + ": 'robots' must list at least one swarm size");
    const auto k = field_or<long long>(doc, "k", 1, where);
    if (k < 1) throw FormatError(where + ": k must be at least 1");
    plan.k = static_cast<std::size_t>(k);
    plan.seed = field_or<std::uint64_t>(doc, "seed", 1, where);
    plan.t_step = field_or(doc, "t_step", plan.t_step, where);
    if (!(plan.t_step > 0)) throw FormatError(where + ": t_step must be positive");
    if (doc.contains("network")) {
        const auto& net = doc.at("network");
        plan.network.latency_ticks = field_or<long long>(net, "latency_ticks", 0, where);
        plan.network.drop_prob = field_or(net, "drop_prob", 0.0, where);
        try {
            sim::validate(plan.network);
        } catch (const std::invalid_argument& e) {
            throw FormatError(where + ": " + e.what());
        }
    }
    plan.arena = mission::detail::arena_from_json(doc.contains("arena") ? doc.at("arena") : nlohmann::json(), where);

    if (doc.contains("mission_file")) {
        auto spec = mission::load_mission(resolve(base_dir, field_or<std::string>(doc, "mission_file", "", where)));
        if (!doc.contains("arena")) plan.arena = spec.arena;
        plan.kind = spec.kind;
        plan.mission = std::move(spec);
    } else if (plan.kind == mission::MissionKind::Maze) {
        plan.mission = mission::default_maze_mission();
    } else if (plan.n_values.empty()) {
        throw FormatError(where + ": foraging plans need 'n' or a 'mission_file'");
    }
    if (plan.mission) plan.mission->arena = plan.arena;

    if (doc.contains("outputs")) {
        const auto& out = doc.at("outputs");
        if (out.contains("runs")) plan.runs_csv = resolve(base_dir, field_or<std::string>(out, "runs", "", where));
        if (out.contains("metrics")) plan.metrics_csv = resolve(base_dir, field_or<std::string>(out, "metrics", "", where));
        if (out.contains("curves")) plan.curves_csv = resolve(base_dir, field_or<std::string>(out, "curves", "", where));
    }
    return plan;
}

SweepPlan load_plan(const std::filesystem::path& path) {
    return parse_plan(mission::read_text_file(path), path.parent_path());
}

std::vector<CellSpec> plan_cells(const SweepPlan& plan) {
    std::vector<CellSpec> cells;
    for (const auto r : plan.robots) {
        if (plan.mission) {
            cells.push_back({r, *plan.mission});
            cells.back().mission.robots = r;
            continue;
        }
        for (const auto n : plan.n_values) {
            auto spec = mission::foraging_mission(n, r, plan.seed);
            spec.arena = plan.arena;
            cells.push_back({r, std::move(spec)});
        }
    }
    return cells;
}

SweepResult run_sweep(const SweepPlan& plan, std::size_t jobs) {
    const auto cells = plan_cells(plan);
    std::vector<std::shared_ptr<const merkle::MerkleTree>> trees;
    trees.reserve(cells.size());
    for (const auto& c : cells) trees.push_back(mission::encode_mission(c.mission).tree);

    const std::size_t total = cells.size() * plan.k;
    std::vector<std::optional<sim::RunRecord>> records(total);
    std::vector<std::string> failures(total);
    sim::SimOptions options;
    options.network = plan.network;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job = next++; job < total; job = next++) {
            const std::size_t cell = job / plan.k;
            const std::uint64_t seed = plan.seed + job % plan.k;
            try {
                records[job] = sim::run(cells[cell].mission, trees[cell], cells[cell].robots, seed, options);
            } catch (const std::exception& e) {
                failures[job] = e.what();
            }
        }
    };
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(total, 1));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SweepResult result;
    const auto grid = metrics::time_grid(plan.arena.time_cap, plan.t_step);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        CellResult cr{cells[c], {}, std::nullopt};
        for (std::size_t j = 0; j < plan.k; ++j) {
            const std::size_t job = c * plan.k + j;
            if (records[job]) {
                cr.runs.push_back(std::move(*records[job]));
            } else {
                result.errors.push_back({c, plan.seed + j, failures[job]});
            }
        }
        if (!cr.runs.empty()) cr.report = metrics::build_report(cr.runs, grid);
        result.cells.push_back(std::move(cr));
    }
    return result;
}

std::string runs_csv(const SweepResult& result) {
    std::string out = sim::run_csv_header() + "\n";
    for (const auto& c : result.cells) {
        for (const auto& r : c.runs) out += sim::run_csv_row(r) + "\n";
    }
    return out;
}

std::string metrics_csv(const SweepResult& result) {
    std::string out = metrics::report_csv_header() + "\n";
    for (const auto& c : result.cells) {
        if (c.report) out += metrics::report_csv_row(*c.report) + "\n";
    }
    return out;
}

}  // namespace mtswarm::experiment
