// mtswarm: encode missions, run and sweep simulations, bench and verify proofs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mtswarm/error.hpp"
#include "mtswarm/experiment.hpp"
#include "mtswarm/merkle_io.hpp"
#include "mtswarm/mission_file.hpp"
#include "mtswarm/sim.hpp"

namespace fs = std::filesystem;
using namespace mtswarm;

namespace {

// verify needs "malformed input" apart from "invalid proof".
constexpr int kExitInvalid = 1;
constexpr int kExitMalformed = 2;

struct NetFlags {
    long long latency = 0;
    double drop = 0.0;
    bool latency_set = false;
    bool drop_set = false;
};

void add_net_flags(CLI::App* cmd, NetFlags& f) {
    cmd->add_option("--net-latency-ticks", f.latency, "Delivery delay in ticks")->check(CLI::NonNegativeNumber);
    cmd->add_option("--net-drop", f.drop, "Per-frame drop probability in [0, 1)")->check(CLI::Range(0.0, 0.999999));
}

fs::path default_prefix(const fs::path& mission) {
    fs::path p = mission;
    if (p.extension() == ".json") p.replace_extension();
    return p;
}

void emit(const std::optional<fs::path>& path, const std::string& text) {
    if (path) {
        mission::write_text_file(*path, text);
    } else {
        std::cout << text;
    }
}

int cmd_encode(const fs::path& mission_path, const std::optional<fs::path>& out) {
    const auto spec = mission::load_mission(mission_path);
    const auto enc = mission::encode_mission(spec);
    const fs::path prefix = out ? *out : default_prefix(mission_path);
    const fs::path tree_path = prefix.string() + ".tree";
    const fs::path secrets_path = prefix.string() + ".secrets.json";
    merkle::write_file(tree_path, merkle::encode_tree(*enc.tree));
    mission::write_text_file(secrets_path, mission::dump_secrets(enc.secrets));
    std::cout << "root " << enc.tree->root().hex() << "\n"
              << "n " << enc.tree->leaf_count() << " padded " << enc.tree->padded_leaf_count() << "\n"
              << "tree " << tree_path.string() << "\n"
              << "secrets " << secrets_path.string() << "\n";
    return 0;
}

int cmd_prove(const fs::path& tree_path, const fs::path& secrets_path, std::size_t index, const fs::path& out) {
    const auto tree = merkle::decode_tree(merkle::read_file(tree_path));
    const auto secrets = mission::parse_secrets(mission::read_text_file(secrets_path));
    if (secrets.root() != tree.root()) throw std::invalid_argument("secrets belong to a different tree");
    if (index >= secrets.operations().size()) throw std::out_of_range("operation index out of range");
    const auto op = mission::encode_operation(secrets.operations()[index]);
    const auto proof = tree.gen_proof(index, op.sensor_hash, op.action_hash);
    merkle::write_file(out, merkle::encode_proof(proof));
    std::cout << "op_index " << index << " hashes " << proof.hash_count() << " proof " << out.string() << "\n";
    return 0;
}

std::shared_ptr<const merkle::MerkleTree> tree_for(const mission::MissionSpec& spec,
                                                   const std::optional<fs::path>& tree_path) {
    if (!tree_path) return mission::encode_mission(spec).tree;
    return std::make_shared<const merkle::MerkleTree>(merkle::decode_tree(merkle::read_file(*tree_path)));
}

int cmd_run(const fs::path& mission_path, const std::optional<fs::path>& tree_path, std::optional<std::size_t> robots,
            std::optional<std::uint64_t> seed, std::size_t seeds, const NetFlags& net,
            const std::optional<fs::path>& out, const std::optional<fs::path>& events) {
    const auto spec = mission::load_mission(mission_path);
    const auto tree = tree_for(spec, tree_path);
    sim::SimOptions options;
    options.network = {net.latency, net.drop};
    const std::size_t r = robots.value_or(spec.robots);
    const std::uint64_t first = seed.value_or(spec.seed);

    std::string csv = sim::run_csv_header() + "\n";
    std::ofstream event_log;
    if (events) {
        event_log.open(*events, std::ios::trunc);
        if (!event_log) throw std::runtime_error("cannot write " + events->string());
    }
    for (std::size_t j = 0; j < seeds; ++j) {
        const auto rec = sim::run(spec, tree, r, first + j, options);
        csv += sim::run_csv_row(rec) + "\n";
        if (events) sim::write_events_ndjson(event_log, rec, spec.arena.dt);
    }
    emit(out, csv);
    return 0;
}

int cmd_sweep(const fs::path& plan_path, std::optional<std::size_t> seeds, std::size_t jobs, const NetFlags& net,
              const std::optional<fs::path>& out) {
    auto plan = experiment::load_plan(plan_path);
    if (seeds) plan.k = *seeds;
    if (net.latency_set) plan.network.latency_ticks = net.latency;
    if (net.drop_set) plan.network.drop_prob = net.drop;
    if (out) plan.metrics_csv = *out;

    const auto result = experiment::run_sweep(plan, jobs);
    for (const auto& e : result.errors) {
        std::cerr << "run failed: cell " << e.cell << " seed " << e.seed << ": " << e.message << "\n";
    }
    if (plan.runs_csv) mission::write_text_file(*plan.runs_csv, experiment::runs_csv(result));
    if (plan.metrics_csv) mission::write_text_file(*plan.metrics_csv, experiment::metrics_csv(result));
    std::vector<metrics::MetricsReport> reports;
    for (const auto& c : result.cells) {
        if (c.report) reports.push_back(*c.report);
    }
    if (plan.curves_csv) mission::write_text_file(*plan.curves_csv, metrics::curve_csv(reports));
    std::cout << metrics::summary_table(reports);
    return 0;
}

int cmd_bench(const std::vector<std::size_t>& n_values, std::size_t repeats, std::uint64_t seed,
              const std::optional<fs::path>& out) {
    const auto rows = experiment::bench(n_values, repeats, seed);
    std::cout << experiment::bench_table(rows);
    if (out) mission::write_text_file(*out, experiment::bench_csv(rows));
    return 0;
}

int cmd_verify(const std::optional<fs::path>& tree_path, const std::optional<std::string>& root_hex,
               const fs::path& proof_path) {
    Digest32 root;
    try {
        if (tree_path) {
            root = merkle::decode_tree(merkle::read_file(*tree_path)).root();
        } else {
            root = Digest32::from_hex(*root_hex);
        }
        const auto proof = merkle::decode_proof(merkle::read_file(proof_path));
        const bool ok = merkle::verify_proof(root, proof);
        std::cout << "op_index " << proof.op_index << " " << (ok ? "valid" : "invalid") << "\n";
        return ok ? 0 : kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMalformed;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Merkle-tree missions for robot swarms"};
    app.require_subcommand(1);

    fs::path mission_path, tree_path, secrets_path, proof_path, plan_path;
    std::optional<fs::path> out, events, tree_opt;
    std::optional<std::size_t> robots, seeds_opt;
    std::optional<std::uint64_t> seed_opt;
    std::optional<std::string> root_hex;
    NetFlags net;

    auto* encode = app.add_subcommand("encode", "Build the tree and secrets files for a mission");
    encode->add_option("--mission", mission_path, "Mission JSON file")->required()->check(CLI::ExistingFile);
    encode->add_option("--out", out, "Output prefix (default: mission path without .json)");

    std::size_t index = 0;
    auto* prove = app.add_subcommand("prove", "Write the proof file of one operation (operator side)");
    prove->add_option("--tree", tree_path, "Tree file")->required()->check(CLI::ExistingFile);
    prove->add_option("--secrets", secrets_path, "Secrets file")->required()->check(CLI::ExistingFile);
    prove->add_option("--index", index, "Operation index")->required();
    prove->add_option("--out", out, "Proof file")->required();

    std::size_t run_seeds = 1;
    auto* run = app.add_subcommand("run", "Simulate a mission and print one CSV row per seed");
    run->add_option("--mission", mission_path, "Mission JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--tree", tree_opt, "Tree file (default: encode the mission)")->check(CLI::ExistingFile);
    run->add_option("--robots", robots, "Swarm size R_n (default: from the mission)")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed_opt, "First seed (default: from the mission)");
    run->add_option("--seeds", run_seeds, "Number of consecutive seeds")->check(CLI::PositiveNumber);
    run->add_option("--out", out, "CSV output file (default: stdout)");
    run->add_option("--events", events, "Newline-delimited JSON event log");
    add_net_flags(run, net);

    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "Run an experiment grid and aggregate metrics");
    sweep->add_option("--plan", plan_path, "Sweep plan JSON file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--seeds", seeds_opt, "Runs per cell (overrides k)")->check(CLI::PositiveNumber);
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out, "Metrics CSV (overrides the plan)");
    add_net_flags(sweep, net);

    std::vector<std::size_t> bench_n{7541, 5923, 3599};
    std::size_t repeats = 100;
    std::uint64_t bench_seed = 1;
    auto* bench = app.add_subcommand("bench", "Time tree generation, proving and verification");
    bench->add_option("--n", bench_n, "Mission sizes")->check(CLI::PositiveNumber);
    bench->add_option("--repeats", repeats, "Repeats per size")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "Seed for the random operations");
    bench->add_option("--out", out, "CSV output file");

    auto* verify = app.add_subcommand("verify", "Check a proof file against a tree or root (exit 0 valid, 1 invalid, 2 malformed)");
    auto* vt = verify->add_option("--tree", tree_opt, "Tree file");
    auto* vr = verify->add_option("--root", root_hex, "Root as 64 hex digits");
    vt->excludes(vr);
    verify->add_option("--proof", proof_path, "Proof file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return verify->parsed() && code != 0 ? kExitMalformed : code;
    }
    net.latency_set = run->count("--net-latency-ticks") + sweep->count("--net-latency-ticks") > 0;
    net.drop_set = run->count("--net-drop") + sweep->count("--net-drop") > 0;

    if (verify->parsed()) {
        if (!tree_opt && !root_hex) {
            std::cerr << "error: verify needs --tree or --root\n";
            return kExitMalformed;
        }
        return cmd_verify(tree_opt, root_hex, proof_path);
    }
    try {
        if (encode->parsed()) return cmd_encode(mission_path, out);
        if (prove->parsed()) return cmd_prove(tree_path, secrets_path, index, *out);
        if (run->parsed()) return cmd_run(mission_path, tree_opt, robots, seed_opt, run_seeds, net, out, events);
        if (sweep->parsed()) return cmd_sweep(plan_path, seeds_opt, jobs, net, out);
        if (bench->parsed()) return cmd_bench(bench_n, repeats, bench_seed, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
