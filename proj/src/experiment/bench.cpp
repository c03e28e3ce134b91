#include <chrono>
#include <cstdio>
#include <string>

#include "mtswarm/experiment.hpp"
#include "mtswarm/rng.hpp"

namespace mtswarm::experiment {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string random_string(Rng& rng, std::string_view prefix) {
    std::string s(prefix);
    for (int k = 0; k < 16; ++k) s += static_cast<char>('a' + rng.index(26));
    return s;
}

}  // namespace

std::vector<BenchRow> bench(std::span<const std::size_t> n_values, std::size_t repeats, std::uint64_t seed) {
    if (repeats == 0) throw std::invalid_argument("bench needs at least one repeat");
    std::vector<BenchRow> rows;
    Rng rng(seed);
    for (const auto n : n_values) {
        if (n == 0) throw std::invalid_argument("bench n must be positive");
        // The operation strings only feed the hashes; content does not matter.
        std::vector<std::string> sensors, actions;
        for (std::size_t j = 0; j < n; ++j) {
            sensors.push_back(random_string(rng, "sensor:"));
            actions.push_back(random_string(rng, "action:"));
        }

        std::vector<double> g, p, v;
        std::vector<Digest32> hs(n), ha(n), leaves(n);
        bool all_valid = true;
        for (std::size_t rep = 0; rep < repeats; ++rep) {
            auto start = Clock::now();
            for (std::size_t j = 0; j < n; ++j) {
                hs[j] = merkle::hash_bytes(sensors[j]);
                ha[j] = merkle::hash_bytes(actions[j]);
                leaves[j] = merkle::make_leaf(hs[j], ha[j]);
            }
            const auto tree = merkle::MerkleTree::build(leaves);
            g.push_back(seconds_since(start));

            const std::size_t index = rng.index(n);
            start = Clock::now();
            const auto proof = tree.gen_proof(index, hs[index], ha[index]);
            p.push_back(seconds_since(start));

            start = Clock::now();
            const bool ok = merkle::verify_proof(tree.root(), proof);
            v.push_back(seconds_since(start));
            all_valid = all_valid && ok;
        }
        if (!all_valid) throw std::logic_error("bench produced a proof that does not verify");

        BenchRow row;
        row.n = n;
        row.memory_bytes = metrics::memory_footprint(n);
        row.ac_per_robot_bytes = static_cast<std::uint64_t>(n) * merkle::proof_length(n) * kHashSize;
        row.generate_s = metrics::summarize(g);
        row.prove_s = metrics::summarize(p);
        row.verify_s = metrics::summarize(v);
        rows.push_back(row);
    }
    return rows;
}

std::string bench_csv(std::span<const BenchRow> rows) {
    std::string out = "n,memory_bytes,ac_per_robot_bytes,g_mean_s,g_sd_s,p_mean_s,p_sd_s,v_mean_s,v_sd_s\n";
    char line[256];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%zu,%llu,%llu,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f\n", r.n,
                      static_cast<unsigned long long>(r.memory_bytes),
                      static_cast<unsigned long long>(r.ac_per_robot_bytes), r.generate_s.mean, r.generate_s.stddev,
                      r.prove_s.mean, r.prove_s.stddev, r.verify_s.mean, r.verify_s.stddev);
        out += line;
    }
    return out;
}

std::string bench_table(std::span<const BenchRow> rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%6s %12s %14s %18s %18s %18s\n", "n", "memory KiB", "AC/R_n MiB",
                  "G ms (sd)", "P us (sd)", "V us (sd)");
    std::string out = line;
    for (const auto& r : rows) {
        char g[32], p[32], v[32];
        std::snprintf(g, sizeof g, "%.3f (%.3f)", r.generate_s.mean * 1e3, r.generate_s.stddev * 1e3);
        std::snprintf(p, sizeof p, "%.3f (%.3f)", r.prove_s.mean * 1e6, r.prove_s.stddev * 1e6);
        std::snprintf(v, sizeof v, "%.3f (%.3f)", r.verify_s.mean * 1e6, r.verify_s.stddev * 1e6);
        std::snprintf(line, sizeof line, "%6zu %12.2f %14.2f %18s %18s %18s\n", r.n, r.memory_bytes / 1024.0,
                      r.ac_per_robot_bytes / (1024.0 * 1024.0), g, p, v);
        out += line;
    }
    return out;
}

}  // namespace mtswarm::experiment
