#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"
#include "mtswarm/sim.hpp"

namespace mtswarm::sim {

std::string run_csv_header() { return "seed,robots,n,finished,ft_s,ac_bytes,proofs,ops_per_robot"; }

std::string run_csv_row(const RunRecord& r) {
    char ft[32];
    std::snprintf(ft, sizeof ft, "%.1f", r.finishing_time_s);
    std::string ops = "\"[";
    for (std::size_t k = 0; k < r.ops_per_robot.size(); ++k) {
        if (k) ops += ',';
        ops += std::to_string(r.ops_per_robot[k]);
    }
    ops += "]\"";
    return std::to_string(r.seed) + "," + std::to_string(r.robots) + "," + std::to_string(r.n) + "," +
           (r.finished ? "1" : "0") + "," + ft + "," + std::to_string(r.ac_bytes) + "," +
           std::to_string(r.proof_count) + "," + ops;
}

void write_events_ndjson(std::ostream& out, const RunRecord& r, double dt) {
    for (const auto& e : r.events) {
        nlohmann::ordered_json j{{"tick", e.tick},
                                 {"time_s", std::round(static_cast<double>(e.tick) * dt * 1e6) / 1e6},
                                 {"kind", std::string(to_string(e.kind))},
                                 {"robot", e.robot},
                                 {"peer", e.peer},
                                 {"op", e.op}};
        out << j.dump() << '\n';
    }
}

}  // namespace mtswarm::sim
