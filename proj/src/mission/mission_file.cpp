#include "mtswarm/mission_file.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "arena_json.hpp"

namespace mtswarm::mission {

namespace detail {

ArenaConfig arena_from_json(const nlohmann::json& obj, const std::string& where) {
    ArenaConfig a;
    if (obj.is_null()) return a;
    if (!obj.is_object()) throw FormatError(where + ": arena must be an object");
    a.side = field_or(obj, "side", a.side, where);
    a.grid = field_or(obj, "grid", a.grid, where);
    a.comm_range = field_or(obj, "c_range", a.comm_range, where);
    a.vision_range = field_or(obj, "v_range", a.vision_range, where);
    a.obstacle_range = field_or(obj, "o_range", a.obstacle_range, where);
    a.time_cap = field_or(obj, "time_cap", a.time_cap, where);
    a.dt = field_or(obj, "dt", a.dt, where);
    a.robot_radius = field_or(obj, "robot_radius", a.robot_radius, where);
    a.speed = field_or(obj, "speed", a.speed, where);
    a.turn_probability = field_or(obj, "turn_probability", a.turn_probability, where);
    if (a.side <= 0 || a.grid < 1 || a.dt <= 0 || a.time_cap <= 0 || a.robot_radius <= 0 || a.speed < 0) {
        throw FormatError(where + ": arena values out of range");
    }
    return a;
}

nlohmann::json arena_to_json(const ArenaConfig& a) {
    return {{"side", a.side},
            {"grid", a.grid},
            {"c_range", a.comm_range},
            {"v_range", a.vision_range},
            {"o_range", a.obstacle_range},
            {"time_cap", a.time_cap},
            {"dt", a.dt},
            {"robot_radius", a.robot_radius},
            {"speed", a.speed},
            {"turn_probability", a.turn_probability}};
}

nlohmann::json parse_json(std::string_view text, const std::string& where) {
    try {
        return nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw FormatError(where + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + e.what());
    }
}

}  // namespace detail

namespace {

std::vector<Operation> operations_from_json(const nlohmann::json& doc, const std::string& where) {
    if (!doc.contains("operations") || !doc.at("operations").is_array()) {
        throw FormatError(where + ": missing 'operations' array");
    }
    std::vector<Operation> ops;
    std::size_t j = 0;
    for (const auto& item : doc.at("operations")) {
        const std::string here = where + ": operations[" + std::to_string(j++) + "]";
        if (!item.is_object() || !item.contains("sensor") || !item.contains("action") ||
            !item.at("sensor").is_string() || !item.at("action").is_string()) {
            throw FormatError(here + ": needs string 'sensor' and 'action'");
        }
        Operation op{item.at("sensor").get<std::string>(), item.at("action").get<std::string>()};
        if (!is_canonical_sensor(op.sensor) || !is_canonical_action(op.action)) {
            throw FormatError(here + ": bad operation encoding");
        }
        ops.push_back(std::move(op));
    }
    return ops;
}

nlohmann::json operations_to_json(const std::vector<Operation>& ops) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& op : ops) out.push_back({{"sensor", op.sensor}, {"action", op.action}});
    return out;
}

MissionKind kind_from_json(const nlohmann::json& doc, const std::string& where) {
    try {
        return mission_kind_from_string(detail::field_or<std::string>(doc, "mission_kind", "", where));
    } catch (const std::invalid_argument& e) {
        throw FormatError(where + ": " + e.what());
    }
}

void check_version(const nlohmann::json& doc, const std::string& where) {
    if (!doc.is_object()) throw FormatError(where + ": top level must be an object");
    if (detail::field_or<int>(doc, "version", 1, where) != 1) throw FormatError(where + ": unsupported version");
}

}  // namespace

MissionSpec parse_mission(std::string_view text) {
    const std::string where = "mission file";
    const auto doc = detail::parse_json(text, where);
    check_version(doc, where);
    MissionSpec spec;
    spec.kind = kind_from_json(doc, where);
    spec.operations = operations_from_json(doc, where);
    spec.arena = detail::arena_from_json(doc.value("arena", nlohmann::json()), where);
    spec.robots = detail::field_or<std::size_t>(doc, "robots", spec.robots, where);
    spec.seed = detail::field_or<std::uint64_t>(doc, "seed", spec.seed, where);
    spec.label = detail::field_or<std::string>(doc, "label", spec.label, where);
    return spec;
}

MissionSpec load_mission(const std::filesystem::path& path) { return parse_mission(read_text_file(path)); }

std::string dump_mission(const MissionSpec& spec) {
    nlohmann::json doc{{"version", 1},
                       {"mission_kind", std::string(to_string(spec.kind))},
                       {"label", spec.label},
                       {"robots", spec.robots},
                       {"seed", spec.seed},
                       {"arena", detail::arena_to_json(spec.arena)},
                       {"operations", operations_to_json(spec.operations)}};
    return doc.dump(2) + "\n";
}

std::string dump_secrets(const OperatorSecrets& secrets) {
    nlohmann::json doc{{"version", 1},
                       {"mission_kind", std::string(to_string(secrets.kind()))},
                       {"root", secrets.root().hex()},
                       {"operations", operations_to_json(secrets.operations())}};
    return doc.dump(2) + "\n";
}

OperatorSecrets parse_secrets(std::string_view text) {
    const std::string where = "secrets file";
    const auto doc = detail::parse_json(text, where);
    check_version(doc, where);
    Digest32 root;
    try {
        root = Digest32::from_hex(detail::field_or<std::string>(doc, "root", "", where));
    } catch (const std::invalid_argument& e) {
        throw FormatError(where + ": root: " + e.what());
    }
    return OperatorSecrets(kind_from_json(doc, where), root, operations_from_json(doc, where));
}

ArenaConfig parse_arena(std::string_view json_text) {
    return detail::arena_from_json(detail::parse_json(json_text, "arena"), "arena");
}

std::string dump_arena(const ArenaConfig& arena) { return detail::arena_to_json(arena).dump(); }

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace mtswarm::mission
