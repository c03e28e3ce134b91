#include "mtswarm/mission.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace mtswarm::mission {

namespace {

constexpr std::string_view kColorPrefix = "color:";
constexpr std::string_view kCellPrefix = "cell:";

bool parse_uint(std::string_view text, int& out) {
    if (text.empty() || text.size() > 9) return false;
    if (text.size() > 1 && text[0] == '0') return false;
    if (!std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return true;
}

}  // namespace

std::string_view to_string(MissionKind kind) { return kind == MissionKind::Foraging ? "foraging" : "maze"; }

MissionKind mission_kind_from_string(std::string_view text) {
    if (text == "foraging") return MissionKind::Foraging;
    if (text == "maze") return MissionKind::Maze;
    throw std::invalid_argument("unknown mission kind: " + std::string(text));
}

std::string_view to_string(PeerProofOutcome outcome) {
    switch (outcome) {
        case PeerProofOutcome::Accepted: return "accepted";
        case PeerProofOutcome::Rejected: return "rejected";
        case PeerProofOutcome::Stale: return "stale";
    }
    return "unknown";
}

const std::array<std::string_view, 8>& foraging_colors() {
    static constexpr std::array<std::string_view, 8> kColors{"green", "magenta", "blue", "yellow",
                                                             "red",   "cyan",    "lime", "orange"};
    return kColors;
}

std::string color_sensor(std::string_view color) { return std::string(kColorPrefix) + std::string(color); }

std::string cell_sensor(GridCell cell) {
    return std::string(kCellPrefix) + std::to_string(cell.x) + "," + std::to_string(cell.y);
}

std::optional<std::string_view> parse_color_sensor(std::string_view sensor) {
    if (!sensor.starts_with(kColorPrefix)) return std::nullopt;
    const auto name = sensor.substr(kColorPrefix.size());
    const auto& colors = foraging_colors();
    if (std::find(colors.begin(), colors.end(), name) == colors.end()) return std::nullopt;
    return name;
}

std::optional<GridCell> parse_cell_sensor(std::string_view sensor) {
    if (!sensor.starts_with(kCellPrefix)) return std::nullopt;
    const auto body = sensor.substr(kCellPrefix.size());
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    GridCell cell;
    if (!parse_uint(body.substr(0, comma), cell.x) || !parse_uint(body.substr(comma + 1), cell.y)) {
        return std::nullopt;
    }
    return cell;
}

bool is_canonical_sensor(std::string_view sensor) {
    return parse_color_sensor(sensor).has_value() || parse_cell_sensor(sensor).has_value();
}

bool is_canonical_action(std::string_view action) { return action == kCarryToTarget || action == kStop; }

EncodedOperation encode_operation(const Operation& op) {
    if (!is_canonical_sensor(op.sensor) || !is_canonical_action(op.action)) {
        throw std::invalid_argument("bad operation encoding");
    }
    EncodedOperation out;
    out.sensor_hash = merkle::hash_bytes(op.sensor);
    out.action_hash = merkle::hash_bytes(op.action);
    out.leaf = merkle::make_leaf(out.sensor_hash, out.action_hash);
    return out;
}

MissionSpec foraging_mission(std::size_t n, std::size_t robots, std::uint64_t seed) {
    if (n < 1 || n > foraging_colors().size()) {
        throw std::invalid_argument("foraging missions use between 1 and 8 colours");
    }
    MissionSpec spec;
    spec.kind = MissionKind::Foraging;
    spec.robots = robots;
    spec.seed = seed;
    spec.label = "foraging-n" + std::to_string(n);
    for (std::size_t j = 0; j < n; ++j) {
        spec.operations.push_back({color_sensor(foraging_colors()[j]), std::string(kCarryToTarget)});
    }
    return spec;
}

const std::array<std::string_view, 5>& default_maze_blueprint() {
    static constexpr std::array<std::string_view, 5> kBlueprint{
        "111@1",
        "10001",
        "10111",
        "10001",
        "111*1",
    };
    return kBlueprint;
}

MissionSpec maze_mission(std::span<const std::string_view> blueprint, std::size_t robots, std::uint64_t seed) {
    MissionSpec spec;
    spec.kind = MissionKind::Maze;
    spec.robots = robots;
    spec.seed = seed;
    spec.label = "maze";
    spec.arena.grid = static_cast<int>(blueprint.size());
    const int rows = static_cast<int>(blueprint.size());
    for (int y = 0; y < rows; ++y) {
        const auto row = blueprint[static_cast<std::size_t>(rows - 1 - y)];
        if (static_cast<int>(row.size()) != rows) throw std::invalid_argument("maze blueprint must be square");
        for (int x = 0; x < rows; ++x) {
            const char c = row[static_cast<std::size_t>(x)];
            if (c == '1') {
                spec.operations.push_back({cell_sensor({x, y}), std::string(kStop)});
            } else if (c != '0' && c != '@' && c != '*') {
                throw std::invalid_argument("maze blueprint holds an unknown symbol");
            }
        }
    }
    return spec;
}

MissionSpec default_maze_mission(std::size_t robots, std::uint64_t seed) {
    const auto& bp = default_maze_blueprint();
    return maze_mission(bp, robots, seed);
}

EncodedMission encode_mission(const MissionSpec& spec) {
    if (spec.operations.empty()) throw std::invalid_argument("empty mission");
    std::vector<Digest32> leaves;
    leaves.reserve(spec.operations.size());
    for (const auto& op : spec.operations) leaves.push_back(encode_operation(op).leaf);
    auto tree = std::make_shared<const merkle::MerkleTree>(merkle::MerkleTree::build(leaves));
    OperatorSecrets secrets(spec.kind, tree->root(), spec.operations);
    return {std::move(tree), std::move(secrets)};
}

RobotMissionState::RobotMissionState(std::shared_ptr<const merkle::MerkleTree> tree)
    : tree_(std::move(tree)) {
    if (!tree_) throw std::invalid_argument("robot state needs a tree");
    records_.resize(tree_->leaf_count());
}

std::size_t RobotMissionState::raw_evidence_count() const {
    return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](const OpRecord& r) {
        return std::holds_alternative<RawEvidence>(r.evidence);
    }));
}

std::optional<Match> RobotMissionState::try_match(std::string_view sensor,
                                                  std::span<const std::string_view> actions) const {
    if (complete()) return std::nullopt;
    const Digest32 sensor_hash = merkle::hash_bytes(sensor);
    const Digest32& target = tree_->leaf(working_index_);
    for (const auto action : actions) {
        const Digest32 action_hash = merkle::hash_bytes(action);
        if (merkle::make_leaf(sensor_hash, action_hash) == target) {
            return Match{std::string(action), tree_->gen_proof(working_index_, sensor_hash, action_hash)};
        }
    }
    return std::nullopt;
}

void RobotMissionState::mark_completed(std::size_t index, RawEvidence evidence) {
    if (index != working_index_) throw std::logic_error("out-of-order completion");
    const Digest32 leaf =
        merkle::make_leaf(merkle::hash_bytes(evidence.sensor), merkle::hash_bytes(evidence.action));
    if (leaf != tree_->leaf(index)) throw std::invalid_argument("evidence does not match the operation leaf");
    records_[index] = {OpStatus::Completed, std::move(evidence)};
    advance();
}

PeerProofOutcome RobotMissionState::apply_peer_proof(const merkle::Proof& proof) {
    if (proof.op_index >= records_.size()) return PeerProofOutcome::Rejected;
    if (records_[proof.op_index].status == OpStatus::Completed) return PeerProofOutcome::Stale;
    if (proof.path.size() + 1 != tree_->depth() || !merkle::verify_proof(root(), proof)) {
        return PeerProofOutcome::Rejected;
    }
    records_[proof.op_index] = {OpStatus::Completed, HashEvidence{proof.sensor_hash, proof.action_hash}};
    advance();
    return PeerProofOutcome::Accepted;
}

std::optional<merkle::Proof> RobotMissionState::prove(std::size_t index) const {
    if (!is_completed(index)) return std::nullopt;
    const auto& ev = records_[index].evidence;
    if (const auto* h = std::get_if<HashEvidence>(&ev)) {
        return tree_->gen_proof(index, h->sensor_hash, h->action_hash);
    }
    const auto& raw = std::get<RawEvidence>(ev);
    return tree_->gen_proof(index, merkle::hash_bytes(raw.sensor), merkle::hash_bytes(raw.action));
}

void RobotMissionState::advance() {
    while (working_index_ < records_.size() && records_[working_index_].status == OpStatus::Completed) {
        ++working_index_;
    }
}

std::string RobotMissionState::serialize() const {
    nlohmann::json ops = nlohmann::json::array();
    for (std::size_t j = 0; j < records_.size(); ++j) {
        nlohmann::json rec{{"index", j},
                           {"status", records_[j].status == OpStatus::Completed ? "completed" : "pending"}};
        if (const auto* h = std::get_if<HashEvidence>(&records_[j].evidence)) {
            rec["evidence"] = {{"kind", "hashes"}, {"h_s", h->sensor_hash.hex()}, {"h_a", h->action_hash.hex()}};
        } else if (const auto* r = std::get_if<RawEvidence>(&records_[j].evidence)) {
            rec["evidence"] = {{"kind", "raw"}, {"sensor", r->sensor}, {"action", r->action}};
        }
        ops.push_back(std::move(rec));
    }
    nlohmann::json leaves = nlohmann::json::array();
    for (const auto& leaf : tree_->levels().front()) leaves.push_back(leaf.hex());
    nlohmann::json out{{"root", root().hex()},
                       {"working_index", working_index_},
                       {"n", records_.size()},
                       {"leaves", std::move(leaves)},
                       {"operations", std::move(ops)}};
    return out.dump();
}

}  // namespace mtswarm::mission
