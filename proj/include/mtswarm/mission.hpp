#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtswarm/arena.hpp"
#include "mtswarm/merkle.hpp"

namespace mtswarm::mission {

enum class MissionKind { Foraging, Maze };

std::string_view to_string(MissionKind kind);
/// Throws std::invalid_argument for anything but "foraging" or "maze".
MissionKind mission_kind_from_string(std::string_view text);

inline constexpr std::string_view kCarryToTarget = "action:carry_to_target";
inline constexpr std::string_view kStop = "action:stop";

/// Task colours available to foraging missions, in their canonical order.
const std::array<std::string_view, 8>& foraging_colors();

std::string color_sensor(std::string_view color);
std::string cell_sensor(GridCell cell);

/// "color:<name>" with a known colour, or "cell:<x>,<y>" with unpadded
/// non-negative integers.
bool is_canonical_sensor(std::string_view sensor);
bool is_canonical_action(std::string_view action);
std::optional<GridCell> parse_cell_sensor(std::string_view sensor);
std::optional<std::string_view> parse_color_sensor(std::string_view sensor);

/// One mission step as the operator writes it.
struct Operation {
    std::string sensor;
    std::string action;

    friend bool operator==(const Operation&, const Operation&) = default;
};

struct EncodedOperation {
    Digest32 sensor_hash;
    Digest32 action_hash;
    Digest32 leaf;
};

/// Throws std::invalid_argument("bad operation encoding") for non-canonical strings.
EncodedOperation encode_operation(const Operation& op);

struct MissionSpec {
    MissionKind kind = MissionKind::Foraging;
    std::vector<Operation> operations;
    ArenaConfig arena;
    std::size_t robots = 1;
    std::uint64_t seed = 1;
    std::string label;
};

/// Foraging mission over the first `n` canonical colours (1 <= n <= 8).
MissionSpec foraging_mission(std::size_t n, std::size_t robots = 4, std::uint64_t seed = 1);

/// 5x5 maze with 16 walls, one entrance ('@') and one exit ('*'), rows listed
/// top to bottom. '1' marks a wall and '0' an open cell.
const std::array<std::string_view, 5>& default_maze_blueprint();

/// Walls of a blueprint as "cell:x,y" stop operations, origin bottom-left,
/// ordered by row from the bottom then by column.
MissionSpec maze_mission(std::span<const std::string_view> blueprint, std::size_t robots = 16,
                         std::uint64_t seed = 1);
MissionSpec default_maze_mission(std::size_t robots = 16, std::uint64_t seed = 1);

/// Raw operations kept on the operator side. Robots are never handed one.
class OperatorSecrets {
public:
    OperatorSecrets(MissionKind kind, Digest32 root, std::vector<Operation> operations)
        : kind_(kind), root_(root), operations_(std::move(operations)) {}

    [[nodiscard]] MissionKind kind() const { return kind_; }
    [[nodiscard]] const Digest32& root() const { return root_; }
    [[nodiscard]] const std::vector<Operation>& operations() const { return operations_; }

private:
    MissionKind kind_;
    Digest32 root_;
    std::vector<Operation> operations_;
};

struct EncodedMission {
    std::shared_ptr<const merkle::MerkleTree> tree;
    OperatorSecrets secrets;
};

/// Throws std::invalid_argument("empty mission") or ("bad operation encoding").
EncodedMission encode_mission(const MissionSpec& spec);

enum class OpStatus { Pending, Completed };

/// Completed through a peer's proof: only the two hashes are known.
struct HashEvidence {
    Digest32 sensor_hash;
    Digest32 action_hash;
};

/// Completed by this robot: it saw the raw sensor input and action.
struct RawEvidence {
    std::string sensor;
    std::string action;
};

using Evidence = std::variant<std::monostate, HashEvidence, RawEvidence>;

struct OpRecord {
    OpStatus status = OpStatus::Pending;
    Evidence evidence;
};

enum class PeerProofOutcome { Accepted, Rejected, Stale };

std::string_view to_string(PeerProofOutcome outcome);

struct Match {
    std::string action;
    merkle::Proof proof;
};

/// A robot's hash-only view of the mission.
///
/// The working index is the first pending operation and equals n once the
/// mission is complete. Raw sensor/action strings only ever enter through
/// mark_completed, i.e. for operations this robot carried out itself.
class RobotMissionState {
public:
    explicit RobotMissionState(std::shared_ptr<const merkle::MerkleTree> tree);

    [[nodiscard]] const merkle::MerkleTree& tree() const { return *tree_; }
    [[nodiscard]] const Digest32& root() const { return tree_->root(); }
    [[nodiscard]] std::size_t op_count() const { return records_.size(); }
    [[nodiscard]] std::size_t working_index() const { return working_index_; }
    [[nodiscard]] bool complete() const { return working_index_ == records_.size(); }
    [[nodiscard]] const OpRecord& record(std::size_t index) const { return records_.at(index); }
    [[nodiscard]] bool is_completed(std::size_t index) const {
        return index < records_.size() && records_[index].status == OpStatus::Completed;
    }
    /// Operations this robot completed itself.
    [[nodiscard]] std::size_t raw_evidence_count() const;

    /// Checks (sensor, a) for every candidate action against the leaf at the
    /// working index. Returns the matching action and its proof, or nothing.
    [[nodiscard]] std::optional<Match> try_match(std::string_view sensor,
                                                 std::span<const std::string_view> actions) const;

    /// Records an operation this robot carried out. Throws std::logic_error
    /// ("out-of-order completion") unless index is the working index, and
    /// std::invalid_argument if the evidence does not hash to the leaf.
    void mark_completed(std::size_t index, RawEvidence evidence);

    PeerProofOutcome apply_peer_proof(const merkle::Proof& proof);

    /// Re-derives a proof for any completed operation, whatever its evidence.
    [[nodiscard]] std::optional<merkle::Proof> prove(std::size_t index) const;

    /// JSON snapshot of the state. Hash evidence appears as hex; raw evidence
    /// as the strings themselves.
    [[nodiscard]] std::string serialize() const;

private:
    void advance();

    std::shared_ptr<const merkle::MerkleTree> tree_;
    std::vector<OpRecord> records_;
    std::size_t working_index_ = 0;
};

}  // namespace mtswarm::mission
