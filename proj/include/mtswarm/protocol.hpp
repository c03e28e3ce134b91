#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "mtswarm/digest.hpp"
#include "mtswarm/merkle.hpp"
#include "mtswarm/mission.hpp"

/// Beacon/query/proof frames and the per-robot prover/verifier exchange.
///
/// Frame: 'M' 'T', version u8 = 1, type u8, payload_len u16, payload (little-endian).
///   0x01 Beacon  robot_id u16, working_index u32, root 32B
///   0x02 Query   robot_id u16, op_index u32
///   0x03 Proof   robot_id u16, op_index u32, h_s, h_a, path_len u8, path_len x (side u8, hash 32B)
namespace mtswarm::protocol {

using RobotId = std::uint16_t;

inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 6;

enum class MessageType : std::uint8_t { Beacon = 0x01, Query = 0x02, Proof = 0x03 };

struct Beacon {
    RobotId robot_id = 0;
    std::uint32_t working_index = 0;
    Digest32 root;

    friend bool operator==(const Beacon&, const Beacon&) = default;
};

struct Query {
    RobotId robot_id = 0;
    std::uint32_t op_index = 0;

    friend bool operator==(const Query&, const Query&) = default;
};

struct ProofMsg {
    RobotId robot_id = 0;
    merkle::Proof proof;

    friend bool operator==(const ProofMsg&, const ProofMsg&) = default;
};

using Message = std::variant<Beacon, Query, ProofMsg>;

MessageType message_type(const Message& m);
RobotId sender(const Message& m);

std::vector<Byte> encode_message(const Message& m);
/// Throws FormatError("malformed frame: ...") on a bad magic, version, type,
/// length or body.
Message decode_message(ByteSpan frame);

struct SessionConfig {
    /// Ticks an unanswered query stays outstanding before the next beacon may
    /// re-issue it.
    long long query_timeout_ticks = 1;
};

/// What this robot knows about one peer.
struct SyncSession {
    std::uint32_t peer_index = 0;
    std::optional<std::uint32_t> outstanding_op;
    long long outstanding_since = 0;
    std::uint64_t proof_bytes_sent = 0;
    std::uint64_t proof_bytes_received = 0;
};

struct ProofResult {
    mission::PeerProofOutcome outcome;
    std::optional<Query> next;
};

/// Sync state of one robot. Handlers are pure functions of (state, message)
/// apart from the session table and counters kept here.
class SyncEndpoint {
public:
    explicit SyncEndpoint(RobotId id, SessionConfig config = {}) : id_(id), config_(config) {}

    [[nodiscard]] RobotId id() const { return id_; }

    [[nodiscard]] Beacon make_beacon(const mission::RobotMissionState& state) const;

    /// Query for the own working index when the peer is ahead on the same root.
    std::optional<Query> on_beacon(const mission::RobotMissionState& state, const Beacon& beacon, long long now);

    /// Proof for a completed operation, whatever kind of evidence backs it.
    std::optional<ProofMsg> on_query(const mission::RobotMissionState& state, const Query& query);

    /// Applies the proof and asks for the next missing operation while the
    /// peer is still ahead. A rejected proof ends the exchange.
    ProofResult on_proof(mission::RobotMissionState& state, const ProofMsg& msg, long long now);

    [[nodiscard]] const std::map<RobotId, SyncSession>& sessions() const { return sessions_; }

    [[nodiscard]] std::uint64_t proofs_accepted() const { return accepted_; }
    [[nodiscard]] std::uint64_t proofs_rejected() const { return rejected_; }
    [[nodiscard]] std::uint64_t proofs_stale() const { return stale_; }
    /// Hash bytes of every accepted or rejected proof received.
    [[nodiscard]] std::uint64_t counted_proof_bytes() const { return counted_bytes_; }
    [[nodiscard]] std::uint64_t queries_sent() const { return queries_sent_; }
    [[nodiscard]] std::uint64_t proofs_sent() const { return proofs_sent_; }

private:
    std::optional<Query> maybe_query(const mission::RobotMissionState& state, SyncSession& session, long long now);

    RobotId id_;
    SessionConfig config_;
    std::map<RobotId, SyncSession> sessions_;
    std::uint64_t accepted_ = 0;
    std::uint64_t rejected_ = 0;
    std::uint64_t stale_ = 0;
    std::uint64_t counted_bytes_ = 0;
    std::uint64_t queries_sent_ = 0;
    std::uint64_t proofs_sent_ = 0;
};

}  // namespace mtswarm::protocol
