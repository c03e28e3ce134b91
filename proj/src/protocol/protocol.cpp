#include "mtswarm/protocol.hpp"

#include <limits>
#include <string>

#include "mtswarm/bytes.hpp"
#include "mtswarm/error.hpp"
#include "mtswarm/merkle_io.hpp"

namespace mtswarm::protocol {

namespace {

constexpr Byte kMagic0 = 'M';
constexpr Byte kMagic1 = 'T';

[[noreturn]] void malformed(const std::string& why) { throw FormatError("malformed frame: " + why); }

}  // namespace

MessageType message_type(const Message& m) {
    switch (m.index()) {
        case 0: return MessageType::Beacon;
        case 1: return MessageType::Query;
        default: return MessageType::Proof;
    }
}

RobotId sender(const Message& m) {
    return std::visit([](const auto& v) { return v.robot_id; }, m);
}

std::vector<Byte> encode_message(const Message& m) {
    ByteWriter body;
    if (const auto* b = std::get_if<Beacon>(&m)) {
        body.u16(b->robot_id);
        body.u32(b->working_index);
        body.digest(b->root);
    } else if (const auto* q = std::get_if<Query>(&m)) {
        body.u16(q->robot_id);
        body.u32(q->op_index);
    } else {
        const auto& p = std::get<ProofMsg>(m);
        body.u16(p.robot_id);
        merkle::write_proof_body(body, p.proof);
    }
    if (body.size() > std::numeric_limits<std::uint16_t>::max()) throw std::invalid_argument("frame payload too large");

    ByteWriter out;
    out.u8(kMagic0);
    out.u8(kMagic1);
    out.u8(kVersion);
    out.u8(static_cast<std::uint8_t>(message_type(m)));
    out.u16(static_cast<std::uint16_t>(body.size()));
    out.raw(body.buffer());
    return out.take();
}

Message decode_message(ByteSpan frame) {
    if (frame.size() < kHeaderSize) malformed("short header");
    if (frame[0] != kMagic0 || frame[1] != kMagic1) malformed("bad magic");
    if (frame[2] != kVersion) malformed("unsupported version");
    const std::uint8_t type = frame[3];
    const std::size_t len = static_cast<std::size_t>(frame[4] | (frame[5] << 8));
    if (frame.size() != kHeaderSize + len) malformed("length mismatch");

    try {
        ByteReader in(frame.subspan(kHeaderSize), "frame");
        Message out;
        switch (type) {
            case static_cast<std::uint8_t>(MessageType::Beacon): {
                Beacon b;
                b.robot_id = in.u16();
                b.working_index = in.u32();
                b.root = in.digest();
                out = b;
                break;
            }
            case static_cast<std::uint8_t>(MessageType::Query): {
                Query q;
                q.robot_id = in.u16();
                q.op_index = in.u32();
                out = q;
                break;
            }
            case static_cast<std::uint8_t>(MessageType::Proof): {
                ProofMsg p;
                p.robot_id = in.u16();
                p.proof = merkle::read_proof_body(in);
                out = std::move(p);
                break;
            }
            default: malformed("unknown type");
        }
        if (in.remaining() != 0) malformed("trailing payload bytes");
        return out;
    } catch (const FormatError& e) {
        const std::string what = e.what();
        if (what.starts_with("malformed frame")) throw;
        malformed(what);
    }
}

Beacon SyncEndpoint::make_beacon(const mission::RobotMissionState& state) const {
    return {id_, static_cast<std::uint32_t>(state.working_index()), state.root()};
}

std::optional<Query> SyncEndpoint::maybe_query(const mission::RobotMissionState& state, SyncSession& session,
                                               long long now) {
    if (state.working_index() >= session.peer_index) return std::nullopt;
    if (session.outstanding_op && now - session.outstanding_since < config_.query_timeout_ticks) return std::nullopt;
    const auto op = static_cast<std::uint32_t>(state.working_index());
    session.outstanding_op = op;
    session.outstanding_since = now;
    ++queries_sent_;
    return Query{id_, op};
}

std::optional<Query> SyncEndpoint::on_beacon(const mission::RobotMissionState& state, const Beacon& beacon,
                                             long long now) {
    if (beacon.root != state.root() || beacon.robot_id == id_) return std::nullopt;
    auto& session = sessions_[beacon.robot_id];
    session.peer_index = beacon.working_index;
    return maybe_query(state, session, now);
}

std::optional<ProofMsg> SyncEndpoint::on_query(const mission::RobotMissionState& state, const Query& query) {
    auto proof = state.prove(query.op_index);
    if (!proof) return std::nullopt;
    sessions_[query.robot_id].proof_bytes_sent += proof->hash_count() * kHashSize;
    ++proofs_sent_;
    return ProofMsg{id_, std::move(*proof)};
}

ProofResult SyncEndpoint::on_proof(mission::RobotMissionState& state, const ProofMsg& msg, long long now) {
    auto& session = sessions_[msg.robot_id];
    if (session.outstanding_op == msg.proof.op_index) session.outstanding_op.reset();

    const auto outcome = state.apply_peer_proof(msg.proof);
    const std::uint64_t bytes = msg.proof.hash_count() * kHashSize;
    switch (outcome) {
        case mission::PeerProofOutcome::Accepted:
            ++accepted_;
            counted_bytes_ += bytes;
            session.proof_bytes_received += bytes;
            break;
        case mission::PeerProofOutcome::Rejected:
            ++rejected_;
            counted_bytes_ += bytes;
            session.proof_bytes_received += bytes;
            session.outstanding_op.reset();
            return {outcome, std::nullopt};
        case mission::PeerProofOutcome::Stale:
            ++stale_;
            break;
    }
    return {outcome, maybe_query(state, session, now)};
}

}  // namespace mtswarm::protocol
