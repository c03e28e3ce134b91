#include <deque>
#include <random>
#include <string>
#include <utility>

#include <gtest/gtest.h>

#include "mtswarm/error.hpp"
#include "mtswarm/protocol.hpp"

namespace mtswarm::protocol {
namespace {

using mission::PeerProofOutcome;
using mission::RobotMissionState;

mission::EncodedMission forage(std::size_t n) { return mission::encode_mission(mission::foraging_mission(n)); }

void complete_first(RobotMissionState& s, const mission::OperatorSecrets& secrets, std::size_t k) {
    const auto& ops = secrets.operations();
    for (std::size_t j = 0; j < k; ++j) s.mark_completed(j, {ops[j].sensor, ops[j].action});
}

struct Node {
    RobotMissionState state;
    SyncEndpoint endpoint;
};

struct PumpStats {
    std::size_t proof_messages = 0;
    std::size_t frames = 0;
};

// Lossless same-tick exchange between two robots. Every frame travels encoded.
PumpStats pump_beacons(Node& a, Node& b, long long now) {
    PumpStats stats;
    std::deque<std::pair<int, std::vector<Byte>>> wire;
    wire.emplace_back(1, encode_message(a.endpoint.make_beacon(a.state)));
    wire.emplace_back(0, encode_message(b.endpoint.make_beacon(b.state)));
    while (!wire.empty()) {
        auto [to, frame] = std::move(wire.front());
        wire.pop_front();
        ++stats.frames;
        Node& self = to == 0 ? a : b;
        const int reply_to = 1 - to;
        const Message m = decode_message(frame);
        if (const auto* beacon = std::get_if<Beacon>(&m)) {
            if (auto q = self.endpoint.on_beacon(self.state, *beacon, now)) wire.emplace_back(reply_to, encode_message(*q));
        } else if (const auto* query = std::get_if<Query>(&m)) {
            if (auto p = self.endpoint.on_query(self.state, *query)) wire.emplace_back(reply_to, encode_message(*p));
        } else {
            ++stats.proof_messages;
            auto r = self.endpoint.on_proof(self.state, std::get<ProofMsg>(m), now);
            if (r.next) wire.emplace_back(reply_to, encode_message(*r.next));
        }
    }
    return stats;
}

TEST(Codec, BeaconIs44Bytes) {
    const auto enc = forage(4);
    const Beacon b{7, 3, enc.tree->root()};
    const auto frame = encode_message(b);
    ASSERT_EQ(frame.size(), 44u);
    EXPECT_EQ(frame[0], 0x4D);
    EXPECT_EQ(frame[1], 0x54);
    EXPECT_EQ(frame[2], 1);
    EXPECT_EQ(frame[3], 0x01);
    EXPECT_EQ(frame[4], 38);
    EXPECT_EQ(frame[5], 0);
    EXPECT_EQ(frame[6], 7);
    EXPECT_EQ(frame[8], 3);
    EXPECT_EQ(Digest32::from_span(ByteSpan(frame).subspan(12)), enc.tree->root());
    EXPECT_EQ(std::get<Beacon>(decode_message(frame)), b);
}

TEST(Codec, QueryRoundTrip) {
    const Message q = Query{1, 5};
    const auto frame = encode_message(q);
    EXPECT_EQ(frame.size(), 12u);
    EXPECT_EQ(frame[3], 0x02);
    EXPECT_EQ(decode_message(frame), q);
}

TEST(Codec, ProofRoundTripAndSize) {
    const auto enc = forage(5);
    RobotMissionState s(enc.tree);
    complete_first(s, enc.secrets, 4);
    const Message m = ProofMsg{9, *s.prove(3)};
    const auto frame = encode_message(m);
    // header, id, op_index, two hashes, path_len, three 33-byte steps
    EXPECT_EQ(frame.size(), 6u + 2 + 4 + 64 + 1 + 3 * 33);
    EXPECT_EQ(decode_message(frame), m);
}

TEST(Codec, LargeMissionFramesStayUnder1024Bytes) {
    merkle::Proof p;
    p.path.resize(20);
    EXPECT_LE(encode_message(ProofMsg{1, p}).size(), 1024u);
}

TEST(Codec, MalformedFrames) {
    const auto enc = forage(4);
    RobotMissionState s(enc.tree);
    complete_first(s, enc.secrets, 1);
    const auto good = encode_message(ProofMsg{2, *s.prove(0)});

    auto expect_malformed = [](std::vector<Byte> f) {
        try {
            (void)decode_message(f);
            ADD_FAILURE() << "accepted";
        } catch (const FormatError& e) {
            EXPECT_TRUE(std::string(e.what()).starts_with("malformed frame")) << e.what();
        }
    };
    for (std::size_t cut = 0; cut < good.size(); ++cut) {
        expect_malformed(std::vector<Byte>(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(cut)));
    }
    auto f = good;
    f[0] = 'X';
    expect_malformed(f);
    f = good;
    f[2] = 2;
    expect_malformed(f);
    f = good;
    f[3] = 0x04;
    expect_malformed(f);
    f = good;
    f.push_back(0);
    expect_malformed(f);
    // Consistent header length but a short path body.
    f = good;
    f[6 + 2 + 4 + 64] = 5;
    expect_malformed(f);
}

TEST(Codec, RandomRoundTrips) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        Message m;
        switch (rng() % 3) {
            case 0: {
                Beacon b{static_cast<RobotId>(rng()), static_cast<std::uint32_t>(rng()), {}};
                b.root.bytes()[rng() % 32] = static_cast<Byte>(rng());
                m = b;
                break;
            }
            case 1: m = Query{static_cast<RobotId>(rng()), static_cast<std::uint32_t>(rng())}; break;
            default: {
                ProofMsg p{static_cast<RobotId>(rng()), {}};
                p.proof.op_index = static_cast<std::uint32_t>(rng() % 1024);
                p.proof.path.resize(rng() % 21);
                for (auto& step : p.proof.path) {
                    step.node = rng() % 2 ? merkle::Position::Right : merkle::Position::Left;
                    step.sibling.bytes()[0] = static_cast<Byte>(rng());
                }
                m = std::move(p);
            }
        }
        ASSERT_EQ(decode_message(encode_message(m)), m);
    }
}

TEST(OnBeacon, QueriesOnlyWhenBehindOnSameRoot) {
    const auto enc = forage(4);
    RobotMissionState s(enc.tree);
    SyncEndpoint ep(1);
    auto q = ep.on_beacon(s, Beacon{2, 2, s.root()}, 0);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, (Query{1, 0}));
    // one outstanding query per peer
    EXPECT_FALSE(ep.on_beacon(s, Beacon{2, 2, s.root()}, 0).has_value());
    EXPECT_FALSE(ep.on_beacon(s, Beacon{3, 0, s.root()}, 0).has_value());
    EXPECT_FALSE(ep.on_beacon(s, Beacon{4, 3, forage(3).tree->root()}, 0).has_value());
    EXPECT_TRUE(ep.sessions().find(4) == ep.sessions().end());
}

TEST(OnBeacon, UnansweredQueryIsReissuedAfterTimeout) {
    const auto enc = forage(4);
    RobotMissionState s(enc.tree);
    SyncEndpoint ep(1, {3});
    EXPECT_TRUE(ep.on_beacon(s, Beacon{2, 2, s.root()}, 10).has_value());
    EXPECT_FALSE(ep.on_beacon(s, Beacon{2, 2, s.root()}, 12).has_value());
    EXPECT_TRUE(ep.on_beacon(s, Beacon{2, 2, s.root()}, 13).has_value());
}

TEST(OnQuery, ProvesCompletedOpsOnly) {
    const auto enc = forage(4);
    RobotMissionState s(enc.tree);
    complete_first(s, enc.secrets, 1);
    SyncEndpoint ep(5);
    const auto p = ep.on_query(s, Query{1, 0});
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->robot_id, 5);
    EXPECT_TRUE(merkle::verify_proof(s.root(), p->proof));
    EXPECT_FALSE(ep.on_query(s, Query{1, 1}).has_value());
    EXPECT_FALSE(ep.on_query(s, Query{1, 77}).has_value());
}

TEST(Sync, PeerThreeAheadTakesThreeRounds) {
    const auto enc = forage(4);
    Node p{RobotMissionState(enc.tree), SyncEndpoint(0)};
    Node v{RobotMissionState(enc.tree), SyncEndpoint(1)};
    complete_first(p.state, enc.secrets, 3);
    const auto stats = pump_beacons(p, v, 0);
    EXPECT_EQ(stats.proof_messages, 3u);
    EXPECT_EQ(v.state.working_index(), 3u);
    EXPECT_EQ(v.endpoint.proofs_accepted(), 3u);
    EXPECT_EQ(v.endpoint.counted_proof_bytes(), 384u);
    EXPECT_EQ(p.endpoint.sessions().at(1).proof_bytes_sent, 384u);
    EXPECT_EQ(v.state.raw_evidence_count(), 0u);
    // Already equal: nothing more moves.
    EXPECT_EQ(pump_beacons(p, v, 1).proof_messages, 0u);
}

TEST(Sync, PairwiseConvergenceForAllGaps) {
    const auto enc = mission::encode_mission(mission::default_maze_mission());
    const std::size_t n = enc.tree->leaf_count();
    for (std::size_t lo = 0; lo <= n; ++lo) {
        for (std::size_t hi = lo; hi <= n; ++hi) {
            Node a{RobotMissionState(enc.tree), SyncEndpoint(0)};
            Node b{RobotMissionState(enc.tree), SyncEndpoint(1)};
            complete_first(a.state, enc.secrets, lo);
            // b got ahead partly by proofs from a, partly by its own work.
            for (std::size_t j = 0; j < lo; ++j) ASSERT_EQ(b.state.apply_peer_proof(*a.state.prove(j)), PeerProofOutcome::Accepted);
            const auto& ops = enc.secrets.operations();
            for (std::size_t j = lo; j < hi; ++j) b.state.mark_completed(j, {ops[j].sensor, ops[j].action});
            const auto stats = pump_beacons(a, b, 0);
            ASSERT_EQ(stats.proof_messages, hi - lo);
            ASSERT_EQ(a.state.working_index(), b.state.working_index());
            ASSERT_EQ(a.endpoint.counted_proof_bytes(), (hi - lo) * merkle::proof_length(n) * kHashSize);
        }
    }
}

TEST(Sync, TwoHopReprove) {
    const auto enc = forage(6);
    Node a{RobotMissionState(enc.tree), SyncEndpoint(0)};
    Node b{RobotMissionState(enc.tree), SyncEndpoint(1)};
    Node c{RobotMissionState(enc.tree), SyncEndpoint(2)};
    complete_first(a.state, enc.secrets, 4);
    pump_beacons(a, b, 0);
    ASSERT_EQ(b.state.working_index(), 4u);
    pump_beacons(b, c, 1);
    EXPECT_EQ(c.state.working_index(), 4u);
    EXPECT_EQ(c.endpoint.proofs_accepted(), 4u);
}

TEST(Sync, StaleProofRetargetsNextQuery) {
    const auto enc = forage(4);
    RobotMissionState prover(enc.tree);
    complete_first(prover, enc.secrets, 3);
    RobotMissionState v(enc.tree);
    SyncEndpoint ep(1);
    ASSERT_TRUE(ep.on_beacon(v, Beacon{0, 3, v.root()}, 0).has_value());
    // v finishes op 0 itself before the answer lands.
    const auto& ops = enc.secrets.operations();
    v.mark_completed(0, {ops[0].sensor, ops[0].action});
    const auto r = ep.on_proof(v, ProofMsg{0, *prover.prove(0)}, 0);
    EXPECT_EQ(r.outcome, PeerProofOutcome::Stale);
    ASSERT_TRUE(r.next.has_value());
    EXPECT_EQ(r.next->op_index, 1u);
    EXPECT_EQ(ep.counted_proof_bytes(), 0u);
}

TEST(Sync, MaliciousProverNeverAdvancesVerifier) {
    const auto enc = forage(8);
    RobotMissionState honest(enc.tree);
    complete_first(honest, enc.secrets, 8);
    const auto good = encode_message(ProofMsg{0, *honest.prove(0)});

    std::size_t tampered = 0;
    for (std::size_t byte = kHeaderSize + 2; byte < good.size(); ++byte) {
        for (int bit = 0; bit < 8; ++bit) {
            auto frame = good;
            frame[byte] ^= static_cast<Byte>(1u << bit);
            RobotMissionState v(enc.tree);
            SyncEndpoint ep(1);
            ASSERT_TRUE(ep.on_beacon(v, Beacon{0, 8, v.root()}, 0).has_value());
            Message m;
            try {
                m = decode_message(frame);
            } catch (const FormatError&) {
                continue;
            }
            ++tampered;
            const auto r = ep.on_proof(v, std::get<ProofMsg>(m), 0);
            ASSERT_NE(r.outcome, PeerProofOutcome::Accepted) << byte << ":" << bit;
            ASSERT_FALSE(r.next.has_value());
            ASSERT_EQ(v.working_index(), 0u);
        }
    }
    EXPECT_GT(tampered, 500u);
}

}  // namespace
}  // namespace mtswarm::protocol
