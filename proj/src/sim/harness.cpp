#include <array>

#include "mtswarm/sim.hpp"

namespace mtswarm::sim {

PairTrial pair_sync_trial(const mission::EncodedMission& mission, std::size_t ahead, NetworkConfig network,
                          std::uint64_t seed, long long max_ticks) {
    Rng rng(seed);
    Network net(network, rng);
    protocol::SessionConfig sync;
    sync.query_timeout_ticks = 2 * network.latency_ticks + 1;

    std::array<mission::RobotMissionState, 2> states{mission::RobotMissionState(mission.tree),
                                                     mission::RobotMissionState(mission.tree)};
    std::array<protocol::SyncEndpoint, 2> endpoints{protocol::SyncEndpoint(0, sync), protocol::SyncEndpoint(1, sync)};
    const auto& ops = mission.secrets.operations();
    for (std::size_t j = 0; j < ahead; ++j) states[0].mark_completed(j, {ops[j].sensor, ops[j].action});

    PairTrial out;
    for (long long t = 0; t < max_ticks; ++t) {
        auto send = [&](protocol::RobotId from, const protocol::Message& m) {
            std::size_t bytes = 0;
            net.send(t, from, static_cast<protocol::RobotId>(1 - from), Network::through_wire(m, bytes), bytes);
        };
        for (protocol::RobotId k = 0; k < 2; ++k) {
            send(k, endpoints[k].make_beacon(states[k]));
            ++out.beacons_sent;
        }
        net.deliver_due(t, [&](const Delivery& d) {
            auto& state = states[d.to];
            auto& ep = endpoints[d.to];
            if (const auto* b = std::get_if<protocol::Beacon>(d.message.get())) {
                if (auto q = ep.on_beacon(state, *b, t)) send(d.to, *q);
            } else if (const auto* q = std::get_if<protocol::Query>(d.message.get())) {
                if (auto p = ep.on_query(state, *q)) send(d.to, *p);
            } else {
                ++out.proof_messages;
                auto r = ep.on_proof(state, std::get<protocol::ProofMsg>(*d.message), t);
                if (r.next) send(d.to, *r.next);
            }
        });
        if (states[0].working_index() == states[1].working_index()) {
            out.converged_tick = t;
            break;
        }
    }
    return out;
}

}  // namespace mtswarm::sim
