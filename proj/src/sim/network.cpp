#include "mtswarm/network.hpp"

#include <stdexcept>

namespace mtswarm::sim {

void validate(const NetworkConfig& config) {
    if (config.latency_ticks < 0) throw std::invalid_argument("latency must be non-negative");
    if (!(config.drop_prob >= 0.0 && config.drop_prob < 1.0)) {
        throw std::invalid_argument("drop probability must lie in [0, 1)");
    }
}

Network::Network(NetworkConfig config, Rng& rng) : config_(config), rng_(rng) { validate(config_); }

std::shared_ptr<const protocol::Message> Network::through_wire(const protocol::Message& m, std::size_t& frame_bytes) {
    const auto frame = protocol::encode_message(m);
    frame_bytes = frame.size();
    return std::make_shared<const protocol::Message>(protocol::decode_message(frame));
}

void Network::send(long long now, protocol::RobotId from, protocol::RobotId to,
                   std::shared_ptr<const protocol::Message> message, std::size_t frame_bytes) {
    ++stats_.frames_sent;
    switch (protocol::message_type(*message)) {
        case protocol::MessageType::Beacon: stats_.beacon_bytes += frame_bytes; break;
        case protocol::MessageType::Query: stats_.query_bytes += frame_bytes; break;
        case protocol::MessageType::Proof: stats_.proof_bytes += frame_bytes; break;
    }
    if (rng_.bernoulli(config_.drop_prob)) {
        ++stats_.frames_dropped;
        return;
    }
    queue_.push_back({now + config_.latency_ticks, from, to, std::move(message)});
}

}  // namespace mtswarm::sim
