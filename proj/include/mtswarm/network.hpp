#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>

#include "mtswarm/protocol.hpp"
#include "mtswarm/rng.hpp"

namespace mtswarm::sim {

struct NetworkConfig {
    long long latency_ticks = 0;
    double drop_prob = 0.0;
};

/// Rejects negative latency and drop probabilities outside [0, 1).
void validate(const NetworkConfig& config);

struct Delivery {
    long long due = 0;
    protocol::RobotId from = 0;
    protocol::RobotId to = 0;
    std::shared_ptr<const protocol::Message> message;
};

struct TrafficStats {
    std::uint64_t frames_sent = 0;
    std::uint64_t frames_dropped = 0;
    std::uint64_t frames_delivered = 0;
    std::uint64_t beacon_bytes = 0;
    std::uint64_t query_bytes = 0;
    std::uint64_t proof_bytes = 0;
};

/// Point-to-point channel with fixed latency and independent drops.
///
/// Range is the caller's business: it only hands over frames whose endpoints
/// were in range when sent. A frame sent at tick t arrives at t + latency.
class Network {
public:
    Network(NetworkConfig config, Rng& rng);

    [[nodiscard]] const NetworkConfig& config() const { return config_; }
    [[nodiscard]] const TrafficStats& stats() const { return stats_; }
    [[nodiscard]] std::size_t in_flight() const { return queue_.size(); }

    /// Encodes m, then decodes it once so every recipient sees the wire form.
    static std::shared_ptr<const protocol::Message> through_wire(const protocol::Message& m, std::size_t& frame_bytes);

    void send(long long now, protocol::RobotId from, protocol::RobotId to,
              std::shared_ptr<const protocol::Message> message, std::size_t frame_bytes);

    /// Hands every frame due at or before `now` to handle(const Delivery&).
    /// Frames the handler sends with zero latency are delivered in the same call.
    template <typename Handler>
    void deliver_due(long long now, Handler&& handle) {
        while (!queue_.empty() && queue_.front().due <= now) {
            const Delivery d = std::move(queue_.front());
            queue_.pop_front();
            ++stats_.frames_delivered;
            handle(d);
        }
    }

private:
    NetworkConfig config_;
    Rng& rng_;
    std::deque<Delivery> queue_;
    TrafficStats stats_;
};

}  // namespace mtswarm::sim
