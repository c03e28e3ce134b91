#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "mtswarm/arena.hpp"
#include "mtswarm/merkle.hpp"
#include "mtswarm/mission.hpp"
#include "mtswarm/network.hpp"
#include "mtswarm/protocol.hpp"
#include "mtswarm/rng.hpp"

namespace mtswarm::sim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(Vec2 a, Vec2 b);

enum class FsmState { Wander, Check, Handle, Stop, Done };

std::string_view to_string(FsmState s);

struct SimOptions {
    NetworkConfig network;
    /// A robot stuck in Handle this long gives up and wanders again.
    long long handle_timeout_ticks = 1200;
};

struct Robot {
    Robot(protocol::RobotId id, std::shared_ptr<const merkle::MerkleTree> tree, protocol::SessionConfig sync)
        : id(id), mission(std::move(tree)), sync(id, sync) {}

    protocol::RobotId id;
    Vec2 pos;
    double heading = 0.0;
    FsmState state = FsmState::Wander;
    mission::RobotMissionState mission;
    protocol::SyncEndpoint sync;

    // Current Handle job.
    std::size_t job_op = 0;
    std::string job_sensor;
    std::string job_action;
    bool job_picked_up = false;
    Vec2 goal;
    long long job_since = 0;
    int detour_ticks = 0;

    // Last Check that failed, so the same input is not rehashed every tick.
    std::string checked_sensor;
    std::size_t checked_index = static_cast<std::size_t>(-1);
};

enum class EventKind { Completed, ProofAccepted, ProofRejected, ProofStale, Abandoned, DepositRefused };

std::string_view to_string(EventKind k);

struct Event {
    long long tick = 0;
    EventKind kind = EventKind::Completed;
    protocol::RobotId robot = 0;
    /// Sending robot for proof events; unused otherwise.
    protocol::RobotId peer = 0;
    std::uint32_t op = 0;

    friend bool operator==(const Event&, const Event&) = default;
};

struct RunRecord {
    mission::MissionKind kind = mission::MissionKind::Foraging;
    std::uint64_t seed = 0;
    std::size_t robots = 0;
    std::size_t n = 0;
    NetworkConfig network;
    bool finished = false;
    /// Clock at the last completion, or the time cap when unfinished.
    double finishing_time_s = 0.0;
    long long ticks = 0;
    std::vector<std::size_t> ops_per_robot;
    /// Accepted plus rejected proof messages.
    std::uint64_t proof_count = 0;
    std::uint64_t stale_proofs = 0;
    std::uint64_t ac_bytes = 0;
    /// Every robot ended at i = n.
    bool all_synced = false;
    TrafficStats traffic;
    std::vector<Event> events;
};

/// Discrete-time arena: sense, exchange messages, run the FSM, move.
class World {
public:
    /// Throws std::invalid_argument for an inconsistent mission and
    /// std::runtime_error when robots or tasks cannot be placed.
    World(const mission::MissionSpec& spec, std::shared_ptr<const merkle::MerkleTree> tree, std::size_t robots,
          std::uint64_t seed, SimOptions options = {});

    void step();
    /// Scenario setup: puts a robot somewhere without any checks.
    void set_pose(std::size_t robot, Vec2 pos, double heading);
    [[nodiscard]] bool finished() const { return completed_ == n_; }
    [[nodiscard]] bool at_cap() const { return tick_ >= config_.tick_cap(); }
    [[nodiscard]] long long tick() const { return tick_; }
    [[nodiscard]] double clock() const { return static_cast<double>(tick_) * config_.dt; }

    [[nodiscard]] const ArenaConfig& config() const { return config_; }
    [[nodiscard]] mission::MissionKind kind() const { return kind_; }
    [[nodiscard]] const std::vector<Robot>& robots() const { return robots_; }
    [[nodiscard]] const std::vector<Event>& events() const { return events_; }
    /// Foraging: task colour marker per operation, at the centre of its cell.
    [[nodiscard]] const std::vector<GridCell>& task_cells() const { return task_cells_; }
    [[nodiscard]] const std::set<std::pair<int, int>>& occupied_cells() const { return occupied_; }
    [[nodiscard]] std::size_t completed_ops() const { return completed_; }

    [[nodiscard]] GridCell cell_of(Vec2 p) const;
    [[nodiscard]] Vec2 center_of(GridCell c) const;
    [[nodiscard]] std::optional<std::string> sense(const Robot& r) const;

    [[nodiscard]] RunRecord record() const;

private:
    void place_tasks();
    void place_robots();
    void exchange_messages();
    void run_fsm(Robot& r, const std::optional<std::string>& sensed);
    void begin_job(Robot& r, const std::string& sensor, const mission::Match& match);
    void progress_job(Robot& r);
    void complete_job(Robot& r);
    void drop_job(Robot& r, EventKind why);
    void move(Robot& r);
    [[nodiscard]] bool obstacle_ahead(const Robot& r) const;
    [[nodiscard]] bool blocked(const Robot& r, Vec2 next) const;
    [[nodiscard]] bool in_range(const Robot& a, const Robot& b) const;
    void log(EventKind kind, const Robot& r, protocol::RobotId peer, std::uint32_t op);

    ArenaConfig config_;
    mission::MissionKind kind_;
    std::vector<mission::Operation> operations_;
    std::shared_ptr<const merkle::MerkleTree> tree_;
    std::size_t n_;
    std::uint64_t seed_;
    SimOptions options_;
    Rng rng_;
    Network network_;
    std::vector<Robot> robots_;
    std::vector<GridCell> task_cells_;
    std::set<std::size_t> deposited_;
    std::set<std::pair<int, int>> occupied_;
    std::vector<std::size_t> completions_by_robot_;
    std::size_t completed_ = 0;
    long long tick_ = 0;
    long long last_completion_tick_ = -1;
    std::vector<Event> events_;
};

World new_world(const mission::MissionSpec& spec, std::shared_ptr<const merkle::MerkleTree> tree,
                std::size_t robots, std::uint64_t seed, SimOptions options = {});

/// Steps until every operation is done or the time cap is hit.
RunRecord run(const mission::MissionSpec& spec, std::shared_ptr<const merkle::MerkleTree> tree,
              std::size_t robots, std::uint64_t seed, SimOptions options = {});

/// Two robots in permanent contact, one `ahead` operations in front.
/// Returns the tick at which their working indices met, or nothing if they
/// had not met by max_ticks.
struct PairTrial {
    std::optional<long long> converged_tick;
    std::uint64_t beacons_sent = 0;
    std::uint64_t proof_messages = 0;
};

PairTrial pair_sync_trial(const mission::EncodedMission& mission, std::size_t ahead, NetworkConfig network,
                          std::uint64_t seed, long long max_ticks);

std::string run_csv_header();
std::string run_csv_row(const RunRecord& r);
/// One JSON object per line: tick, time_s, kind, robot, peer, op.
void write_events_ndjson(std::ostream& out, const RunRecord& r, double dt);

}  // namespace mtswarm::sim
