#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mtswarm/sim.hpp"

namespace mtswarm::sim {

namespace {

constexpr int kPlacementTries = 10000;
constexpr int kDetourTicks = 10;
// Distance from a cell centre at which a maze robot counts as parked on it.
constexpr double kParkTolerance = 0.02;

const std::string_view kForagingActions[] = {mission::kCarryToTarget};
const std::string_view kMazeActions[] = {mission::kStop};

}  // namespace

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string_view to_string(FsmState s) {
    switch (s) {
        case FsmState::Wander: return "wander";
        case FsmState::Check: return "check";
        case FsmState::Handle: return "handle";
        case FsmState::Stop: return "stop";
        case FsmState::Done: return "done";
    }
    return "unknown";
}

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::Completed: return "completed";
        case EventKind::ProofAccepted: return "proof_accepted";
        case EventKind::ProofRejected: return "proof_rejected";
        case EventKind::ProofStale: return "proof_stale";
        case EventKind::Abandoned: return "abandoned";
        case EventKind::DepositRefused: return "deposit_refused";
    }
    return "unknown";
}

World::World(const mission::MissionSpec& spec, std::shared_ptr<const merkle::MerkleTree> tree, std::size_t robots,
             std::uint64_t seed, SimOptions options)
    : config_(spec.arena),
      kind_(spec.kind),
      operations_(spec.operations),
      tree_(std::move(tree)),
      n_(tree_ ? tree_->leaf_count() : 0),
      seed_(seed),
      options_(options),
      rng_(seed),
      network_(options.network, rng_) {
    if (!tree_) throw std::invalid_argument("world needs a tree");
    if (robots < 1 || robots > 0xFFFF) throw std::invalid_argument("robot count must lie in [1, 65535]");
    if (!(config_.side > 0 && config_.grid > 0 && config_.dt > 0 && config_.speed >= 0 && config_.robot_radius > 0)) {
        throw std::invalid_argument("arena dimensions must be positive");
    }
    if (operations_.size() != n_) throw std::invalid_argument("tree does not match mission");
    for (std::size_t j = 0; j < n_; ++j) {
        if (mission::encode_operation(operations_[j]).leaf != tree_->leaf(j)) {
            throw std::invalid_argument("tree does not match mission");
        }
        if (kind_ == mission::MissionKind::Foraging) {
            if (!mission::parse_color_sensor(operations_[j].sensor)) {
                throw std::invalid_argument("foraging operations must name colours");
            }
            for (std::size_t k = 0; k < j; ++k) {
                if (operations_[k].sensor == operations_[j].sensor) throw std::invalid_argument("repeated task colour");
            }
        } else {
            const auto c = mission::parse_cell_sensor(operations_[j].sensor);
            if (!c || c->x >= config_.grid || c->y >= config_.grid) {
                throw std::invalid_argument("maze operation outside the grid");
            }
        }
    }

    protocol::SessionConfig sync;
    sync.query_timeout_ticks = 2 * options_.network.latency_ticks + 1;
    robots_.reserve(robots);
    for (std::size_t k = 0; k < robots; ++k) robots_.emplace_back(static_cast<protocol::RobotId>(k), tree_, sync);
    completions_by_robot_.assign(robots, 0);

    if (kind_ == mission::MissionKind::Foraging) place_tasks();
    place_robots();
}

GridCell World::cell_of(Vec2 p) const {
    const double s = config_.cell_size();
    auto clamp = [&](double v) { return std::clamp(static_cast<int>(std::floor(v / s)), 0, config_.grid - 1); };
    return {clamp(p.x), clamp(p.y)};
}

Vec2 World::center_of(GridCell c) const {
    const double s = config_.cell_size();
    return {(c.x + 0.5) * s, (c.y + 0.5) * s};
}

void World::place_tasks() {
    std::vector<GridCell> free;
    for (int y = 0; y < config_.grid; ++y) {
        for (int x = 0; x < config_.grid; ++x) {
            if (!(GridCell{x, y} == config_.target_cell())) free.push_back({x, y});
        }
    }
    if (free.size() < n_) throw std::runtime_error("infeasible placement: more tasks than free cells");
    for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t pick = j + rng_.index(free.size() - j);
        std::swap(free[j], free[pick]);
        task_cells_.push_back(free[j]);
    }
}

void World::place_robots() {
    const double r = config_.robot_radius;
    for (std::size_t k = 0; k < robots_.size(); ++k) {
        bool placed = false;
        for (int t = 0; t < kPlacementTries && !placed; ++t) {
            const Vec2 p{rng_.uniform(r, config_.side - r), rng_.uniform(r, config_.side - r)};
            if (kind_ == mission::MissionKind::Foraging && cell_of(p) == config_.target_cell()) continue;
            placed = std::none_of(robots_.begin(), robots_.begin() + static_cast<std::ptrdiff_t>(k),
                                  [&](const Robot& o) { return distance(o.pos, p) < 2 * r; });
            if (placed) robots_[k].pos = p;
        }
        if (!placed) throw std::runtime_error("infeasible placement: arena too crowded");
        robots_[k].heading = rng_.uniform(0.0, 2 * std::numbers::pi);
    }
}

std::optional<std::string> World::sense(const Robot& r) const {
    if (kind_ == mission::MissionKind::Maze) return mission::cell_sensor(cell_of(r.pos));
    std::optional<std::string> best;
    double best_d = config_.vision_range;
    for (std::size_t j = 0; j < task_cells_.size(); ++j) {
        const double d = distance(r.pos, center_of(task_cells_[j]));
        if (d <= best_d) {
            best_d = d;
            best = operations_[j].sensor;
        }
    }
    return best;
}

bool World::in_range(const Robot& a, const Robot& b) const { return distance(a.pos, b.pos) <= config_.comm_range; }

void World::log(EventKind kind, const Robot& r, protocol::RobotId peer, std::uint32_t op) {
    events_.push_back({tick_, kind, r.id, peer, op});
}

void World::step() {
    std::vector<std::optional<std::string>> sensed;
    sensed.reserve(robots_.size());
    for (const auto& r : robots_) sensed.push_back(sense(r));

    exchange_messages();

    for (std::size_t k = 0; k < robots_.size(); ++k) run_fsm(robots_[k], sensed[k]);
    for (auto& r : robots_) move(r);
    ++tick_;
}

void World::set_pose(std::size_t robot, Vec2 pos, double heading) {
    robots_.at(robot).pos = pos;
    robots_.at(robot).heading = heading;
}

void World::exchange_messages() {
    auto reply = [&](const Robot& self, protocol::RobotId to, const protocol::Message& m) {
        if (!in_range(self, robots_[to])) return;
        std::size_t bytes = 0;
        auto wire = Network::through_wire(m, bytes);
        network_.send(tick_, self.id, to, std::move(wire), bytes);
    };

    for (const auto& r : robots_) {
        std::shared_ptr<const protocol::Message> beacon;
        std::size_t bytes = 0;
        for (const auto& other : robots_) {
            if (other.id == r.id || !in_range(r, other)) continue;
            if (!beacon) beacon = Network::through_wire(r.sync.make_beacon(r.mission), bytes);
            network_.send(tick_, r.id, other.id, beacon, bytes);
        }
    }

    network_.deliver_due(tick_, [&](const Delivery& d) {
        Robot& self = robots_[d.to];
        if (const auto* b = std::get_if<protocol::Beacon>(d.message.get())) {
            if (auto q = self.sync.on_beacon(self.mission, *b, tick_)) reply(self, d.from, *q);
        } else if (const auto* q = std::get_if<protocol::Query>(d.message.get())) {
            if (auto p = self.sync.on_query(self.mission, *q)) reply(self, d.from, *p);
        } else {
            const auto& pm = std::get<protocol::ProofMsg>(*d.message);
            const auto result = self.sync.on_proof(self.mission, pm, tick_);
            const EventKind kind = result.outcome == mission::PeerProofOutcome::Accepted ? EventKind::ProofAccepted
                                   : result.outcome == mission::PeerProofOutcome::Rejected
                                       ? EventKind::ProofRejected
                                       : EventKind::ProofStale;
            log(kind, self, d.from, pm.proof.op_index);
            if (result.next) reply(self, d.from, *result.next);
        }
    });
}

void World::run_fsm(Robot& r, const std::optional<std::string>& sensed) {
    if (r.state == FsmState::Stop) return;
    if (r.state == FsmState::Handle) {
        if (r.mission.is_completed(r.job_op)) {
            drop_job(r, EventKind::Abandoned);
        } else if (tick_ - r.job_since > options_.handle_timeout_ticks) {
            drop_job(r, EventKind::Abandoned);
            r.checked_index = static_cast<std::size_t>(-1);
        } else {
            progress_job(r);
        }
        return;
    }
    if (r.mission.complete()) {
        r.state = FsmState::Done;
        return;
    }
    r.state = FsmState::Wander;
    if (!sensed || (*sensed == r.checked_sensor && r.mission.working_index() == r.checked_index)) return;

    r.state = FsmState::Check;
    const std::span<const std::string_view> actions =
        kind_ == mission::MissionKind::Foraging ? std::span<const std::string_view>(kForagingActions)
                                                : std::span<const std::string_view>(kMazeActions);
    if (auto match = r.mission.try_match(*sensed, actions)) {
        begin_job(r, *sensed, *match);
        progress_job(r);
    } else {
        r.checked_sensor = *sensed;
        r.checked_index = r.mission.working_index();
        r.state = FsmState::Wander;
    }
}

void World::begin_job(Robot& r, const std::string& sensor, const mission::Match& match) {
    r.state = FsmState::Handle;
    r.job_op = match.proof.op_index;
    r.job_sensor = sensor;
    r.job_action = match.action;
    r.job_picked_up = false;
    r.job_since = tick_;
    r.detour_ticks = 0;
    r.goal = kind_ == mission::MissionKind::Foraging ? center_of(task_cells_[r.job_op]) : center_of(cell_of(r.pos));
}

void World::progress_job(Robot& r) {
    if (kind_ == mission::MissionKind::Foraging) {
        if (!r.job_picked_up) {
            if (cell_of(r.pos) == task_cells_[r.job_op]) {
                r.job_picked_up = true;
                r.goal = center_of(config_.target_cell());
            }
        } else if (cell_of(r.pos) == config_.target_cell()) {
            complete_job(r);
        }
        return;
    }
    const GridCell c = cell_of(r.goal);
    if (occupied_.contains({c.x, c.y})) {
        drop_job(r, EventKind::DepositRefused);
        return;
    }
    if (distance(r.pos, r.goal) <= kParkTolerance) complete_job(r);
}

void World::complete_job(Robot& r) {
    if (kind_ == mission::MissionKind::Foraging) {
        // The target keeps what it has received; a second delivery of the same
        // task is physically refused.
        if (deposited_.contains(r.job_op)) {
            drop_job(r, EventKind::DepositRefused);
            return;
        }
        deposited_.insert(r.job_op);
    } else {
        const GridCell c = cell_of(r.goal);
        occupied_.insert({c.x, c.y});
        r.pos = r.goal;
    }
    r.mission.mark_completed(r.job_op, {r.job_sensor, r.job_action});
    ++completed_;
    ++completions_by_robot_[r.id];
    last_completion_tick_ = tick_;
    log(EventKind::Completed, r, r.id, static_cast<std::uint32_t>(r.job_op));

    if (kind_ == mission::MissionKind::Maze) {
        r.state = FsmState::Stop;
    } else {
        r.state = r.mission.complete() ? FsmState::Done : FsmState::Wander;
    }
    r.job_sensor.clear();
    r.job_action.clear();
}

void World::drop_job(Robot& r, EventKind why) {
    log(why, r, r.id, static_cast<std::uint32_t>(r.job_op));
    if (why == EventKind::DepositRefused) {
        r.checked_sensor = r.job_sensor;
        r.checked_index = r.mission.working_index();
    }
    r.state = r.mission.complete() ? FsmState::Done : FsmState::Wander;
    r.job_sensor.clear();
    r.job_action.clear();
    r.detour_ticks = 0;
}

bool World::obstacle_ahead(const Robot& r) const {
    const double hx = std::cos(r.heading);
    const double hy = std::sin(r.heading);
    const double wall_reach = config_.obstacle_range + config_.robot_radius;
    if ((hx < 0 && r.pos.x <= wall_reach) || (hx > 0 && config_.side - r.pos.x <= wall_reach) ||
        (hy < 0 && r.pos.y <= wall_reach) || (hy > 0 && config_.side - r.pos.y <= wall_reach)) {
        return true;
    }
    const double robot_reach = config_.obstacle_range + 2 * config_.robot_radius;
    for (const auto& o : robots_) {
        if (o.id == r.id) continue;
        const double dx = o.pos.x - r.pos.x;
        const double dy = o.pos.y - r.pos.y;
        if (dx * dx + dy * dy <= robot_reach * robot_reach && dx * hx + dy * hy > 0) return true;
    }
    return false;
}

bool World::blocked(const Robot& r, Vec2 next) const {
    const double rad = config_.robot_radius;
    if (next.x < rad || next.y < rad || next.x > config_.side - rad || next.y > config_.side - rad) return true;
    const double min_sq = 4 * rad * rad;
    return std::any_of(robots_.begin(), robots_.end(), [&](const Robot& o) {
        if (o.id == r.id) return false;
        const double dx = o.pos.x - next.x;
        const double dy = o.pos.y - next.y;
        return dx * dx + dy * dy < min_sq;
    });
}

void World::move(Robot& r) {
    if (r.state == FsmState::Stop) return;
    const bool handling = r.state == FsmState::Handle;
    if (handling && r.detour_ticks == 0) {
        r.heading = std::atan2(r.goal.y - r.pos.y, r.goal.x - r.pos.x);
    } else if (!handling && rng_.bernoulli(config_.turn_probability)) {
        r.heading = rng_.uniform(0.0, 2 * std::numbers::pi);
    }
    if (obstacle_ahead(r)) {
        const double sign = rng_.uniform() < 0.5 ? -1.0 : 1.0;
        r.heading += sign * rng_.uniform(std::numbers::pi / 2, std::numbers::pi);
        if (handling) r.detour_ticks = kDetourTicks;
    }
    r.heading = std::remainder(r.heading, 2 * std::numbers::pi);

    const double stride = config_.speed * config_.dt;
    Vec2 next{r.pos.x + stride * std::cos(r.heading), r.pos.y + stride * std::sin(r.heading)};
    if (handling && r.detour_ticks == 0 && distance(r.pos, r.goal) <= stride) next = r.goal;
    if (blocked(r, next)) {
        r.heading = rng_.uniform(0.0, 2 * std::numbers::pi);
        if (handling) r.detour_ticks = kDetourTicks;
    } else {
        r.pos = next;
    }
    if (r.detour_ticks > 0) --r.detour_ticks;
}

RunRecord World::record() const {
    RunRecord rec;
    rec.kind = kind_;
    rec.seed = seed_;
    rec.robots = robots_.size();
    rec.n = n_;
    rec.network = options_.network;
    rec.finished = finished();
    rec.finishing_time_s =
        rec.finished ? static_cast<double>(last_completion_tick_ + 1) * config_.dt : config_.time_cap;
    rec.ticks = tick_;
    rec.ops_per_robot = completions_by_robot_;
    rec.all_synced = std::all_of(robots_.begin(), robots_.end(), [](const Robot& r) { return r.mission.complete(); });
    for (const auto& r : robots_) {
        rec.proof_count += r.sync.proofs_accepted() + r.sync.proofs_rejected();
        rec.stale_proofs += r.sync.proofs_stale();
        rec.ac_bytes += r.sync.counted_proof_bytes();
    }
    rec.traffic = network_.stats();
    rec.events = events_;
    return rec;
}

World new_world(const mission::MissionSpec& spec, std::shared_ptr<const merkle::MerkleTree> tree,
                std::size_t robots, std::uint64_t seed, SimOptions options) {
    return World(spec, std::move(tree), robots, seed, options);
}

RunRecord run(const mission::MissionSpec& spec, std::shared_ptr<const merkle::MerkleTree> tree, std::size_t robots,
              std::uint64_t seed, SimOptions options) {
    World world(spec, std::move(tree), robots, seed, options);
    while (!world.finished() && !world.at_cap()) world.step();
    return world.record();
}

}  // namespace mtswarm::sim
