#pragma once

namespace mtswarm {

struct GridCell {
    int x = 0;
    int y = 0;

    friend bool operator==(const GridCell&, const GridCell&) = default;
};

/// Arena geometry, sensing radii and timing. Lengths in metres, times in seconds.
struct ArenaConfig {
    double side = 2.5;
    int grid = 5;
    double comm_range = 1.0;
    double vision_range = 0.35;
    double obstacle_range = 0.10;
    double time_cap = 5100.0;
    double dt = 0.1;

    double robot_radius = 0.035;
    double speed = 0.12;
    // Per-tick chance that a wandering robot picks a fresh heading.
    double turn_probability = 0.05;

    [[nodiscard]] double cell_size() const { return side / grid; }
    [[nodiscard]] GridCell target_cell() const { return {grid / 2, grid / 2}; }
    [[nodiscard]] long long tick_cap() const { return static_cast<long long>(time_cap / dt + 0.5); }

    friend bool operator==(const ArenaConfig&, const ArenaConfig&) = default;
};

}  // namespace mtswarm
