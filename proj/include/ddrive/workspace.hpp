#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddrive/geometry.hpp"
#include "ddrive/rng.hpp"

namespace ddrive {

struct Obstacle {
    Vec2 center;
    double radius = 0.0;  // [m], > 0
};

// Rectangular operating field with circular obstacles. Immutable after
// construction/validation; freely shareable across threads.
struct Workspace {
    double x_min = 0.0, x_max = 4.0;
    double y_min = 0.0, y_max = 4.0;
    std::vector<Obstacle> obstacles;
    Vec2 start;
    Vec2 target;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }

    bool contains(const Vec2& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }

    // True when p is strictly outside every obstacle disc.
    bool clear_of_obstacles(const Vec2& p) const;

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

struct RandomWorkspaceConfig {
    int obstacle_count_min = 5;
    int obstacle_count_max = 10;
    double radius_min = 0.1, radius_max = 0.5;       // [m]
    double center_x_min = 0.5, center_x_max = 3.5;   // [m]
    double center_y_min = 0.5, center_y_max = 3.5;   // [m]
    double x_min = 0.0, x_max = 4.0;                 // field bounds [m]
    double y_min = 0.0, y_max = 4.0;
    std::uint64_t seed = 0;
};

// Parses a workspace document (JSON text, schema version 1) and validates it.
// Throws std::runtime_error on parse failure, std::invalid_argument on an
// invariant violation.
Workspace load_workspace(const std::string& document);

// Serializes to the same schema load_workspace accepts; round-trips exactly.
std::string serialize_workspace(const Workspace& ws);

// Draws a workspace with uniformly distributed obstacle count, radii and
// centers. Start and target are resampled until both land strictly outside
// every obstacle (at most 10000 attempts each, then throws).
// Deterministic for a fixed cfg.seed.
Workspace random_workspace(const RandomWorkspaceConfig& cfg);

// Euclidean distance from (x, y) to the obstacle center.
double distance_to_obstacle(double x, double y, const Obstacle& obs);

}  // namespace ddrive
