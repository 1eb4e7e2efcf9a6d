#pragma once

#include <vector>

#include "ddrive/spline_path.hpp"
#include "ddrive/workspace.hpp"

namespace ddrive {

struct CostConfig {
    double beta_p = 150.0;  // penalty coefficient
    double v_max = 0.2;     // translational velocity limit [m/s]
    double a_max = 0.02;    // acceleration limit [m/s^2]
    bool use_acceleration_constraint = false;
    // Optional obstacle radius inflation by the body radius; off by default
    // (the path point is treated as the robot center).
    double obstacle_inflation = 0.0;
};

struct CostBreakdown {
    double length = 0.0;                  // [m]
    double collision_violation = 0.0;     // summed per-obstacle means
    double velocity_violation = 0.0;      // mean over samples
    double acceleration_violation = 0.0;  // mean over samples
    double total = 0.0;                   // length * (1 + beta * violations)

    bool feasible() const { return collision_violation == 0.0; }
};

// Penetration ramp for one sample against one obstacle:
// max(1 - d/r_obs, 0), where d is the distance to the obstacle center.
double collision_penalty(double d, double r_obs);

// Per obstacle: mean penalty over all samples (zeros included); summed over
// obstacles. Zero exactly iff every sample clears every obstacle disc.
double path_collision_violation(const SampledPath& path, const Workspace& ws,
                                double obstacle_inflation = 0.0);

// |v_i| = norm of the first derivative at each sample.
std::vector<double> speed_profile(const SampledPath& path);

// Mean over samples of max(1 - v_max/|v|, 0); zero-speed samples contribute 0.
double velocity_violation(const SampledPath& path, double v_max);

// Same ramp on the second-derivative norm.
double acceleration_violation(const SampledPath& path, double a_max);

// Full breakdown; total = length * (1 + beta*(collision + velocity
// [+ acceleration when enabled])).
CostBreakdown path_cost(const SampledPath& path, const Workspace& ws,
                        const CostConfig& cfg);

}  // namespace ddrive
