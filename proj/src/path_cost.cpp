#include "ddrive/path_cost.hpp"

#include <cmath>

namespace ddrive {

double collision_penalty(double d, double r_obs) {
    return std::max(1.0 - d / r_obs, 0.0);
}

double path_collision_violation(const SampledPath& path, const Workspace& ws,
                                double obstacle_inflation) {
    const std::size_t n = path.points.size();
    if (n == 0) return 0.0;
    double total = 0.0;
    for (const Obstacle& obs : ws.obstacles) {
        const double r = obs.radius + obstacle_inflation;
        double sum = 0.0;
        for (const Vec2& p : path.points) {
            sum += collision_penalty(distance(p, obs.center), r);
        }
        total += sum / static_cast<double>(n);
    }
    return total;
}

std::vector<double> speed_profile(const SampledPath& path) {
    std::vector<double> speeds;
    speeds.reserve(path.first_deriv.size());
    for (const Vec2& d : path.first_deriv) speeds.push_back(d.norm());
    return speeds;
}

namespace {

double mean_limit_violation(const std::vector<Vec2>& derivs, double limit) {
    if (derivs.empty()) return 0.0;
    double sum = 0.0;
    for (const Vec2& d : derivs) {
        const double mag = d.norm();
        if (mag > 0.0) sum += std::max(1.0 - limit / mag, 0.0);
    }
    return sum / static_cast<double>(derivs.size());
}

}  // namespace

double velocity_violation(const SampledPath& path, double v_max) {
    return mean_limit_violation(path.first_deriv, v_max);
}

double acceleration_violation(const SampledPath& path, double a_max) {
    return mean_limit_violation(path.second_deriv, a_max);
}

CostBreakdown path_cost(const SampledPath& path, const Workspace& ws, const CostConfig& cfg) {
    CostBreakdown cost;
    cost.length = path.length;
    cost.collision_violation = path_collision_violation(path, ws, cfg.obstacle_inflation);
    cost.velocity_violation = velocity_violation(path, cfg.v_max);
    double violations = cost.collision_violation + cost.velocity_violation;
    if (cfg.use_acceleration_constraint) {
        cost.acceleration_violation = acceleration_violation(path, cfg.a_max);
        violations += cost.acceleration_violation;
    }
    cost.total = cost.length * (1.0 + cfg.beta_p * violations);
    return cost;
}

}  // namespace ddrive
