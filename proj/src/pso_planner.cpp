#include "ddrive/pso_planner.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace ddrive {

void PsoConfig::validate() const {
    if (iter_max < 1) throw std::invalid_argument("pso: iter_max must be >= 1");
    if (pop_max < 2) throw std::invalid_argument("pso: pop_max must be >= 2");
    if (!(inertia_w > 0.0 && inertia_w <= 1.0)) {
        throw std::invalid_argument("pso: inertia_w must be in (0,1]");
    }
    if (c1 < 0.0 || c2 < 0.0) throw std::invalid_argument("pso: c1,c2 must be >= 0");
    if (!(inertia_damping > 0.0 && inertia_damping <= 1.0)) {
        throw std::invalid_argument("pso: inertia_damping must be in (0,1]");
    }
    if (n_control_points < 1) throw std::invalid_argument("pso: n_control_points must be >= 1");
    if (!(convergence_rel_tol >= 0.0)) {
        throw std::invalid_argument("pso: convergence_rel_tol must be >= 0");
    }
}

namespace {

int thread_count(const ExecPolicy& exec) {
    if (!exec.parallel) return 1;
    return exec.jobs > 0 ? exec.jobs : omp_get_max_threads();
}

CostBreakdown evaluate(const Particle& particle, const PathSampler& sampler,
                       const Workspace& ws, const CostConfig& cost_cfg) {
    return path_cost(sampler.sample(particle.position), ws, cost_cfg);
}

// Global best over personal bests; first (lowest-index) particle wins ties.
void refresh_gbest(Swarm& swarm) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(swarm.particles.size()); ++i) {
        if (best < 0 || swarm.particles[i].best_cost.total <
                            swarm.particles[best].best_cost.total) {
            best = i;
        }
    }
    swarm.gbest_position = swarm.particles[best].best_position;
    swarm.gbest_cost = swarm.particles[best].best_cost;
}

}  // namespace

Swarm init_swarm(const SearchBounds& bounds, const PsoConfig& cfg,
                 const PathSampler& sampler, const Workspace& ws,
                 const CostConfig& cost_cfg, const ExecPolicy& exec) {
    cfg.validate();
    const int dims = 2 * static_cast<int>(bounds.lower.size());

    Swarm swarm;
    swarm.lower.resize(dims);
    swarm.upper.resize(dims);
    for (std::size_t i = 0; i < bounds.lower.size(); ++i) {
        swarm.lower[2 * i] = bounds.lower[i].x;
        swarm.upper[2 * i] = bounds.upper[i].x;
        swarm.lower[2 * i + 1] = bounds.lower[i].y;
        swarm.upper[2 * i + 1] = bounds.upper[i].y;
    }

    swarm.particles.reserve(cfg.pop_max);
    for (int i = 0; i < cfg.pop_max; ++i) {
        // Stream per particle: draw order is position dims, then velocity dims.
        Particle particle(split_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        particle.position.resize(dims);
        particle.velocity.resize(dims);
        for (int d = 0; d < dims; ++d) {
            const double width = swarm.upper[d] - swarm.lower[d];
            particle.position[d] = swarm.lower[d] + particle.rng.u01() * width;
        }
        for (int d = 0; d < dims; ++d) {
            const double width = swarm.upper[d] - swarm.lower[d];
            particle.velocity[d] = (2.0 * particle.rng.u01() - 1.0) * width;
        }
        particle.best_position = particle.position;
        swarm.particles.push_back(std::move(particle));
    }

    const int n = static_cast<int>(swarm.particles.size());
#pragma omp parallel for schedule(static) num_threads(thread_count(exec)) if (exec.parallel)
    for (int i = 0; i < n; ++i) {
        Particle& particle = swarm.particles[i];
        particle.cost = evaluate(particle, sampler, ws, cost_cfg);
        particle.best_cost = particle.cost;
    }
    refresh_gbest(swarm);
    return swarm;
}

void pso_step(Swarm& swarm, const PsoConfig& cfg, const PathSampler& sampler,
              const Workspace& ws, const CostConfig& cost_cfg, const ExecPolicy& exec) {
    const int n = static_cast<int>(swarm.particles.size());
    const int dims = static_cast<int>(swarm.lower.size());

#pragma omp parallel for schedule(static) num_threads(thread_count(exec)) if (exec.parallel)
    for (int i = 0; i < n; ++i) {
        Particle& particle = swarm.particles[i];
        for (int d = 0; d < dims; ++d) {
            const double g1 = particle.rng.u01();
            const double g2 = particle.rng.u01();
            particle.velocity[d] =
                cfg.inertia_w * particle.velocity[d] +
                cfg.c1 * g1 * (particle.best_position[d] - particle.position[d]) +
                cfg.c2 * g2 * (swarm.gbest_position[d] - particle.position[d]);
            particle.position[d] += particle.velocity[d];
            if (particle.position[d] < swarm.lower[d]) {
                particle.position[d] = swarm.lower[d];
                particle.velocity[d] = 0.0;
            } else if (particle.position[d] > swarm.upper[d]) {
                particle.position[d] = swarm.upper[d];
                particle.velocity[d] = 0.0;
            }
        }
        particle.cost = evaluate(particle, sampler, ws, cost_cfg);
        if (particle.cost.total <= particle.best_cost.total) {
            particle.best_cost = particle.cost;
            particle.best_position = particle.position;
        }
    }
    refresh_gbest(swarm);
}

PlanResult plan(const Workspace& ws, const SplineConfig& spline_cfg,
                const CostConfig& cost_cfg, const PsoConfig& pso_cfg,
                const ExecPolicy& exec) {
    const auto t0 = std::chrono::steady_clock::now();
    ws.validate();
    pso_cfg.validate();

    const SearchBounds bounds = control_bounds(ws, pso_cfg.n_control_points,
                                               pso_cfg.lateral_margin);
    const PathSampler sampler(ws.start, ws.target, pso_cfg.n_control_points, spline_cfg);
    Swarm swarm = init_swarm(bounds, pso_cfg, sampler, ws, cost_cfg, exec);

    PlanResult result;
    result.best_cost_history.reserve(pso_cfg.iter_max);
    result.mean_cost_history.reserve(pso_cfg.iter_max);
    PsoConfig annealed = pso_cfg;
    for (int iter = 0; iter < pso_cfg.iter_max; ++iter) {
        pso_step(swarm, annealed, sampler, ws, cost_cfg, exec);
        annealed.inertia_w *= pso_cfg.inertia_damping;
        double sum = 0.0;
        for (const Particle& particle : swarm.particles) sum += particle.cost.total;
        result.best_cost_history.push_back(swarm.gbest_cost.total);
        result.mean_cost_history.push_back(sum / static_cast<double>(swarm.particles.size()));
    }

    result.best_polygon.start = ws.start;
    result.best_polygon.target = ws.target;
    for (int i = 0; i < pso_cfg.n_control_points; ++i) {
        result.best_polygon.interior.push_back(
            {swarm.gbest_position[2 * i], swarm.gbest_position[2 * i + 1]});
    }
    result.best_path = sampler.sample(swarm.gbest_position);
    result.best_cost = swarm.gbest_cost;
    result.converged_at_iteration =
        convergence_iteration(result.best_cost_history, pso_cfg.convergence_rel_tol);
    result.success = result.best_cost.feasible();
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

int convergence_iteration(std::span<const double> history, double rel_tol) {
    if (history.empty()) throw std::invalid_argument("convergence_iteration: empty history");
    const double threshold = (1.0 + rel_tol) * history.back();
    for (std::size_t k = 0; k < history.size(); ++k) {
        if (history[k] <= threshold) return static_cast<int>(k);
    }
    return static_cast<int>(history.size()) - 1;
}

}  // namespace ddrive
