#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ddrive/exec.hpp"
#include "ddrive/path_cost.hpp"
#include "ddrive/rng.hpp"
#include "ddrive/spline_path.hpp"
#include "ddrive/workspace.hpp"

namespace ddrive {

struct PsoConfig {
    int iter_max = 300;
    int pop_max = 100;
    double inertia_w = 0.9;  // initial inertia weight
    double c1 = 2.0;         // personal learning coefficient
    double c2 = 2.0;         // global learning coefficient
    int n_control_points = 5;
    std::uint64_t seed = 0;
    double convergence_rel_tol = 1e-3;
    double lateral_margin = -1.0;  // negative = full workspace extent
    // Optional per-iteration inertia multiplier; 1.0 keeps the weight constant.
    double inertia_damping = 1.0;

    void validate() const;  // throws std::invalid_argument
};

// One candidate path, encoded as the interior control coordinates
// [x1, y1, ..., xn, yn]. Each particle owns an independent RNG stream so the
// swarm update is identical under any evaluation order or thread count.
struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    CostBreakdown cost;
    CostBreakdown best_cost;
    Rng rng;

    explicit Particle(std::uint64_t stream_seed) : rng(stream_seed) {}
};

struct Swarm {
    std::vector<Particle> particles;
    std::vector<double> lower;  // flattened per-dimension bounds
    std::vector<double> upper;
    std::vector<double> gbest_position;
    CostBreakdown gbest_cost;
};

struct PlanResult {
    ControlPolygon best_polygon;
    SampledPath best_path;
    CostBreakdown best_cost;
    std::vector<double> best_cost_history;  // one entry per iteration, non-increasing
    std::vector<double> mean_cost_history;  // population mean per iteration
    double wall_time_s = 0.0;
    int converged_at_iteration = 0;
    bool success = false;  // zero collision violation
};

// Swarm construction: positions uniform per box, velocities uniform in
// +-(upper-lower) per dimension, personal bests seeded with the initial
// positions, global best taken over the evaluated initial population.
Swarm init_swarm(const SearchBounds& bounds, const PsoConfig& cfg,
                 const PathSampler& sampler, const Workspace& ws,
                 const CostConfig& cost_cfg, const ExecPolicy& exec = {});

// One synchronous iteration: velocity/position update against the current
// global best, clamp to bounds (zeroing the offending velocity component),
// re-evaluate, refresh personal bests (<= keeps the newer position on ties),
// then recompute the global best (lowest index wins ties).
void pso_step(Swarm& swarm, const PsoConfig& cfg, const PathSampler& sampler,
              const Workspace& ws, const CostConfig& cost_cfg,
              const ExecPolicy& exec = {});

// Full planning run over iter_max iterations.
PlanResult plan(const Workspace& ws, const SplineConfig& spline_cfg,
                const CostConfig& cost_cfg, const PsoConfig& pso_cfg,
                const ExecPolicy& exec = {});

// Smallest index k with history[k] <= (1 + rel_tol) * history.back().
int convergence_iteration(std::span<const double> history, double rel_tol);

}  // namespace ddrive
