// Timing comparison of the serial reference implementation against the
// OpenMP kernels, for single-plan swarm evaluation and for a Monte Carlo
// campaign. Results must match bitwise; only the wall time may differ.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "ddrive/pso_planner.hpp"
#include "ddrive/sim_harness.hpp"

using namespace ddrive;

namespace {

double time_of(const char* label, double reference_s, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (reference_s > 0.0) {
        std::printf("%-28s %8.3f s   speedup %.2fx\n", label, dt, reference_s / dt);
    } else {
        std::printf("%-28s %8.3f s\n", label, dt);
    }
    return dt;
}

Workspace bench_workspace() {
    Workspace ws;
    ws.start = {0.25, 0.25};
    ws.target = {3.75, 3.75};
    ws.obstacles = {{{1.2, 1.4}, 0.45}, {{2.1, 2.3}, 0.4}, {{3.0, 2.0}, 0.35},
                    {{1.8, 3.1}, 0.3},  {{3.2, 3.0}, 0.3}, {{0.9, 2.4}, 0.25}};
    return ws;
}

}  // namespace

int main() {
    const Workspace ws = bench_workspace();
    const SplineConfig spline;
    const CostConfig cost;
    PsoConfig pso;
    pso.seed = 7;

    std::printf("threads available: %d\n\n", omp_get_max_threads());

    PlanResult serial_plan, parallel_plan;
    const double t_plan_serial =
        time_of("plan (serial reference)", 0.0,
                [&] { serial_plan = plan(ws, spline, cost, pso, ExecPolicy::serial()); });
    time_of("plan (OpenMP swarm)", t_plan_serial,
            [&] { parallel_plan = plan(ws, spline, cost, pso, ExecPolicy{}); });
    std::printf("  best cost serial/parallel: %.12f / %.12f (%s)\n\n",
                serial_plan.best_cost.total, parallel_plan.best_cost.total,
                serial_plan.best_cost.total == parallel_plan.best_cost.total ? "identical"
                                                                             : "MISMATCH");

    McConfig mc;
    mc.runs = 8;
    mc.workspace.fixed = ws;
    mc.base_seed = 99;

    McReport serial_mc, parallel_mc;
    const double t_mc_serial = time_of("montecarlo (serial)", 0.0, [&] {
        serial_mc = monte_carlo(mc, ExecPolicy::serial());
    });
    time_of("montecarlo (OpenMP runs)", t_mc_serial,
            [&] { parallel_mc = monte_carlo(mc, ExecPolicy{}); });
    std::printf("  SR serial/parallel: %.4f / %.4f, avg length %.6f / %.6f (%s)\n",
                serial_mc.success_rate, parallel_mc.success_rate, serial_mc.avg_length,
                parallel_mc.avg_length,
                serial_mc.avg_length == parallel_mc.avg_length ? "identical" : "MISMATCH");
    return 0;
}
