#include "ddrive/sim_harness.hpp"

#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace ddrive {

ApproachResult approach_trajectory(const Pose& robot_pose, const SampledPath& path,
                                   const ApproachConfig& cfg) {
    const int n = static_cast<int>(path.points.size());
    if (n < 2) throw std::invalid_argument("approach_trajectory: path too short");
    if (!std::isfinite(robot_pose.x) || !std::isfinite(robot_pose.y)) {
        throw std::invalid_argument("approach_trajectory: non-finite robot pose");
    }
    const double dt = path.times[1] - path.times[0];
    const double max_steps = cfg.max_approach_time / dt;

    Vec2 p{robot_pose.x, robot_pose.y};
    std::vector<Vec2> points{p};
    int join_index = -1;
    for (int k = 0;; ++k) {
        const int aim_index = std::min(k, n - 1);
        const Vec2 aim = path.points[aim_index];
        const double gap = distance(p, aim);
        if (gap <= cfg.join_tolerance) {
            join_index = aim_index;
            break;
        }
        if (k >= max_steps) {
            throw std::runtime_error("approach_trajectory: did not join the path within max_approach_time");
        }
        p += (aim - p) * (std::min(cfg.v_max * dt, gap) / gap);
        points.push_back(p);
    }

    ApproachResult result;
    result.prefix_samples = static_cast<int>(points.size()) - 1;
    if (result.prefix_samples == 0) {
        result.path = path;
        return result;
    }
    points.insert(points.end(), path.points.begin() + join_index + 1, path.points.end());
    const double total_time = dt * (points.size() - 1);
    result.path = attach_derivatives(std::move(points), total_time);
    return result;
}

namespace {

// Linear interpolation of the path polyline at the controller's reference
// interval. Exact when the source spacing is a multiple of the target's.
std::vector<Vec2> resample_points(const SampledPath& path, double control_dt) {
    const double T = path.duration();
    const int n_ctrl = std::max(3, static_cast<int>(std::llround(T / control_dt)));
    std::vector<Vec2> out;
    out.reserve(n_ctrl + 1);
    const int n_src = static_cast<int>(path.points.size());
    const double src_h = path.times[1] - path.times[0];
    for (int k = 0; k <= n_ctrl; ++k) {
        const double t = std::min(static_cast<double>(k) * control_dt, T);
        const double u = t / src_h;
        const int i = std::min(static_cast<int>(u), n_src - 2);
        const double frac = u - i;
        out.push_back(path.points[i] * (1.0 - frac) + path.points[i + 1] * frac);
    }
    return out;
}

}  // namespace

SimResult closed_loop_sim(const Workspace& ws, const SampledPath& planned_path,
                          const ControllerConfig& controller_cfg,
                          const RobotParams& robot_params, const SimConfig& sim_cfg) {
    if (planned_path.points.size() < 2) {
        throw std::invalid_argument("closed_loop_sim: planned path too short");
    }
    if (!(sim_cfg.physics_dt > 0.0) || !(controller_cfg.control_dt > 0.0)) {
        throw std::invalid_argument("closed_loop_sim: time steps must be > 0");
    }

    // Control-rate reference path; one sample is consumed per control step.
    std::vector<Vec2> ctrl_points = resample_points(planned_path, controller_cfg.control_dt);
    const double ctrl_total_time = controller_cfg.control_dt * (ctrl_points.size() - 1);
    SampledPath control_path = attach_derivatives(std::move(ctrl_points), ctrl_total_time);
    if (sim_cfg.start_pose.has_value()) {
        control_path =
            approach_trajectory(*sim_cfg.start_pose, control_path, sim_cfg.approach).path;
    }
    const std::vector<ReferenceSignal> refs = reference_trace(control_path);
    const Vec2 target = control_path.points.back();

    const int steps_per_ctrl =
        std::max(1, static_cast<int>(std::llround(controller_cfg.control_dt / sim_cfg.physics_dt)));
    const int n_ctrl_samples = static_cast<int>(control_path.points.size());
    const int settle_steps =
        static_cast<int>(std::llround(sim_cfg.settle_time / sim_cfg.physics_dt));
    const int total_steps = (n_ctrl_samples - 1) * steps_per_ctrl + settle_steps;

    Pose pose;
    if (sim_cfg.start_pose.has_value()) {
        pose = *sim_cfg.start_pose;
    } else {
        pose = {control_path.points.front().x, control_path.points.front().y,
                refs.front().theta_ref};
    }

    DynState plant;
    OuterLoopState outer_state;
    InnerLoopState inner_state;

    SimResult result;
    const int n_log = total_steps + 1;
    result.time.reserve(n_log);
    result.reference.reserve(n_log);
    result.v_ref.reserve(n_log);
    result.actual.reserve(n_log);
    result.wheel_speeds.reserve(n_log);
    result.voltages.reserve(n_log);
    result.duty.reserve(n_log);
    result.tracking_error.reserve(n_log);

    const ReferenceSignal park{0.0, refs.back().theta_ref};
    auto ref_at = [&](int step) -> std::pair<ReferenceSignal, Vec2> {
        const int k = step / steps_per_ctrl;
        if (k >= n_ctrl_samples - 1) return {park, target};
        return {refs[k], control_path.points[k]};
    };

    auto log_state = [&](int step, const std::pair<ReferenceSignal, Vec2>& ref,
                         double u_l, double u_r, const PwmCommand& d_l, const PwmCommand& d_r) {
        result.time.push_back(step * sim_cfg.physics_dt);
        result.reference.push_back({ref.second.x, ref.second.y, ref.first.theta_ref});
        result.v_ref.push_back(ref.first.v_ref);
        result.actual.push_back(pose);
        result.wheel_speeds.push_back({plant.omega_l, plant.omega_r});
        result.voltages.push_back({u_l, u_r});
        result.duty.push_back({d_l, d_r});
        result.tracking_error.push_back(distance({pose.x, pose.y}, ref.second));
    };

    log_state(0, ref_at(0), 0.0, 0.0, PwmCommand{}, PwmCommand{});

    for (int step = 0; step < total_steps; ++step) {
        const auto ref = ref_at(step);
        const BodyVelocity feedback = wheels_to_body(plant.omega_l, plant.omega_r, robot_params);

        const auto [v_in, omega_in] =
            outer_loop(ref.first, feedback, pose.theta, controller_cfg, outer_state,
                       sim_cfg.physics_dt);
        const auto [wl_ref, wr_ref] = wheel_references(v_in, omega_in, robot_params);
        const auto [u_l, u_r] =
            inner_loop(wl_ref, wr_ref, plant.omega_l, plant.omega_r, controller_cfg,
                       inner_state, sim_cfg.physics_dt, robot_params.voltage_max_U);

        const PwmCommand duty_l = pwm_duty(u_l, robot_params.voltage_max_U);
        const PwmCommand duty_r = pwm_duty(u_r, robot_params.voltage_max_U);
        const double applied_l =
            sim_cfg.apply_pwm ? duty_l.reconstructed_voltage(robot_params.voltage_max_U) : u_l;
        const double applied_r =
            sim_cfg.apply_pwm ? duty_r.reconstructed_voltage(robot_params.voltage_max_U) : u_r;

        const ControlVector u{robot_params.wheel_load_force, robot_params.wheel_load_force,
                              applied_l, applied_r};
        pose = pose_step(pose, feedback, sim_cfg.physics_dt, sim_cfg.physics_dt);
        plant = dynamics_step(plant, u, sim_cfg.physics_dt, robot_params);

        if (!std::isfinite(pose.x) || !std::isfinite(pose.y) || !std::isfinite(pose.theta) ||
            !std::isfinite(plant.omega_l) || !std::isfinite(plant.omega_r)) {
            throw SimDivergence("closed_loop_sim: state diverged (non-finite)");
        }

        result.distance_traveled +=
            distance({result.actual.back().x, result.actual.back().y}, {pose.x, pose.y});
        log_state(step + 1, ref, applied_l, applied_r, duty_l, duty_r);
    }

    result.final_position_error = distance({pose.x, pose.y}, target);
    result.collided = false;
    for (const Pose& q : result.actual) {
        for (const Obstacle& obs : ws.obstacles) {
            if (distance_to_obstacle(q.x, q.y, obs) < obs.radius) {
                result.collided = true;
                break;
            }
        }
        if (result.collided) break;
    }
    return result;
}

namespace {

int thread_count(const ExecPolicy& exec) {
    if (!exec.parallel) return 1;
    return exec.jobs > 0 ? exec.jobs : omp_get_max_threads();
}

}  // namespace

McReport monte_carlo(const McConfig& cfg, const ExecPolicy& exec) {
    if (cfg.runs < 1) throw std::invalid_argument("monte_carlo: runs must be >= 1");
    if (!cfg.workspace.fixed.has_value() && !cfg.workspace.random.has_value()) {
        throw std::invalid_argument("monte_carlo: no workspace source");
    }

    McReport report;
    report.runs = cfg.runs;
    report.records.resize(cfg.runs);

    const bool parallel_runs = exec.parallel && cfg.runs > 1;
    // Swarm-level parallelism is pointless once runs fan out across threads.
    const ExecPolicy inner = parallel_runs ? ExecPolicy::serial() : exec;

    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(exec)) if (parallel_runs)
    for (int i = 0; i < cfg.runs; ++i) {
        try {
            const std::uint64_t run_seed = cfg.base_seed ^ static_cast<std::uint64_t>(i);
            Workspace ws;
            if (cfg.workspace.random.has_value()) {
                RandomWorkspaceConfig wcfg = *cfg.workspace.random;
                wcfg.seed = split_seed(run_seed, 0);
                ws = random_workspace(wcfg);
            } else {
                ws = *cfg.workspace.fixed;
            }
            PsoConfig pso = cfg.pso;
            pso.seed = split_seed(run_seed, 1);
            const PlanResult plan_result = plan(ws, cfg.spline, cfg.cost, pso, inner);

            McRunRecord& rec = report.records[i];
            rec.run = i;
            rec.seed = run_seed;
            rec.success = plan_result.success;
            rec.length = plan_result.best_cost.length;
            rec.total_cost = plan_result.best_cost.total;
            rec.cpu_time_s = plan_result.wall_time_s;
            rec.convergence_iteration = plan_result.converged_at_iteration;
        } catch (...) {
#pragma omp critical
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    int successes = 0;
    double length_sum = 0.0, cpu_sum = 0.0, conv_sum = 0.0;
    double shortest = 0.0;
    for (const McRunRecord& rec : report.records) {
        cpu_sum += rec.cpu_time_s;
        conv_sum += rec.convergence_iteration;
        if (rec.success) {
            if (successes == 0 || rec.length < shortest) shortest = rec.length;
            ++successes;
            length_sum += rec.length;
        }
    }
    report.success_rate = static_cast<double>(successes) / cfg.runs;
    report.avg_cpu_time_s = cpu_sum / cfg.runs;
    report.avg_convergence_time_s =
        report.avg_cpu_time_s * (conv_sum / cfg.runs) / cfg.pso.iter_max;
    if (successes > 0) {
        report.avg_length = length_sum / successes;
        report.shortest_length = shortest;
        double var = 0.0;
        for (const McRunRecord& rec : report.records) {
            if (rec.success) {
                const double d = rec.length - report.avg_length;
                var += d * d;
            }
        }
        report.length_sd = std::sqrt(var / successes);
    }
    return report;
}

std::vector<BetaReport> beta_sweep(const McConfig& cfg, std::span<const double> betas,
                                   const ExecPolicy& exec) {
    if (betas.empty()) throw std::invalid_argument("beta_sweep: empty beta list");
    std::vector<BetaReport> reports;
    reports.reserve(betas.size());
    for (double beta : betas) {
        McConfig beta_cfg = cfg;
        beta_cfg.cost.beta_p = beta;
        reports.push_back({beta, monte_carlo(beta_cfg, exec)});
    }
    return reports;
}

}  // namespace ddrive
