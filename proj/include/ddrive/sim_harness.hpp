#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ddrive/exec.hpp"
#include "ddrive/pso_planner.hpp"
#include "ddrive/robot_model.hpp"
#include "ddrive/tracking_control.hpp"
#include "ddrive/workspace.hpp"

namespace ddrive {

struct ApproachConfig {
    double v_max = 0.2;              // pursuit speed cap [m/s]
    double join_tolerance = 0.02;    // [m]
    double max_approach_time = 20.0; // [s]
};

struct ApproachResult {
    SampledPath path;     // prefix + remaining suffix, uniform time spacing
    int prefix_samples;   // 0 when the robot already sat on the path start
};

// Pursuit prefix from an offset start: at control step k the aim point is
// path sample k (the start point keeps shifting forward), the prefix advances
// toward it at <= v_max per step, and joins the path at the first step within
// join_tolerance of the aim point. Step duration is the path's own sample
// spacing. Throws std::runtime_error if the pursuit does not join within
// max_approach_time.
ApproachResult approach_trajectory(const Pose& robot_pose, const SampledPath& path,
                                   const ApproachConfig& cfg);

// Thrown when the closed loop reaches a non-finite state.
struct SimDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    double physics_dt = 0.005;       // plant/controller step [s]
    bool apply_pwm = true;           // drive the plant with the quantized voltage
    double settle_time = 5.0;        // extra parking time after the last sample [s]
    ApproachConfig approach;
    std::optional<Pose> start_pose;  // offset start; engages the approach prefix
};

// All traces are logged at the physics rate and have equal length.
struct SimResult {
    std::vector<double> time;
    std::vector<Pose> reference;     // held reference sample (x, y, theta_ref)
    std::vector<double> v_ref;
    std::vector<Pose> actual;
    std::vector<std::pair<double, double>> wheel_speeds;  // (w_l, w_r) [rad/s]
    std::vector<std::pair<double, double>> voltages;      // applied to the plant [V]
    std::vector<std::pair<PwmCommand, PwmCommand>> duty;
    std::vector<double> tracking_error;                   // [m]
    double final_position_error = 0.0;  // distance to the path target at the end [m]
    bool collided = false;
    double distance_traveled = 0.0;     // [m]
};

// Closed loop: the path is resampled at the controller's reference interval
// (control_dt), references are held between samples, the four-PID cascade
// runs at the physics rate, and the wheel-level plant is integrated with the
// applied (optionally PWM-quantized) voltages. Throws std::runtime_error on
// a non-finite state (divergence).
SimResult closed_loop_sim(const Workspace& ws, const SampledPath& planned_path,
                          const ControllerConfig& controller_cfg,
                          const RobotParams& robot_params, const SimConfig& sim_cfg);

struct McWorkspaceSource {
    std::optional<Workspace> fixed;                 // re-planned with fresh seeds
    std::optional<RandomWorkspaceConfig> random;    // fresh workspace per run
};

struct McConfig {
    int runs = 40;
    McWorkspaceSource workspace;
    SplineConfig spline;
    CostConfig cost;
    PsoConfig pso;
    std::uint64_t base_seed = 0;
};

struct McRunRecord {
    int run = 0;
    std::uint64_t seed = 0;
    bool success = false;
    double length = 0.0;       // best path length [m]
    double total_cost = 0.0;
    double cpu_time_s = 0.0;
    int convergence_iteration = 0;
};

struct McReport {
    int runs = 0;
    double success_rate = 0.0;
    double avg_length = 0.0;        // over successful runs; 0 if none
    double shortest_length = 0.0;   // over successful runs; 0 if none
    double length_sd = 0.0;         // population SD over successful runs
    double avg_cpu_time_s = 0.0;
    double avg_convergence_time_s = 0.0;  // avg cpu * mean conv. iteration / iter_max
    std::vector<McRunRecord> records;
};

// Run i derives its seed as base_seed ^ i; the workspace and planner streams
// are split from that, so reports are identical for any thread count.
McReport monte_carlo(const McConfig& cfg, const ExecPolicy& exec = {});

struct BetaReport {
    double beta = 0.0;
    McReport report;
};

// Repeats monte_carlo per penalty coefficient with identical seeds.
std::vector<BetaReport> beta_sweep(const McConfig& cfg, std::span<const double> betas,
                                   const ExecPolicy& exec = {});

}  // namespace ddrive
