#pragma once

#include <functional>
#include <vector>

namespace ddrive {

// Physical constants of the two-wheel differential-drive platform.
struct RobotParams {
    double mass_m = 0.9;             // robot mass [kg]
    double inertia_J = 0.001;        // moment of inertia [kg*m^2]
    double friction_F = 0.01;        // viscous damping coefficient in the wheel equation
    double wheel_radius_r = 0.021;   // [m]
    double wheel_base_D = 0.145;     // distance between wheels [m]
    double voltage_max_U = 12.0;     // drive voltage saturation [V]
    double wheel_load_force = 0.01;  // constant tangent force step per wheel [N]

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Planar pose. theta is continuous (never wrapped) so heading differences
// stay well-defined across +-pi.
struct Pose {
    double x = 0.0;      // [m]
    double y = 0.0;      // [m]
    double theta = 0.0;  // [rad], unbounded
};

struct BodyVelocity {
    double v = 0.0;      // translational [m/s]
    double omega = 0.0;  // angular [rad/s]
};

// State of the wheel-level plant: body velocities plus wheel angular rates.
struct DynState {
    double v = 0.0;        // [m/s]
    double omega = 0.0;    // [rad/s]
    double omega_l = 0.0;  // left wheel [rad/s]
    double omega_r = 0.0;  // right wheel [rad/s]
};

// Plant inputs: per-wheel tangent load forces and drive voltages.
struct ControlVector {
    double f_l = 0.0;  // [N]
    double f_r = 0.0;  // [N]
    double u_l = 0.0;  // [V]
    double u_r = 0.0;  // [V]
};

struct WheelSpeeds {
    double v_l = 0.0;      // tangential, left [m/s]
    double v_r = 0.0;      // tangential, right [m/s]
    double omega_l = 0.0;  // angular, left [rad/s]
    double omega_r = 0.0;  // angular, right [rad/s]
};

// Forward kinematics: wheel angular rates -> body velocity.
// v = r*(w_r + w_l)/2, omega = r*(w_r - w_l)/D.
BodyVelocity wheels_to_body(double omega_l, double omega_r, const RobotParams& p);

// Inverse kinematics, exact inverse of wheels_to_body:
// v_r = v + omega*D/2, v_l = v - omega*D/2, omega_i = v_i / r.
WheelSpeeds body_to_wheels(double v, double omega, const RobotParams& p);

// Advances the unicycle pose under constant (v, omega) for dt seconds using
// classical RK4, subdividing internally so no substep exceeds max_substep.
Pose pose_step(const Pose& pose, const BodyVelocity& vel, double dt,
               double max_substep = 0.005);

// Lateral (normal) force per wheel while cornering: S = (m/2) * v * omega.
double lateral_force(double v, double omega, const RobotParams& p);

// Total traction demand per wheel: sqrt(F_i^2 + S_i^2).
double wheel_traction(double f_i, double s_i);

// Time derivative of the plant state:
//   dv/dt      = (F_L + F_R) / m
//   domega/dt  = (D / 2J) * (F_R - F_L)
//   dw_i/dt    = (U_i - F*w_i - r*F_i) / J
DynState state_derivative(const DynState& x, const ControlVector& u,
                          const RobotParams& p);

// One RK4 step of the plant with the control held constant across the
// substages. Every integration in this project goes through this function,
// so a recorded control trace replayed step by step reproduces the original
// state trace bit for bit.
DynState dynamics_step(const DynState& x, const ControlVector& u, double dt,
                       const RobotParams& p);

// Fixed-step integration of the plant over [0, T], control sampled once per
// step at the step start and held. Returns round(T/dt)+1 states including the
// initial one. Throws std::invalid_argument on non-finite control input.
std::vector<DynState> integrate_dynamics(
    const DynState& x0, const std::function<ControlVector(double)>& u_of_t,
    double dt, double T, const RobotParams& p);

}  // namespace ddrive
