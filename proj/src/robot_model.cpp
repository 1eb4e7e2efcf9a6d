#include "ddrive/robot_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ddrive {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

}  // namespace

void RobotParams::validate() const {
    require_positive(mass_m, "mass_m");
    require_positive(inertia_J, "inertia_J");
    require_positive(friction_F, "friction_F");
    require_positive(wheel_radius_r, "wheel_radius_r");
    require_positive(wheel_base_D, "wheel_base_D");
    require_positive(voltage_max_U, "voltage_max_U");
    if (wheel_load_force < 0.0 || !std::isfinite(wheel_load_force)) {
        throw std::invalid_argument("wheel_load_force must be >= 0 and finite");
    }
}

BodyVelocity wheels_to_body(double omega_l, double omega_r, const RobotParams& p) {
    const double v_r = p.wheel_radius_r * omega_r;
    const double v_l = p.wheel_radius_r * omega_l;
    return {(v_r + v_l) / 2.0, (v_r - v_l) / p.wheel_base_D};
}

WheelSpeeds body_to_wheels(double v, double omega, const RobotParams& p) {
    WheelSpeeds w;
    w.v_r = v + omega * p.wheel_base_D / 2.0;
    w.v_l = v - omega * p.wheel_base_D / 2.0;
    w.omega_r = w.v_r / p.wheel_radius_r;
    w.omega_l = w.v_l / p.wheel_radius_r;
    return w;
}

Pose pose_step(const Pose& pose, const BodyVelocity& vel, double dt, double max_substep) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("pose_step: dt must be > 0");
    }
    const int n_sub = std::max(1, static_cast<int>(std::ceil(dt / max_substep)));
    const double h = dt / n_sub;

    // RK4 on (x, y, theta) with theta' = omega, x' = v cos(theta),
    // y' = v sin(theta); v and omega constant over the step.
    Pose q = pose;
    const double v = vel.v;
    const double w = vel.omega;
    for (int s = 0; s < n_sub; ++s) {
        const double t1 = q.theta;
        const double t2 = q.theta + 0.5 * h * w;
        const double t4 = q.theta + h * w;
        // theta' is constant, so k-stages differ only in heading.
        const double kx1 = v * std::cos(t1), ky1 = v * std::sin(t1);
        const double kx2 = v * std::cos(t2), ky2 = v * std::sin(t2);
        const double kx4 = v * std::cos(t4), ky4 = v * std::sin(t4);
        q.x += h / 6.0 * (kx1 + 4.0 * kx2 + kx4);
        q.y += h / 6.0 * (ky1 + 4.0 * ky2 + ky4);
        q.theta += h * w;
    }
    return q;
}

double lateral_force(double v, double omega, const RobotParams& p) {
    return 0.5 * p.mass_m * v * omega;
}

double wheel_traction(double f_i, double s_i) {
    return std::hypot(f_i, s_i);
}

DynState state_derivative(const DynState& x, const ControlVector& u, const RobotParams& p) {
    DynState d;
    d.v = (u.f_l + u.f_r) / p.mass_m;
    d.omega = p.wheel_base_D / (2.0 * p.inertia_J) * (u.f_r - u.f_l);
    d.omega_l = (u.u_l - p.friction_F * x.omega_l - p.wheel_radius_r * u.f_l) / p.inertia_J;
    d.omega_r = (u.u_r - p.friction_F * x.omega_r - p.wheel_radius_r * u.f_r) / p.inertia_J;
    return d;
}

namespace {

DynState axpy(const DynState& x, const DynState& d, double h) {
    return {x.v + h * d.v, x.omega + h * d.omega,
            x.omega_l + h * d.omega_l, x.omega_r + h * d.omega_r};
}

}  // namespace

DynState dynamics_step(const DynState& x, const ControlVector& u, double dt,
                       const RobotParams& p) {
    const DynState k1 = state_derivative(x, u, p);
    const DynState k2 = state_derivative(axpy(x, k1, dt / 2.0), u, p);
    const DynState k3 = state_derivative(axpy(x, k2, dt / 2.0), u, p);
    const DynState k4 = state_derivative(axpy(x, k3, dt), u, p);
    DynState out;
    out.v = x.v + dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    out.omega = x.omega + dt / 6.0 * (k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega);
    out.omega_l = x.omega_l + dt / 6.0 * (k1.omega_l + 2.0 * k2.omega_l + 2.0 * k3.omega_l + k4.omega_l);
    out.omega_r = x.omega_r + dt / 6.0 * (k1.omega_r + 2.0 * k2.omega_r + 2.0 * k3.omega_r + k4.omega_r);
    return out;
}

std::vector<DynState> integrate_dynamics(
    const DynState& x0, const std::function<ControlVector(double)>& u_of_t,
    double dt, double T, const RobotParams& p) {
    if (!(dt > 0.0) || !(T >= dt)) {
        throw std::invalid_argument("integrate_dynamics: need dt > 0 and T >= dt");
    }
    const int n_steps = static_cast<int>(std::llround(T / dt));
    std::vector<DynState> trace;
    trace.reserve(n_steps + 1);
    trace.push_back(x0);
    DynState x = x0;
    for (int k = 0; k < n_steps; ++k) {
        const ControlVector u = u_of_t(k * dt);
        if (!std::isfinite(u.f_l) || !std::isfinite(u.f_r) ||
            !std::isfinite(u.u_l) || !std::isfinite(u.u_r)) {
            throw std::invalid_argument("integrate_dynamics: non-finite control input");
        }
        x = dynamics_step(x, u, dt, p);
        trace.push_back(x);
    }
    return trace;
}

}  // namespace ddrive
