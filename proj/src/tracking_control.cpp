#include "ddrive/tracking_control.hpp"

#include <cmath>
#include <stdexcept>

namespace ddrive {

std::vector<ReferenceSignal> reference_trace(const SampledPath& path) {
    std::vector<ReferenceSignal> refs;
    refs.reserve(path.first_deriv.size());
    double prev_theta = 0.0;
    bool have_prev = false;
    for (const Vec2& d : path.first_deriv) {
        ReferenceSignal ref;
        const double speed = d.norm();
        if (speed == 0.0) {
            ref.v_ref = 0.0;
            ref.theta_ref = have_prev ? prev_theta : 0.0;
        } else {
            ref.v_ref = d.x >= 0.0 ? speed : -speed;
            double theta = std::atan2(d.y, d.x);
            if (have_prev) {
                // unwrap: shift by whole turns to stay within pi of the last sample
                theta += 2.0 * M_PI * std::round((prev_theta - theta) / (2.0 * M_PI));
            }
            ref.theta_ref = theta;
        }
        prev_theta = ref.theta_ref;
        have_prev = true;
        refs.push_back(ref);
    }
    return refs;
}

ReferenceSignal reference_signals(const SampledPath& path, int index) {
    if (index < 0 || index >= static_cast<int>(path.first_deriv.size())) {
        throw std::out_of_range("reference_signals: index out of range");
    }
    return reference_trace(path)[index];
}

double pid_step(const PidGains& gains, PidState& state, double error, double dt,
                const PidLimits& limits, double filter_tau) {
    if (!(dt > 0.0)) throw std::invalid_argument("pid_step: dt must be > 0");

    const double raw_deriv = state.primed ? (error - state.prev_error) / dt : 0.0;
    // backward-Euler first-order filter; tau = 0 disables filtering
    state.deriv_filtered =
        filter_tau > 0.0
            ? (filter_tau * state.deriv_filtered + (error - (state.primed ? state.prev_error : error))) /
                  (filter_tau + dt)
            : raw_deriv;

    const double tentative_integral =
        state.integral + (state.primed ? dt * 0.5 * (error + state.prev_error) : dt * error);

    double output = gains.kp * error + gains.ki * tentative_integral +
                    gains.kd * state.deriv_filtered;
    const double clamped = clamp(output, limits.min, limits.max);
    if (clamped == output) {
        state.integral = tentative_integral;
        state.saturated = false;
    } else {
        // saturated: accept the integral only if it pulls back toward the band
        const double excess = output - clamped;
        if (excess * error < 0.0) state.integral = tentative_integral;
        state.saturated = true;
    }
    state.prev_error = error;
    state.primed = true;
    return clamped;
}

std::pair<double, double> outer_loop(const ReferenceSignal& ref, const BodyVelocity& vel,
                                     double theta, const ControllerConfig& cfg,
                                     OuterLoopState& state, double dt) {
    const double e_v = ref.v_ref - vel.v;
    const double e_theta = std::remainder(ref.theta_ref - theta, 2.0 * M_PI);
    const double tau = cfg.derivative_filter_tau();
    const double v_in = pid_step(cfg.pid_v, state.pid_v, e_v, dt, cfg.limits_v, tau);
    const double theta_in =
        pid_step(cfg.pid_theta, state.pid_theta, e_theta, dt, cfg.limits_theta, tau);
    const double omega_in = state.primed ? (theta_in - state.prev_theta_in) / dt : 0.0;
    state.prev_theta_in = theta_in;
    state.primed = true;
    return {v_in, omega_in};
}

std::pair<double, double> wheel_references(double v_in, double omega_in,
                                           const RobotParams& params) {
    const WheelSpeeds w = body_to_wheels(v_in, omega_in, params);
    return {w.omega_l, w.omega_r};
}

std::pair<double, double> inner_loop(double omega_l_ref, double omega_r_ref,
                                     double omega_l_out, double omega_r_out,
                                     const ControllerConfig& cfg, InnerLoopState& state,
                                     double dt, double u_max) {
    const PidLimits voltage{-u_max, u_max};
    const double tau = cfg.derivative_filter_tau();
    const double u_l = pid_step(cfg.pid_wheel_l, state.pid_left, omega_l_ref - omega_l_out,
                                dt, voltage, tau);
    const double u_r = pid_step(cfg.pid_wheel_r, state.pid_right, omega_r_ref - omega_r_out,
                                dt, voltage, tau);
    return {u_l, u_r};
}

PwmCommand pwm_duty(double u, double u_max) {
    if (!(u_max > 0.0)) throw std::invalid_argument("pwm_duty: u_max must be > 0");
    PwmCommand cmd;
    cmd.direction = u >= 0.0 ? PwmDirection::forward : PwmDirection::reverse;
    const double scaled = 255.0 * std::min(std::abs(u), u_max) / u_max;
    cmd.duty = static_cast<int>(std::floor(scaled + 0.5));  // round half up
    return cmd;
}

}  // namespace ddrive
