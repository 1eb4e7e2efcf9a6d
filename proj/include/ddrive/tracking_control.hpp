#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "ddrive/robot_model.hpp"
#include "ddrive/spline_path.hpp"

namespace ddrive {

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

struct PidLimits {
    double min = -std::numeric_limits<double>::infinity();
    double max = std::numeric_limits<double>::infinity();
};

struct PidState {
    double integral = 0.0;
    double prev_error = 0.0;
    double deriv_filtered = 0.0;
    bool saturated = false;
    bool primed = false;  // first sample skips the derivative kick

    void reset() { *this = PidState{}; }
};

struct ControllerConfig {
    PidGains pid_v{5.0, 5.0, 2.0};          // outer translational loop
    PidGains pid_theta{5.0, 5.0, 2.0};      // outer heading loop
    PidGains pid_wheel_l{0.5, 5.0, 2.0};    // inner left wheel loop
    PidGains pid_wheel_r{0.01, 1.0, 0.1};   // inner right wheel loop
    double control_dt = 2.5;                // reference sample interval [s]
    PidLimits limits_v{-1.0, 1.0};          // v_in clamp [m/s]
    PidLimits limits_theta{};               // theta_in clamp (unbounded)
    // Derivative filter pole sits at derivative_filter_coeff / control_dt.
    double derivative_filter_coeff = 10.0;

    double derivative_filter_tau() const {
        return derivative_filter_coeff > 0.0 ? control_dt / derivative_filter_coeff : 0.0;
    }
};

// Velocity/heading reference for one path sample. theta_ref is continuous
// (unwrapped along the trace).
struct ReferenceSignal {
    double v_ref = 0.0;      // signed: negative when the path runs in -x [m/s]
    double theta_ref = 0.0;  // [rad]
};

// References for every sample of a path: v_ref = +-|dp/dt| with the sign of
// dx/dt (reverse when dx/dt < 0), theta_ref from the derivative quadrant,
// unwrapped sample to sample. Zero-derivative samples hold the previous
// heading (and heading 0 if first).
std::vector<ReferenceSignal> reference_trace(const SampledPath& path);
ReferenceSignal reference_signals(const SampledPath& path, int index);

// Discrete PID: trapezoidal integral, first-order-filtered derivative on the
// error, output clamp with conditional anti-windup (the integrator does not
// accumulate while the output is pushed deeper into saturation).
double pid_step(const PidGains& gains, PidState& state, double error, double dt,
                const PidLimits& limits, double filter_tau);

struct OuterLoopState {
    PidState pid_v;
    PidState pid_theta;
    double prev_theta_in = 0.0;
    bool primed = false;

    void reset() { *this = OuterLoopState{}; }
};

// Outer loop: e_v = v_ref - v and the wrapped heading error feed the two
// outer PIDs; omega_in is the backward difference of theta_in over dt
// (zero on the first sample).
std::pair<double, double> outer_loop(const ReferenceSignal& ref, const BodyVelocity& vel,
                                     double theta, const ControllerConfig& cfg,
                                     OuterLoopState& state, double dt);

// (v_in, omega_in) -> wheel angular velocity references.
std::pair<double, double> wheel_references(double v_in, double omega_in,
                                           const RobotParams& params);

struct InnerLoopState {
    PidState pid_left;
    PidState pid_right;

    void reset() { *this = InnerLoopState{}; }
};

// Inner loop: wheel-speed errors -> drive voltages, saturated to +-u_max.
std::pair<double, double> inner_loop(double omega_l_ref, double omega_r_ref,
                                     double omega_l_out, double omega_r_out,
                                     const ControllerConfig& cfg, InnerLoopState& state,
                                     double dt, double u_max);

enum class PwmDirection { forward, reverse };

struct PwmCommand {
    int duty = 0;  // 0..255
    PwmDirection direction = PwmDirection::forward;

    double reconstructed_voltage(double u_max) const {
        const double mag = u_max * duty / 255.0;
        return direction == PwmDirection::forward ? mag : -mag;
    }
};

// 8-bit quantization: duty = round(255 * min(|u|, u_max) / u_max), half-up;
// direction carries the sign (u = 0 maps to forward).
PwmCommand pwm_duty(double u, double u_max);

}  // namespace ddrive
