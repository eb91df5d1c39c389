#pragma once

// Controllers producing the desired wrench: depth PI with gravity
// compensation, cascaded attitude loops and a forward speed loop. Each step
// function is pure: it takes the previous controller state and returns the
// output together with the next state.

#include <Eigen/Core>

#include "foilsim/allocation.hpp"

namespace foilsim {

struct DepthControllerState {
  double k_p = 40.0;            // N/m
  double k_i = 10.0;            // N/(m*s)
  double integral = 0.0;        // m*s
  double integral_limit = 2.0;  // m*s
  double f_g = 0.0;             // N, gravity compensation feed-forward
};

struct DepthStep {
  double f_zd = 0.0;
  DepthControllerState state;
};

/// f_zd = k_p e + k_i * integral(e) + f_g with e = h_d - h (depth positive
/// down, so a positive f_zd pushes the vehicle deeper).
DepthStep depth_control_step(double h_d, double h, double dt, const DepthControllerState& state);

/// Feed-forward cancelling net weight along body z for the given attitude.
double gravity_compensation(const VehicleParams& params, const FluidEnvironment& env, double roll, double pitch,
                            double submerged_fraction);

struct AttitudeSetpoint {
  double roll_d = 0.0;      // rad
  double pitch_d = 0.0;     // rad
  double yaw_rate_d = 0.0;  // rad/s
};

struct AttitudeGains {
  double roll_angle_gain = 2.0;   // 1/s
  double pitch_angle_gain = 2.0;  // 1/s
  double max_rate = 2.0;          // rad/s
  Eigen::Vector3d rate_kp{0.2, 0.3, 0.3};  // N*m/(rad/s)
  Eigen::Vector3d rate_ki{0.1, 0.2, 0.05};
  Eigen::Vector3d integral_limit{0.5, 0.5, 0.5};  // rad
  double envelope = deg2rad(35.0);                // |roll_d|, |pitch_d| bound
};

struct AttitudeControllerState {
  Eigen::Vector3d integral = Eigen::Vector3d::Zero();
};

struct AttitudeStep {
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();
  AttitudeControllerState state;
};

/// Angle error -> rate demand (P), rate error -> torque (PI). Yaw is rate only.
/// The torque uses the integral accumulated up to the previous step.
AttitudeStep attitude_control_step(const AttitudeSetpoint& setpoint, const Eigen::Vector3d& attitude_rpy,
                                   const Eigen::Vector3d& rates, double dt, const AttitudeGains& gains,
                                   const AttitudeControllerState& state);

struct SpeedGains {
  double k_p = 8.0;
  double k_i = 2.0;
  double integral_limit = 20.0;  // (m/s)*s
  double output_max = 20.0;      // N
};

struct SpeedControllerState {
  double integral = 0.0;
};

struct SpeedStep {
  double f_xd = 0.0;
  SpeedControllerState state;
};

/// PI on speed error clamped to [0, output_max]. The integrator freezes
/// while the output is pinned and the error pushes further into the clamp.
SpeedStep speed_control_step(double v_d, double v, double dt, const SpeedGains& gains,
                             const SpeedControllerState& state);

/// Field-wise packing; throws std::invalid_argument on non-finite input.
Wrench5 assemble_wrench(double f_xd, double f_zd, const Eigen::Vector3d& torques);

}  // namespace foilsim
