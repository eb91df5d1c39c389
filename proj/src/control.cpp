#include "foilsim/control.hpp"

#include <algorithm>
#include <cmath>

namespace foilsim {

DepthStep depth_control_step(double h_d, double h, double dt, const DepthControllerState& state) {
  DepthStep out{0.0, state};
  const double error = h_d - h;
  out.state.integral = std::clamp(state.integral + error * dt, -state.integral_limit, state.integral_limit);
  out.f_zd = state.k_p * error + state.k_i * out.state.integral + state.f_g;
  return out;
}

double gravity_compensation(const VehicleParams& params, const FluidEnvironment& env, double roll, double pitch,
                            double submerged_fraction) {
  const double weight = params.mass * env.gravity;
  const double buoyancy = env.water_density * env.gravity * params.buoyancy_volume * submerged_fraction;
  return -(weight - buoyancy) * std::cos(roll) * std::cos(pitch);
}

AttitudeStep attitude_control_step(const AttitudeSetpoint& setpoint, const Eigen::Vector3d& attitude_rpy,
                                   const Eigen::Vector3d& rates, double dt, const AttitudeGains& gains,
                                   const AttitudeControllerState& state) {
  const double roll_d = std::clamp(setpoint.roll_d, -gains.envelope, gains.envelope);
  const double pitch_d = std::clamp(setpoint.pitch_d, -gains.envelope, gains.envelope);
  const Eigen::Vector3d rate_d(
      std::clamp(gains.roll_angle_gain * (roll_d - attitude_rpy.x()), -gains.max_rate, gains.max_rate),
      std::clamp(gains.pitch_angle_gain * (pitch_d - attitude_rpy.y()), -gains.max_rate, gains.max_rate),
      std::clamp(setpoint.yaw_rate_d, -gains.max_rate, gains.max_rate));
  const Eigen::Vector3d rate_error = rate_d - rates;

  AttitudeStep out;
  out.torque = gains.rate_kp.cwiseProduct(rate_error) + gains.rate_ki.cwiseProduct(state.integral);
  out.state.integral = (state.integral + rate_error * dt).cwiseMax(-gains.integral_limit).cwiseMin(gains.integral_limit);
  return out;
}

SpeedStep speed_control_step(double v_d, double v, double dt, const SpeedGains& gains,
                             const SpeedControllerState& state) {
  const double error = v_d - v;
  const double raw = gains.k_p * error + gains.k_i * state.integral;
  SpeedStep out{std::clamp(raw, 0.0, gains.output_max), state};
  const bool pinned_high = raw >= gains.output_max && error > 0.0;
  const bool pinned_low = raw <= 0.0 && error < 0.0;
  if (!pinned_high && !pinned_low) {
    out.state.integral = std::clamp(state.integral + error * dt, -gains.integral_limit, gains.integral_limit);
  }
  return out;
}

Wrench5 assemble_wrench(double f_xd, double f_zd, const Eigen::Vector3d& torques) {
  Wrench5 w{f_xd, f_zd, torques.x(), torques.y(), torques.z()};
  if (!w.all_finite()) throw std::invalid_argument("assemble_wrench: non-finite component");
  return w;
}

}  // namespace foilsim
