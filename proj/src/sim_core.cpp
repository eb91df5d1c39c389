#include "foilsim/sim_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace foilsim {

BodyWrench foil_wrench(int side, const RigidBodyState& state, const ActuatorState& actuators,
                       const ImmersionState& immersion, const PhysicsModel& model) {
  const auto& p = model.params;
  const bool right = side > 0;
  const Eigen::Vector3d arm = p.foil_point(side) - p.center_of_mass;
  const Eigen::Vector3d local = state.velocity + state.angular_rate.cross(arm);

  const double wetted = immersion[right ? Component::AileronRight : Component::AileronLeft].fraction;
  const double prop_depth = immersion[right ? Component::PropRight : Component::PropLeft].depth;
  const double thrust =
      thrust_derating(right ? actuators.position.thrust_right : actuators.position.thrust_left, prop_depth, p);
  const double delta = right ? actuators.position.delta_right : actuators.position.delta_left;

  const FoilFlow flow{std::atan2(local.z(), local.x()), std::hypot(local.x(), local.z()), wetted};
  const auto f = aileron_forward(thrust, delta, flow, model.env, p);
  return BodyWrench::at(arm, Eigen::Vector3d(f.x, 0.0, f.z));
}

BodyWrench total_wrench(const RigidBodyState& state, const ActuatorState& actuators, const ImmersionState& immersion,
                        const PhysicsModel& model) {
  const auto& p = model.params;
  const auto& env = model.env;
  const auto& on = model.toggles;
  const Eigen::Quaterniond to_body = state.attitude.conjugate();
  BodyWrench w;

  if (on.gravity) w.force += to_body * Eigen::Vector3d(0.0, 0.0, p.mass * env.gravity);
  if (on.buoyancy) w += buoyancy_wrench(immersion, state.attitude, p, env);

  const double dry = 1.0 - immersion[Component::Fuselage].fraction;
  if (on.aero && dry > 0.0) {
    const auto& a = actuators.position;
    const AeroSurfaces surfaces{a.elevator, a.aileron_l, a.aileron_r, a.flaps, actuators.fold_progress};
    w += dry * aero_wrench(state, surfaces, env, model.table, p);
  }
  if (on.aero) {
    // Wetted tail: the elevator acts in water as well.
    const double tail = immersion[Component::Tail].fraction;
    if (tail > 0.0) {
      w.moment.y() += elevator_moment(actuators.position.elevator, state.velocity.norm(), env.water_density * tail, p);
    }
  }

  if (on.foils) {
    w += foil_wrench(+1, state, actuators, immersion, model);
    w += foil_wrench(-1, state, actuators, immersion, model);
  }
  if (on.aerial_thrust) w.force.x() += actuators.position.aerial_throttle * p.thrust_max_aerial;
  if (on.hull_drag) w += hull_drag_wrench(state, immersion, p);

  w.force += to_body * model.disturbance;
  return w;
}

bool StateDerivative::all_finite() const {
  return position.allFinite() && attitude.allFinite() && velocity.allFinite() && angular_rate.allFinite();
}

StateDerivative state_derivative(const RigidBodyState& state, const ActuatorState& actuators,
                                 const PhysicsModel& model) {
  const auto& p = model.params;
  const BodyWrench w = total_wrench(state, actuators, model);
  const Eigen::Vector3d& v = state.velocity;
  const Eigen::Vector3d& omega = state.angular_rate;

  StateDerivative d;
  d.position = state.attitude * v;
  const Eigen::Quaterniond spin = state.attitude * Eigen::Quaterniond(0.0, omega.x(), omega.y(), omega.z());
  d.attitude = 0.5 * spin.coeffs();
  d.velocity = w.force / p.mass - omega.cross(v);
  d.angular_rate = p.inertia.ldlt().solve(w.moment - omega.cross(p.inertia * omega));
  return d;
}

SimulationHalted::SimulationHalted(const std::string& what, double t, const RigidBodyState& s)
    : std::runtime_error(what + " at t=" + std::to_string(t) + "\n" + describe(s)), time(t), state(s) {}

std::string describe(const RigidBodyState& s) {
  std::ostringstream out;
  out.precision(17);
  const auto& q = s.attitude;
  out << "position " << s.position.transpose() << "\n"
      << "attitude (w x y z) " << q.w() << " " << q.x() << " " << q.y() << " " << q.z() << "\n"
      << "velocity " << s.velocity.transpose() << "\n"
      << "angular_rate " << s.angular_rate.transpose();
  return out.str();
}

namespace {

RigidBodyState offset(const RigidBodyState& s, const StateDerivative& d, double h) {
  RigidBodyState out;
  out.position = s.position + h * d.position;
  out.attitude.coeffs() = s.attitude.coeffs() + h * d.attitude;
  out.velocity = s.velocity + h * d.velocity;
  out.angular_rate = s.angular_rate + h * d.angular_rate;
  return out;
}

}  // namespace

RigidBodyState step_dynamics(const RigidBodyState& state, const ActuatorState& actuators, double dt,
                             const PhysicsModel& model, double time) {
  if (!(dt > 0.0 && dt <= 0.01)) throw std::invalid_argument("step_dynamics: dt must lie in (0, 0.01] s");

  auto eval = [&](const RigidBodyState& s) {
    auto d = state_derivative(s, actuators, model);
    if (!d.all_finite()) throw SimulationHalted("non-finite state derivative", time, s);
    return d;
  };
  const auto k1 = eval(state);
  const auto k2 = eval(offset(state, k1, 0.5 * dt));
  const auto k3 = eval(offset(state, k2, 0.5 * dt));
  const auto k4 = eval(offset(state, k3, dt));

  StateDerivative sum;
  sum.position = k1.position + 2.0 * k2.position + 2.0 * k3.position + k4.position;
  sum.attitude = k1.attitude + 2.0 * k2.attitude + 2.0 * k3.attitude + k4.attitude;
  sum.velocity = k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity;
  sum.angular_rate = k1.angular_rate + 2.0 * k2.angular_rate + 2.0 * k3.angular_rate + k4.angular_rate;

  RigidBodyState next = offset(state, sum, dt / 6.0);
  next.attitude.normalize();
  if (!next.all_finite()) throw SimulationHalted("non-finite state", time + dt, next);
  return next;
}

ActuatorCommand clamp_command(const ActuatorCommand& cmd, const VehicleParams& p) {
  const double lim = p.deflection_limit;
  auto angle = [lim](double a) { return std::clamp(a, -lim, lim); };
  auto thrust = [&p](double t) { return std::clamp(t, 0.0, p.thrust_max_underwater); };
  ActuatorCommand out = cmd;
  out.thrust_left = thrust(cmd.thrust_left);
  out.thrust_right = thrust(cmd.thrust_right);
  out.delta_left = angle(cmd.delta_left);
  out.delta_right = angle(cmd.delta_right);
  out.elevator = angle(cmd.elevator);
  out.aileron_l = angle(cmd.aileron_l);
  out.aileron_r = angle(cmd.aileron_r);
  out.flaps = angle(cmd.flaps);
  out.aerial_throttle = std::clamp(cmd.aerial_throttle, 0.0, 1.0);
  return out;
}

ActuatorState advance_actuators(const ActuatorState& current, const ActuatorCommand& cmd, double dt,
                                const VehicleParams& p) {
  auto lag = [dt](double x, double target, double tau) {
    if (!(tau > 0.0)) return target;
    return target + (x - target) * std::exp(-dt / tau);
  };
  const auto& a = current.position;
  ActuatorState out;
  auto& n = out.position;
  n.thrust_left = lag(a.thrust_left, cmd.thrust_left, p.thruster_time_constant);
  n.thrust_right = lag(a.thrust_right, cmd.thrust_right, p.thruster_time_constant);
  n.delta_left = lag(a.delta_left, cmd.delta_left, p.servo_time_constant);
  n.delta_right = lag(a.delta_right, cmd.delta_right, p.servo_time_constant);
  n.elevator = lag(a.elevator, cmd.elevator, p.servo_time_constant);
  n.aileron_l = lag(a.aileron_l, cmd.aileron_l, p.servo_time_constant);
  n.aileron_r = lag(a.aileron_r, cmd.aileron_r, p.servo_time_constant);
  n.flaps = lag(a.flaps, cmd.flaps, p.servo_time_constant);
  n.aerial_throttle = lag(a.aerial_throttle, cmd.aerial_throttle, p.motor_time_constant);
  n.wings_folded = cmd.wings_folded;

  const double target = cmd.wings_folded ? 1.0 : 0.0;
  const double rate = p.fold_duration > 0.0 ? dt / p.fold_duration : 1.0;
  out.fold_progress = current.fold_progress < target ? std::min(target, current.fold_progress + rate)
                                                     : std::max(target, current.fold_progress - rate);
  return out;
}

Simulator::Simulator(PhysicsModel model, const RigidBodyState& initial, double dt,
                     const ActuatorCommand& initial_command)
    : model_(std::move(model)), state_(initial), dt_(dt) {
  if (!(dt > 0.0 && dt <= 0.01)) throw std::invalid_argument("Simulator: dt must lie in (0, 0.01] s");
  if (!initial.all_finite()) throw std::invalid_argument("Simulator: non-finite initial state");
  state_.attitude.normalize();
  command_ = clamp_command(initial_command, model_.params);
  actuators_.position = command_;
  actuators_.fold_progress = command_.wings_folded ? 1.0 : 0.0;
}

void Simulator::step() {
  actuators_ = advance_actuators(actuators_, command_, dt_, model_.params);
  state_ = step_dynamics(state_, actuators_, dt_, model_, time());
  ++steps_;
}

void validate(const SensorNoise& n) {
  for (double s : {n.depth, n.attitude, n.rate, n.airspeed, n.position, n.velocity}) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("sensors: noise standard deviations must be >= 0");
  }
}

SensorReadings sense(const RigidBodyState& state, double time, const VehicleParams& params,
                     const FluidEnvironment& env, const SensorNoise& noise, std::mt19937_64& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double std_dev) { return std_dev * unit(rng); };
  auto draw3 = [&](double std_dev) {
    const double x = draw(std_dev);
    const double y = draw(std_dev);
    const double z = draw(std_dev);
    return Eigen::Vector3d(x, y, z);
  };
  auto world_z = [&](const Eigen::Vector3d& body_point) {
    return state.position.z() + (state.attitude * (body_point - params.center_of_mass)).z() - env.surface_height;
  };

  SensorReadings out;
  out.timestamp = time;

  const double depth_noise = draw(noise.depth);
  const double sensor_depth = world_z(params.depth_sensor);
  if (sensor_depth > 0.0) out.depth = sensor_depth + depth_noise;

  out.attitude = euler_angles(state.attitude) + draw3(noise.attitude);
  out.angular_rate = state.angular_rate + draw3(noise.rate);

  const double airspeed_noise = draw(noise.airspeed);
  if (world_z(params.pitot) < 0.0) out.airspeed = std::max(0.0, state.velocity.norm() + airspeed_noise);

  const Eigen::Vector3d position_noise = draw3(noise.position);
  if (world_z(params.gnss_antenna) <= 0.0) {
    out.position = state.position + state.attitude * (params.gnss_antenna - params.center_of_mass) + position_noise;
  }

  out.velocity = state.velocity + draw3(noise.velocity);
  out.speed = out.velocity.norm();
  return out;
}

}  // namespace foilsim
