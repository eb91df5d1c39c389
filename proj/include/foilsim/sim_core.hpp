#pragma once

// Six-degree-of-freedom rigid-body dynamics across water and air: force
// aggregation, fixed-step RK4, first-order actuator lag and sensor synthesis.

#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "foilsim/allocation.hpp"

namespace foilsim {

/// Per-term switches, used by tests to isolate individual force contributions.
struct ForceToggles {
  bool gravity = true;
  bool buoyancy = true;
  bool aero = true;
  bool foils = true;
  bool aerial_thrust = true;
  bool hull_drag = true;
};

struct PhysicsModel {
  VehicleParams params;
  CoefficientTable table = default_coefficient_table();
  FluidEnvironment env;
  ForceToggles toggles;
  Eigen::Vector3d disturbance = Eigen::Vector3d::Zero();  // N, world frame, applied at the CoM
};

/// Actual actuator positions after lag, plus wing fold progress (0 open, 1 folded).
struct ActuatorState {
  ActuatorCommand position;
  double fold_progress = 0.0;
};

/// Net force and moment about the center of mass, body frame.
BodyWrench total_wrench(const RigidBodyState& state, const ActuatorState& actuators, const ImmersionState& immersion,
                        const PhysicsModel& model);

inline BodyWrench total_wrench(const RigidBodyState& state, const ActuatorState& actuators,
                               const PhysicsModel& model) {
  return total_wrench(state, actuators, compute_immersion(state, model.params, model.env), model);
}

/// Per-side foil force (right = +1, left = -1) in the body frame at the foil point.
BodyWrench foil_wrench(int side, const RigidBodyState& state, const ActuatorState& actuators,
                       const ImmersionState& immersion, const PhysicsModel& model);

struct StateDerivative {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // world velocity
  Eigen::Vector4d attitude = Eigen::Vector4d::Zero();  // quaternion coefficients (x, y, z, w)
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  // body acceleration
  Eigen::Vector3d angular_rate = Eigen::Vector3d::Zero();

  bool all_finite() const;
};

StateDerivative state_derivative(const RigidBodyState& state, const ActuatorState& actuators,
                                 const PhysicsModel& model);

/// Thrown when the integrator produces a non-finite quantity.
class SimulationHalted : public std::runtime_error {
 public:
  SimulationHalted(const std::string& what, double time, const RigidBodyState& state);
  double time;
  RigidBodyState state;
};

std::string describe(const RigidBodyState& state);

/// One RK4 step with actuators held constant. The attitude is renormalized.
/// Throws std::invalid_argument unless dt is in (0, 0.01]; throws
/// SimulationHalted on a non-finite derivative or result.
RigidBodyState step_dynamics(const RigidBodyState& state, const ActuatorState& actuators, double dt,
                             const PhysicsModel& model, double time = 0.0);

/// Clamp a command into the actuator ranges.
ActuatorCommand clamp_command(const ActuatorCommand& cmd, const VehicleParams& params);

/// Exact zero-order-hold first-order lag toward `cmd` over dt. Fold progress
/// moves toward the fold target at 1/fold_duration.
ActuatorState advance_actuators(const ActuatorState& current, const ActuatorCommand& cmd, double dt,
                                const VehicleParams& params);

class Simulator {
 public:
  Simulator(PhysicsModel model, const RigidBodyState& initial, double dt,
            const ActuatorCommand& initial_command = {});

  void command(const ActuatorCommand& cmd) { command_ = clamp_command(cmd, model_.params); }

  /// Lag the actuators, then integrate one step.
  void step();

  double time() const { return static_cast<double>(steps_) * dt_; }
  double dt() const { return dt_; }
  const RigidBodyState& state() const { return state_; }
  const ActuatorState& actuators() const { return actuators_; }
  const ActuatorCommand& commanded() const { return command_; }
  ImmersionState immersion() const { return compute_immersion(state_, model_.params, model_.env); }
  const PhysicsModel& model() const { return model_; }
  PhysicsModel& model() { return model_; }

 private:
  PhysicsModel model_;
  RigidBodyState state_;
  ActuatorState actuators_;
  ActuatorCommand command_;
  double dt_;
  long long steps_ = 0;
};

struct SensorNoise {
  double depth = 0.002;     // m
  double attitude = 0.002;  // rad
  double rate = 0.005;      // rad/s
  double airspeed = 0.1;    // m/s
  double position = 0.01;   // m
  double velocity = 0.02;   // m/s
};

/// Throws ConfigError naming the violated invariant.
void validate(const SensorNoise& noise);

struct SensorReadings {
  double timestamp = 0.0;
  std::optional<double> depth;        // m, present while the depth sensor is submerged
  Eigen::Vector3d attitude = Eigen::Vector3d::Zero();  // roll, pitch, yaw
  Eigen::Vector3d angular_rate = Eigen::Vector3d::Zero();
  std::optional<double> airspeed;     // m/s, present while the pitot is above water
  std::optional<Eigen::Vector3d> position;  // world, present while the antenna is above water
  // Navigation-filter stand-in: body velocity and its norm are always available.
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  double speed = 0.0;
};

/// Truth plus zero-mean Gaussian noise. Every channel draws its samples on
/// every call, whether or not it is available, so the stream depends only on
/// the seed and the call count.
SensorReadings sense(const RigidBodyState& state, double time, const VehicleParams& params,
                     const FluidEnvironment& env, const SensorNoise& noise, std::mt19937_64& rng);

}  // namespace foilsim
