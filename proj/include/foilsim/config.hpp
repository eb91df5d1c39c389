#pragma once

// Whole-run configuration as read from a YAML document. Every section is
// optional except `vehicle.mass`; unknown keys are rejected with their line.

#include <filesystem>
#include <string_view>

#include "foilsim/control.hpp"
#include "foilsim/mode_manager.hpp"
#include "foilsim/sim_core.hpp"

namespace foilsim {

struct ControlConfig {
  DepthControllerState depth;  // gains and integral limit; integral and f_g are runtime state
  AttitudeGains attitude;
  SpeedGains speed;
  // Tail wetting assumed when sizing elevator commands in water modes. A dry
  // tail trimmed for air would otherwise hit the water fully deflected.
  double elevator_tail_wetting_floor = 0.1;
};

struct SimConfig {
  double dt = 0.001;             // s
  double control_period = 0.004;  // s, must be a whole number of dt
};

struct Config {
  VehicleParams vehicle;
  CoefficientTable coefficients = default_coefficient_table();
  FluidEnvironment environment;
  ControlConfig control;
  ModeConfig modes;
  SensorNoise sensors;
  SimConfig sim;
  SolverOptions solver;
};

/// Number of integration steps per control tick. Throws ConfigError when the
/// control period is not a positive whole multiple of dt.
int steps_per_control_tick(const SimConfig& sim);

/// Throws ConfigError naming the first violated invariant.
void validate(const Config& cfg);

Config load_config(std::string_view text);
Config load_config_file(const std::filesystem::path& path);

}  // namespace foilsim
