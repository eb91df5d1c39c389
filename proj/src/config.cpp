#include "foilsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "yaml_section.hpp"

namespace foilsim {

namespace {

using detail::Section;

void read_environment(Section& s, FluidEnvironment& env) {
  s.get("water_density", env.water_density);
  s.get("air_density", env.air_density);
  s.get("gravity", env.gravity);
  s.get("surface_height", env.surface_height);
  s.finish();
}

void read_control(Section& s, ControlConfig& c) {
  auto depth = s.child("depth");
  depth.get("k_p", c.depth.k_p);
  depth.get("k_i", c.depth.k_i);
  depth.get("integral_limit", c.depth.integral_limit);
  depth.finish();

  auto att = s.child("attitude");
  att.get("roll_angle_gain", c.attitude.roll_angle_gain);
  att.get("pitch_angle_gain", c.attitude.pitch_angle_gain);
  att.get("max_rate", c.attitude.max_rate);
  att.get_vec3("rate_kp", c.attitude.rate_kp);
  att.get_vec3("rate_ki", c.attitude.rate_ki);
  att.get_vec3("integral_limit", c.attitude.integral_limit);
  att.get_deg("envelope_deg", c.attitude.envelope);
  att.finish();

  auto speed = s.child("speed");
  speed.get("k_p", c.speed.k_p);
  speed.get("k_i", c.speed.k_i);
  speed.get("integral_limit", c.speed.integral_limit);
  speed.get("output_max", c.speed.output_max);
  speed.finish();

  s.get("elevator_tail_wetting_floor", c.elevator_tail_wetting_floor);
  s.finish();
}

void read_modes(Section& s, ModeConfig& m) {
  s.get("v_aerial_on", m.v_aerial_on);
  s.get("v_takeoff_min", m.v_takeoff_min);
  s.get("emergence_hold", m.emergence_hold);
  s.get("surface_band", m.surface_band);
  s.get("glide_underwater_throttle", m.glide_underwater_throttle);
  s.get("underwater_ramp_rate", m.underwater_ramp_rate);
  s.get("aerial_ramp_rate", m.aerial_ramp_rate);
  s.get_deg("flight_pitch_deg", m.flight_pitch);
  s.get_deg("landing_pitch_deg", m.landing_pitch);
  s.finish();
}

void read_sensors(Section& s, SensorNoise& n) {
  s.get("depth_std", n.depth);
  s.get("attitude_std", n.attitude);
  s.get("rate_std", n.rate);
  s.get("airspeed_std", n.airspeed);
  s.get("position_std", n.position);
  s.get("velocity_std", n.velocity);
  s.finish();
}

void read_sim(Section& s, SimConfig& sim) {
  s.get("dt", sim.dt);
  s.get("control_period", sim.control_period);
  s.finish();
}

void read_solver(Section& s, SolverOptions& o) {
  s.get("tolerance", o.tolerance);
  s.get("max_iterations", o.max_iterations);
  s.get("fd_step", o.fd_step);
  s.finish();
}

void check(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

int steps_per_control_tick(const SimConfig& sim) {
  check(sim.dt > 0.0 && sim.dt <= 0.01, "sim.dt must lie in (0, 0.01] s");
  check(sim.control_period >= sim.dt, "sim.control_period must be >= sim.dt");
  const double ratio = sim.control_period / sim.dt;
  const double whole = std::round(ratio);
  check(std::abs(ratio - whole) < 1e-9 * whole, "sim.control_period must be a whole multiple of sim.dt");
  return static_cast<int>(whole);
}

void validate(const Config& cfg) {
  validate(cfg.vehicle);
  validate(cfg.coefficients);
  validate(cfg.environment);
  validate(cfg.modes);
  validate(cfg.sensors);
  steps_per_control_tick(cfg.sim);

  const auto& c = cfg.control;
  check(c.depth.k_p >= 0.0 && c.depth.k_i >= 0.0, "control.depth gains must be >= 0");
  check(c.depth.integral_limit >= 0.0, "control.depth.integral_limit must be >= 0");
  check(c.attitude.max_rate > 0.0, "control.attitude.max_rate must be > 0");
  check(c.attitude.envelope > 0.0 && c.attitude.envelope < kPi / 2, "control.attitude.envelope_deg must lie in (0, 90)");
  check((c.attitude.rate_kp.array() >= 0.0).all() && (c.attitude.rate_ki.array() >= 0.0).all(),
        "control.attitude rate gains must be >= 0");
  check((c.attitude.integral_limit.array() >= 0.0).all(), "control.attitude.integral_limit must be >= 0");
  check(c.speed.k_p >= 0.0 && c.speed.k_i >= 0.0, "control.speed gains must be >= 0");
  check(c.speed.output_max > 0.0, "control.speed.output_max must be > 0");
  check(c.speed.integral_limit >= 0.0, "control.speed.integral_limit must be >= 0");

  check(c.elevator_tail_wetting_floor >= 0.0 && c.elevator_tail_wetting_floor <= 1.0,
        "control.elevator_tail_wetting_floor must lie in [0, 1]");

  check(cfg.solver.tolerance > 0.0, "solver.tolerance must be > 0");
  check(cfg.solver.max_iterations > 0, "solver.max_iterations must be > 0");
  check(cfg.solver.fd_step > 0.0, "solver.fd_step must be > 0");
}

Config load_config(std::string_view text) {
  Config cfg;
  auto loaded = load_params(text);
  cfg.vehicle = loaded.params;
  cfg.coefficients = loaded.table;

  auto root = detail::parse_yaml(text);
  Section top(root, "");
  top.take("vehicle");
  top.take("coefficients");
  auto env = top.child("environment");
  read_environment(env, cfg.environment);
  auto control = top.child("control");
  read_control(control, cfg.control);
  auto modes = top.child("modes");
  read_modes(modes, cfg.modes);
  auto sensors = top.child("sensors");
  read_sensors(sensors, cfg.sensors);
  auto sim = top.child("sim");
  read_sim(sim, cfg.sim);
  auto solver = top.child("solver");
  read_solver(solver, cfg.solver);
  top.finish();

  validate(cfg);
  return cfg;
}

Config load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return load_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace foilsim
