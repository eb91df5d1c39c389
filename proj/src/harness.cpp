#include "foilsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

namespace foilsim {

namespace {

struct ControllerState {
  DepthControllerState depth;
  AttitudeControllerState attitude;
  SpeedControllerState speed;
  std::optional<ActuatorSolution> guess_left;
  std::optional<ActuatorSolution> guess_right;
};

bool in_water_mode(Mode m) { return m == Mode::UnderwaterNav || m == Mode::SurfaceGlide || m == Mode::Takeoff; }

double sensor_depth(const RigidBodyState& s, const VehicleParams& p, const FluidEnvironment& env) {
  return s.position.z() + (s.attitude * (p.depth_sensor - p.center_of_mass)).z() - env.surface_height;
}

/// Depth of the depth-sensor point: the pressure reading when wet, otherwise
/// derived from the satellite fix and the attitude estimate.
std::optional<double> depth_estimate(const SensorReadings& r, const VehicleParams& p, const FluidEnvironment& env) {
  if (r.depth) return r.depth;
  if (r.position) {
    const auto q = from_euler(r.attitude.x(), r.attitude.y(), r.attitude.z());
    return r.position->z() + (q * (p.depth_sensor - p.gnss_antenna)).z() - env.surface_height;
  }
  return std::nullopt;
}

std::string stamp(double t) {
  std::ostringstream os;
  os << "t=" << format_double(t) << ": ";
  return os.str();
}

}  // namespace

RunResult simulate_mission(const Config& base, const MissionScript& mission, const RunOptions& options,
                           const RecordSink& sink) {
  Config cfg = base;
  if (options.dt) cfg.sim.dt = *options.dt;
  const int substeps = steps_per_control_tick(cfg.sim);
  const double tc = cfg.sim.control_period;
  double end = mission.end_time();
  if (options.duration) end = std::min(end, *options.duration);
  const long ticks = std::max(0L, static_cast<long>(std::ceil(end / tc - 1e-9)));

  const auto& p = cfg.vehicle;
  const auto& env = cfg.environment;
  PhysicsModel model{p, cfg.coefficients, env, {}, Eigen::Vector3d::Zero()};
  ModeManager modes(cfg.modes, mission.initial_mode, 0.0);
  ActuatorCommand initial_cmd;
  initial_cmd.wings_folded = cfg.modes.fold[static_cast<std::size_t>(mission.initial_mode)];
  Simulator sim(model, mission.initial_state, cfg.sim.dt, initial_cmd);
  std::mt19937_64 rng(options.seed);

  ControllerState ctl;
  ctl.depth = cfg.control.depth;
  ctl.depth.integral = 0.0;
  double h_d = sensor_depth(mission.initial_state, p, env);
  double v_d = mission.initial_state.velocity.norm();
  const auto initial_rpy = euler_angles(mission.initial_state.attitude);
  AttitudeSetpoint attitude_sp{initial_rpy.x(), initial_rpy.y(), 0.0};
  double last_depth = h_d;

  std::size_t next_event = 0;
  std::deque<MissionRequest> requests;
  RunResult result;

  for (long k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * tc;
    const auto immersion = sim.immersion();
    const auto readings = sense(sim.state(), t, p, env, cfg.sensors, rng);

    for (; next_event < mission.events.size() && mission.events[next_event].t <= t; ++next_event) {
      const auto& ev = mission.events[next_event];
      switch (ev.command) {
        case MissionCommand::SetDepth: h_d = ev.value; break;
        case MissionCommand::SetSpeed: v_d = ev.value; break;
        case MissionCommand::SetAttitude: attitude_sp = ev.attitude; break;
        case MissionCommand::RequestTakeoff: requests.push_back(MissionRequest::Takeoff); break;
        case MissionCommand::RequestLanding: requests.push_back(MissionRequest::Landing); break;
        case MissionCommand::End: break;
      }
    }

    if (auto h = depth_estimate(readings, p, env)) last_depth = *h;
    ModeInputs in{t, readings.speed, last_depth, h_d, immersion, std::nullopt};
    if (!requests.empty()) {
      in.request = requests.front();
      requests.pop_front();
    }
    const Mode before = modes.mode();
    const auto mo = modes.step(in);
    if (mo.request_rejected) {
      result.log.push_back(stamp(t) + "rejected " + std::string(in.request == MissionRequest::Takeoff
                                                                     ? "request_takeoff"
                                                                     : "request_landing") +
                           " in " + std::string(mode_name(before)));
    }
    if (mo.changed) {
      result.log.push_back(stamp(t) + std::string(mode_name(before)) + " -> " + std::string(mode_name(mo.mode)));
      ctl.depth.integral = 0.0;
      ctl.attitude = {};
      if (mo.mode == Mode::Flight) attitude_sp = {0.0, cfg.modes.flight_pitch, 0.0};
      if (mo.mode == Mode::Landing) attitude_sp = {0.0, cfg.modes.landing_pitch, 0.0};
    }

    // Underwater, the speed loop cannot ask for more than both thrusters can give.
    SpeedGains speed_gains = cfg.control.speed;
    const double thruster_cap =
        mo.enables.underwater_thrusters ? mo.directives.underwater * p.thrust_max_underwater : 0.0;
    if (in_water_mode(mo.mode)) speed_gains.output_max = std::min(speed_gains.output_max, 2.0 * thruster_cap);
    const auto speed_step = speed_control_step(v_d, readings.speed, tc, speed_gains, ctl.speed);
    ctl.speed = speed_step.state;
    const auto att_step = attitude_control_step(attitude_sp, readings.attitude, readings.angular_rate, tc,
                                                cfg.control.attitude, ctl.attitude);
    ctl.attitude = att_step.state;
    const double airspeed = readings.airspeed.value_or(readings.speed);

    TelemetryRecord rec;
    ActuatorCommand& cmd = rec.command;
    cmd.wings_folded = mo.fold;

    if (in_water_mode(mo.mode)) {
      ctl.depth.f_g = gravity_compensation(p, env, readings.attitude.x(), readings.attitude.y(),
                                           immersion[Component::Fuselage].fraction);
      const auto depth_step = depth_control_step(h_d, last_depth, tc, ctl.depth);
      ctl.depth = depth_step.state;
      double f_zd = depth_step.f_zd;
      if (mo.mode == Mode::Takeoff) f_zd = std::min(f_zd, 0.0);
      rec.wrench = assemble_wrench(speed_step.f_xd, f_zd, att_step.torque);
      const auto vf = allocate_wrench(rec.wrench, p.d_f, p.h_s);

      const Eigen::Vector3d& v = readings.velocity;
      const double alpha = std::atan2(v.z(), v.x());
      const double flow_speed = std::hypot(v.x(), v.z());

      const FoilFlow left_flow{alpha, flow_speed, immersion[Component::AileronLeft].fraction};
      const FoilFlow right_flow{alpha, flow_speed, immersion[Component::AileronRight].fraction};
      auto solve_side = [&](int side, FoilForce target, std::optional<ActuatorSolution>& guess, double& thrust,
                            double& delta, SolverStatus& status) {
        const bool right = side > 0;
        const double derate =
            thrust_derating(1.0, immersion[right ? Component::PropRight : Component::PropLeft].depth, p);
        const FoilFlow& flow = right ? right_flow : left_flow;
        const ActuatorLimits limits{thruster_cap * derate, p.deflection_limit};
        const auto sol = solve_actuator(target, flow, guess, limits, cfg.solver, env, p);
        guess = sol;
        thrust = derate > 0.0 ? sol.thrust / derate : 0.0;
        delta = mo.enables.underwater_servos ? sol.delta : 0.0;
        status = {sol.residual, sol.converged, sol.iterations};
      };
      solve_side(-1, {vf.f_xbl, vf.f_zbl}, ctl.guess_left, cmd.thrust_left, cmd.delta_left, rec.solver_left);
      solve_side(+1, {vf.f_xbr, vf.f_zbr}, ctl.guess_right, cmd.thrust_right, cmd.delta_right, rec.solver_right);
      // When a side saturates, the elevator trims against the foil force the
      // solver actually reached rather than the one that was asked for.
      const double reached_fx = aileron_forward(ctl.guess_left->thrust, ctl.guess_left->delta, left_flow, env, p).x +
                                aileron_forward(ctl.guess_right->thrust, ctl.guess_right->delta, right_flow, env, p).x;
      const double m_e = vf.m_e + p.h_s * (rec.wrench.f_xd - reached_fx);
      ImmersionState assumed = immersion;
      assumed[Component::Tail].fraction =
          std::max(assumed[Component::Tail].fraction, cfg.control.elevator_tail_wetting_floor);
      cmd.elevator = elevator_from_moment(m_e, readings.speed, elevator_density(assumed, env), p).deflection;

      if (mo.mode == Mode::Takeoff) {
        const double roll = aileron_from_roll_moment(att_step.torque.x(), airspeed, env, cfg.coefficients, p).deflection;
        cmd.aileron_l = -roll;
        cmd.aileron_r = roll;
        cmd.flaps = p.flap_bias;
        cmd.aerial_throttle = mo.enables.aerial_motor ? mo.directives.aerial : 0.0;
      }
    } else {
      ctl.guess_left.reset();
      ctl.guess_right.reset();
      rec.wrench = assemble_wrench(speed_step.f_xd, 0.0, att_step.torque);
      const double throttle = std::clamp(speed_step.f_xd / p.thrust_max_aerial, 0.0, 1.0);
      cmd.aerial_throttle = mo.enables.aerial_motor ? throttle * mo.directives.aerial : 0.0;
      cmd.elevator = elevator_from_moment(att_step.torque.y(), airspeed, env, p).deflection;
      const double roll = aileron_from_roll_moment(att_step.torque.x(), airspeed, env, cfg.coefficients, p).deflection;
      cmd.aileron_l = -roll;
      cmd.aileron_r = roll;
      cmd.flaps = mo.mode == Mode::Landing ? p.flap_bias : 0.0;
    }

    rec.t = t;
    rec.mode = mo.mode;
    rec.state = sim.state();
    rec.speed = sim.state().velocity.norm();
    rec.depth_true = sensor_depth(sim.state(), p, env);
    rec.depth_measured = readings.depth.value_or(std::numeric_limits<double>::quiet_NaN());
    rec.depth_setpoint = h_d;
    rec.speed_setpoint = v_d;
    rec.immersion = immersion;
    rec.directives = mo.directives;
    if (sink) sink(rec);

    sim.command(cmd);
    for (int i = 0; i < substeps; ++i) sim.step();
    result.ticks = k + 1;
  }

  result.end_time = end;
  result.final_mode = modes.mode();
  result.final_state = sim.state();
  return result;
}

int run_mission(const std::filesystem::path& config_path, const std::filesystem::path& mission_path,
                const std::filesystem::path& out_path, const RunOptions& options, std::ostream& diag) {
  Config cfg;
  MissionScript mission;
  try {
    cfg = load_config_file(config_path);
    mission = load_mission_file(mission_path);
    if (options.dt) {
      SimConfig sim = cfg.sim;
      sim.dt = *options.dt;
      steps_per_control_tick(sim);
    }
    if (options.duration && !(*options.duration >= 0.0)) throw ConfigError("--duration must be >= 0");
  } catch (const ConfigError& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    diag << "error: cannot write '" << out_path.string() << "'\n";
    return kExitInvalidInput;
  }
  TelemetryWriter writer(out);
  try {
    const auto result = simulate_mission(cfg, mission, options, [&](const TelemetryRecord& r) { writer.write(r); });
    for (const auto& line : result.log) diag << line << "\n";
  } catch (const SimulationHalted& e) {
    diag << "simulation halted: " << e.what() << "\n";
    return kExitHalted;
  } catch (const std::invalid_argument& e) {
    diag << "simulation halted: " << e.what() << "\n";
    return kExitHalted;
  }
  out.flush();
  if (!out) {
    diag << "error: failed writing '" << out_path.string() << "'\n";
    return kExitInvalidInput;
  }
  return kExitOk;
}

std::string override_yaml(const std::string& text, const std::string& key_path, const std::string& value) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!root.IsDefined() || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (key_path.empty()) throw ConfigError("empty parameter key");

  std::vector<std::string> parts;
  std::stringstream ss(key_path);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError("malformed parameter key '" + key_path + "'");
    parts.push_back(part);
  }
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node next = chain.back()[parts[i]];
    if (next.IsDefined() && !next.IsNull() && !next.IsMap()) {
      throw ConfigError("parameter key '" + key_path + "': '" + parts[i] + "' is not a mapping");
    }
    chain.push_back(next);
  }
  chain.back()[parts.back()] = YAML::Load(value);
  YAML::Emitter emitter;
  emitter << root;
  return emitter.c_str();
}

namespace {

struct RunPlan {
  std::uint64_t seed = 0;
  std::vector<std::string> values;
};

struct RunStats {
  int exit_code = kExitOk;
  Mode final_mode = Mode::UnderwaterNav;
  double end_time = 0.0;
  double max_speed = 0.0;
  double max_height = -std::numeric_limits<double>::infinity();  // highest lowest-point clearance
  double final_depth = std::numeric_limits<double>::quiet_NaN();
  std::string message;
};

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot read ") + what + " file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

RunStats execute(const std::string& config_text, const MissionScript& mission, const SweepOptions& opt,
                 const SweepParameter* params, const RunPlan& plan, const std::filesystem::path& csv) {
  RunStats stats;
  Config cfg;
  try {
    std::string text = config_text;
    for (std::size_t i = 0; i < plan.values.size(); ++i) text = override_yaml(text, params[i].key, plan.values[i]);
    cfg = load_config(text);
    if (opt.dt) {
      SimConfig sim = cfg.sim;
      sim.dt = *opt.dt;
      steps_per_control_tick(sim);
    }
  } catch (const ConfigError& e) {
    stats.exit_code = kExitInvalidInput;
    stats.message = e.what();
    return stats;
  }
  std::ofstream out(csv, std::ios::binary);
  if (!out) {
    stats.exit_code = kExitInvalidInput;
    stats.message = "cannot write '" + csv.string() + "'";
    return stats;
  }
  TelemetryWriter writer(out);
  try {
    RunOptions ro{plan.seed, opt.dt, opt.duration};
    const auto result = simulate_mission(cfg, mission, ro, [&](const TelemetryRecord& r) {
      writer.write(r);
      stats.max_speed = std::max(stats.max_speed, r.speed);
      stats.max_height = std::max(stats.max_height, r.immersion.lowest_point_height);
      stats.final_depth = r.depth_true;
    });
    stats.final_mode = result.final_mode;
    stats.end_time = result.end_time;
  } catch (const SimulationHalted& e) {
    stats.exit_code = kExitHalted;
    stats.message = e.what();
  } catch (const std::invalid_argument& e) {
    stats.exit_code = kExitHalted;
    stats.message = e.what();
  }
  return stats;
}

}  // namespace

int run_sweep(const std::filesystem::path& config_path, const std::filesystem::path& mission_path,
              const std::filesystem::path& out_dir, const SweepOptions& options, std::ostream& diag) {
  std::string config_text;
  MissionScript mission;
  try {
    if (options.seeds < 1) throw ConfigError("--seeds must be >= 1");
    for (const auto& param : options.params) {
      if (param.values.empty()) throw ConfigError("parameter '" + param.key + "' has no values");
    }
    config_text = read_file(config_path, "config");
    mission = load_mission_file(mission_path);
  } catch (const ConfigError& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    diag << "error: cannot create '" << out_dir.string() << "': " << ec.message() << "\n";
    return kExitInvalidInput;
  }

  std::vector<RunPlan> plans;
  std::vector<std::size_t> index(options.params.size(), 0);
  for (;;) {
    for (int s = 0; s < options.seeds; ++s) {
      RunPlan plan{options.first_seed + static_cast<std::uint64_t>(s), {}};
      for (std::size_t i = 0; i < index.size(); ++i) plan.values.push_back(options.params[i].values[index[i]]);
      plans.push_back(std::move(plan));
    }
    std::size_t i = 0;
    for (; i < index.size(); ++i) {
      if (++index[i] < options.params[i].values.size()) break;
      index[i] = 0;
    }
    if (i == index.size()) break;
  }

  auto csv_name = [](std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "run_%03zu.csv", i);
    return std::string(buf);
  };

  std::vector<RunStats> stats(plans.size());
  std::atomic<std::size_t> next{0};
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs ? options.jobs : std::thread::hardware_concurrency(),
                                                        static_cast<unsigned>(plans.size())));
  auto worker = [&] {
    for (std::size_t i = next++; i < plans.size(); i = next++) {
      stats[i] = execute(config_text, mission, options, options.params.data(), plans[i], out_dir / csv_name(i));
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::ofstream summary(out_dir / "summary.csv", std::ios::binary);
  if (!summary) {
    diag << "error: cannot write summary.csv\n";
    return kExitInvalidInput;
  }
  summary << "run,file,seed";
  for (const auto& param : options.params) summary << "," << param.key;
  summary << ",exit_code,final_mode,end_time,max_speed,max_clearance,final_depth\n";
  int worst = kExitOk;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& s = stats[i];
    summary << i << "," << csv_name(i) << "," << plans[i].seed;
    for (const auto& v : plans[i].values) summary << "," << v;
    summary << "," << s.exit_code << "," << mode_name(s.final_mode) << "," << format_double(s.end_time) << ","
            << format_double(s.max_speed) << "," << format_double(s.max_height) << ","
            << format_double(s.final_depth) << "\n";
    if (!s.message.empty()) diag << csv_name(i) << ": " << s.message << "\n";
    worst = std::max(worst, s.exit_code);
  }
  return worst;
}

}  // namespace foilsim
