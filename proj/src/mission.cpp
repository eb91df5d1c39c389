#include "foilsim/mission.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "yaml_section.hpp"

namespace foilsim {

namespace {

using detail::Section;

constexpr MissionCommand kCommands[] = {MissionCommand::SetDepth,       MissionCommand::SetSpeed,
                                        MissionCommand::SetAttitude,    MissionCommand::RequestTakeoff,
                                        MissionCommand::RequestLanding, MissionCommand::End};

std::optional<MissionCommand> parse_command(std::string_view name) {
  for (auto c : kCommands) {
    if (command_name(c) == name) return c;
  }
  return std::nullopt;
}

void read_initial(Section& s, MissionScript& m) {
  std::string mode = std::string(mode_name(m.initial_mode));
  s.get("mode", mode);
  const auto parsed = parse_mode(mode);
  if (!parsed) s.fail("mode", "unknown mode '" + mode + "'");
  m.initial_mode = *parsed;

  Eigen::Vector3d euler_deg = Eigen::Vector3d::Zero();
  s.get_vec3("position", m.initial_state.position);
  s.get_vec3("attitude_deg", euler_deg);
  s.get_vec3("velocity", m.initial_state.velocity);
  s.get_vec3("angular_rate", m.initial_state.angular_rate);
  m.initial_state.attitude = from_euler(deg2rad(euler_deg.x()), deg2rad(euler_deg.y()), deg2rad(euler_deg.z()));
  s.finish();
}

MissionEvent read_event(const YAML::Node& node, const std::string& path) {
  Section s(node, path);
  if (!s.present()) Section::fail_at(node, path, "expected a mapping");
  MissionEvent ev;
  s.require("t");
  s.require("command");
  s.get("t", ev.t);
  std::string name;
  s.get("command", name);
  const auto cmd = parse_command(name);
  if (!cmd) s.fail("command", "unknown command '" + name + "'");
  ev.command = *cmd;

  switch (ev.command) {
    case MissionCommand::SetDepth:
    case MissionCommand::SetSpeed:
      s.require("value");
      s.get("value", ev.value);
      break;
    case MissionCommand::SetAttitude:
      s.get_deg("roll_deg", ev.attitude.roll_d);
      s.get_deg("pitch_deg", ev.attitude.pitch_d);
      s.get_deg("yaw_rate_deg", ev.attitude.yaw_rate_d);
      break;
    default:
      break;
  }
  s.finish();
  if (ev.t < 0.0) s.fail("t", "negative time");
  if (ev.command == MissionCommand::SetSpeed && ev.value < 0.0) s.fail("value", "speed must be >= 0");
  return ev;
}

}  // namespace

std::string_view command_name(MissionCommand c) {
  switch (c) {
    case MissionCommand::SetDepth: return "set_depth";
    case MissionCommand::SetSpeed: return "set_speed";
    case MissionCommand::SetAttitude: return "set_attitude";
    case MissionCommand::RequestTakeoff: return "request_takeoff";
    case MissionCommand::RequestLanding: return "request_landing";
    case MissionCommand::End: return "end";
  }
  return "?";
}

double MissionScript::end_time() const {
  double t = events.empty() ? 0.0 : events.back().t;
  if (duration) t = std::min(t, *duration);
  return t;
}

MissionScript validate_mission(std::string_view text) {
  auto root = detail::parse_yaml(text);
  Section top(root, "");
  MissionScript m;

  if (top.has("duration")) {
    double d = 0.0;
    top.get("duration", d);
    if (d < 0.0) top.fail("duration", "must be >= 0");
    m.duration = d;
  }
  auto initial = top.child("initial");
  read_initial(initial, m);

  top.require("events");
  const YAML::Node events = top.take("events");
  if (!events.IsSequence()) Section::fail_at(events, "events", "expected a list");
  int ends = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string path = "events[" + std::to_string(i) + "]";
    auto ev = read_event(events[i], path);
    if (!m.events.empty() && ev.t < m.events.back().t) {
      Section::fail_at(events[i], path + ".t", "event times must be non-decreasing");
    }
    if (ev.command == MissionCommand::End && ++ends > 1) {
      Section::fail_at(events[i], path, "more than one end event");
    }
    m.events.push_back(ev);
  }
  top.finish();

  if (ends == 0) throw ConfigError("events: missing end event");
  if (m.events.back().command != MissionCommand::End) {
    throw ConfigError("events: end must be the last event");
  }
  if (!m.initial_state.all_finite()) throw ConfigError("initial: non-finite state");
  return m;
}

MissionScript load_mission_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read mission file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return validate_mission(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace foilsim
