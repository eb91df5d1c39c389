#pragma once

// Scripted missions: initial condition plus a time-ordered list of commands.
//
//   duration: 30            # optional cap, s
//   initial:
//     mode: UnderwaterNav
//     position: [0, 0, 0.1]
//     attitude_deg: [0, 0, 0]   # roll, pitch, yaw
//     velocity: [0.5, 0, 0]     # body frame
//   events:
//     - {t: 0, command: set_depth, value: 0.15}
//     - {t: 30, command: end}

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "foilsim/control.hpp"
#include "foilsim/mode_manager.hpp"

namespace foilsim {

enum class MissionCommand { SetDepth, SetSpeed, SetAttitude, RequestTakeoff, RequestLanding, End };

std::string_view command_name(MissionCommand c);

struct MissionEvent {
  double t = 0.0;
  MissionCommand command = MissionCommand::End;
  double value = 0.0;         // set_depth (m) or set_speed (m/s)
  AttitudeSetpoint attitude;  // set_attitude
};

struct MissionScript {
  Mode initial_mode = Mode::UnderwaterNav;
  RigidBodyState initial_state;
  std::vector<MissionEvent> events;  // non-decreasing t, exactly one End, last
  std::optional<double> duration;

  double end_time() const;
};

/// Parses and checks a mission document. Rejects negative or decreasing
/// times, unknown commands, and a missing or repeated end event.
MissionScript validate_mission(std::string_view text);
MissionScript load_mission_file(const std::filesystem::path& path);

}  // namespace foilsim
