#pragma once

// Five-phase supervisor: underwater navigation, surface glide, takeoff,
// flight and landing, with guarded transitions, per-mode actuator gating and
// the takeoff throttle schedule.
//
//   UnderwaterNav --surface reached--> SurfaceGlide --takeoff request--> Takeoff
//   Takeoff --fast enough and clear of the water--> Flight
//   Flight --landing request--> Landing --tail touchdown--> SurfaceGlide

#include <array>
#include <optional>
#include <string_view>

#include "foilsim/hydro_aero.hpp"

namespace foilsim {

enum class Mode { UnderwaterNav, SurfaceGlide, Takeoff, Flight, Landing };
inline constexpr std::size_t kModeCount = 5;

std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);
bool is_legal_transition(Mode from, Mode to);

struct ModeConfig {
  double v_aerial_on = 3.0;    // m/s, aerial motor engages during takeoff
  double v_takeoff_min = 6.0;  // m/s
  double emergence_hold = 0.2;  // s, propellers airborne before underwater cutoff
  double surface_band = 0.05;   // m
  double glide_underwater_throttle = 0.6;  // underwater thrust cap while gliding
  double underwater_ramp_rate = 0.5;       // 1/s
  double aerial_ramp_rate = 0.5;           // 1/s
  double flight_pitch = deg2rad(8.0);
  double landing_pitch = deg2rad(12.0);
  std::array<bool, kModeCount> fold{true, false, false, false, false};
};

/// Throws ConfigError naming the violated invariant.
void validate(const ModeConfig& cfg);

enum class MissionRequest { Takeoff, Landing };

struct ActuatorEnables {
  bool underwater_thrusters = false;
  bool underwater_servos = false;
  bool aerial_motor = false;
};

/// Throttle authority in [0, 1] for each propulsion group.
struct ThrottleDirectives {
  double underwater = 0.0;
  double aerial = 0.0;
};

struct TakeoffSequencerState {
  ThrottleDirectives level;
  bool aerial_engaged = false;
  bool underwater_cut = false;
  std::optional<double> airborne_since;  // s, props continuously out of the water since
  std::optional<double> last_time;
};

struct TakeoffStep {
  ThrottleDirectives directives;
  TakeoffSequencerState state;
};

/// Underwater directive ramps to 1; aerial stays 0 until speed reaches
/// v_aerial_on, then ramps to 1; underwater drops to 0 once both propellers
/// have been out of the water for emergence_hold.
TakeoffStep takeoff_sequencer(const TakeoffSequencerState& state, double time, double speed,
                              const ImmersionState& immersion, const ModeConfig& cfg);

struct ModeInputs {
  double time = 0.0;
  double speed = 0.0;           // m/s
  double depth = 0.0;           // m, measured, positive below the surface
  double depth_setpoint = 0.0;  // m
  ImmersionState immersion;
  std::optional<MissionRequest> request;
};

struct ModeOutput {
  Mode mode = Mode::UnderwaterNav;
  bool changed = false;
  bool request_rejected = false;
  ActuatorEnables enables;
  ThrottleDirectives directives;
  bool fold = false;
};

class ModeManager {
 public:
  ModeManager(ModeConfig cfg, Mode initial, double start_time = 0.0);

  /// Throws std::invalid_argument if time runs backwards.
  ModeOutput step(const ModeInputs& in);

  Mode mode() const { return mode_; }
  double entry_time() const { return entry_time_; }
  const TakeoffSequencerState& sequencer() const { return sequencer_; }
  const ModeConfig& config() const { return cfg_; }

 private:
  void enter(Mode next, double time);

  ModeConfig cfg_;
  Mode mode_;
  double entry_time_;
  double last_time_;
  TakeoffSequencerState sequencer_;
};

}  // namespace foilsim
