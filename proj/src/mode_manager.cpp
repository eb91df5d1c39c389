#include "foilsim/mode_manager.hpp"

#include <algorithm>
#include <stdexcept>

namespace foilsim {

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::UnderwaterNav: return "UnderwaterNav";
    case Mode::SurfaceGlide: return "SurfaceGlide";
    case Mode::Takeoff: return "Takeoff";
    case Mode::Flight: return "Flight";
    case Mode::Landing: return "Landing";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (auto m : {Mode::UnderwaterNav, Mode::SurfaceGlide, Mode::Takeoff, Mode::Flight, Mode::Landing}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

bool is_legal_transition(Mode from, Mode to) {
  switch (from) {
    case Mode::UnderwaterNav: return to == Mode::SurfaceGlide;
    case Mode::SurfaceGlide: return to == Mode::Takeoff;
    case Mode::Takeoff: return to == Mode::Flight;
    case Mode::Flight: return to == Mode::Landing;
    case Mode::Landing: return to == Mode::SurfaceGlide;
  }
  return false;
}

void validate(const ModeConfig& cfg) {
  if (!(cfg.v_aerial_on > 0.0 && cfg.v_aerial_on < cfg.v_takeoff_min)) {
    throw ConfigError("modes: require 0 < v_aerial_on < v_takeoff_min");
  }
  if (!(cfg.emergence_hold >= 0.0)) throw ConfigError("modes.emergence_hold must be >= 0");
  if (!(cfg.surface_band >= 0.0)) throw ConfigError("modes.surface_band must be >= 0");
  if (!(cfg.glide_underwater_throttle >= 0.0 && cfg.glide_underwater_throttle <= 1.0)) {
    throw ConfigError("modes.glide_underwater_throttle must lie in [0, 1]");
  }
  if (!(cfg.underwater_ramp_rate > 0.0)) throw ConfigError("modes.underwater_ramp_rate must be > 0");
  if (!(cfg.aerial_ramp_rate > 0.0)) throw ConfigError("modes.aerial_ramp_rate must be > 0");
}

TakeoffStep takeoff_sequencer(const TakeoffSequencerState& state, double time, double speed,
                              const ImmersionState& immersion, const ModeConfig& cfg) {
  TakeoffStep out{{}, state};
  auto& s = out.state;
  const double dt = s.last_time ? std::max(0.0, time - *s.last_time) : 0.0;
  s.last_time = time;

  s.level.underwater = std::min(1.0, s.level.underwater + cfg.underwater_ramp_rate * dt);
  if (speed >= cfg.v_aerial_on) s.aerial_engaged = true;
  if (s.aerial_engaged) s.level.aerial = std::min(1.0, s.level.aerial + cfg.aerial_ramp_rate * dt);

  if (immersion.props_airborne()) {
    if (!s.airborne_since) s.airborne_since = time;
    if (time - *s.airborne_since >= cfg.emergence_hold) s.underwater_cut = true;
  } else {
    s.airborne_since.reset();
  }

  out.directives = {s.underwater_cut ? 0.0 : s.level.underwater, s.aerial_engaged ? s.level.aerial : 0.0};
  return out;
}

ModeManager::ModeManager(ModeConfig cfg, Mode initial, double start_time)
    : cfg_(cfg), mode_(initial), entry_time_(start_time), last_time_(start_time) {
  validate(cfg_);
  enter(initial, start_time);
}

void ModeManager::enter(Mode next, double time) {
  mode_ = next;
  entry_time_ = time;
  if (next == Mode::Takeoff) {
    sequencer_ = {};
    sequencer_.level.underwater = cfg_.glide_underwater_throttle;
  }
}

ModeOutput ModeManager::step(const ModeInputs& in) {
  if (in.time < last_time_) throw std::invalid_argument("ModeManager::step: time went backwards");
  last_time_ = in.time;

  ModeOutput out;
  const Mode before = mode_;
  if (in.request) {
    const Mode wanted = *in.request == MissionRequest::Takeoff ? Mode::Takeoff : Mode::Landing;
    if (is_legal_transition(mode_, wanted)) {
      enter(wanted, in.time);
    } else {
      out.request_rejected = true;
    }
  }

  ThrottleDirectives takeoff_directives;
  if (mode_ == Mode::Takeoff) {
    auto seq = takeoff_sequencer(sequencer_, in.time, in.speed, in.immersion, cfg_);
    sequencer_ = seq.state;
    takeoff_directives = seq.directives;
  }

  if (mode_ == before) {
    switch (mode_) {
      case Mode::UnderwaterNav:
        if (in.depth_setpoint <= cfg_.surface_band && in.depth <= cfg_.surface_band) {
          enter(Mode::SurfaceGlide, in.time);
        }
        break;
      case Mode::Takeoff:
        if (in.speed >= cfg_.v_takeoff_min && in.immersion.lowest_point_height > 0.0) {
          enter(Mode::Flight, in.time);
        }
        break;
      case Mode::Landing:
        if (in.immersion[Component::Tail].fraction > 0.0) enter(Mode::SurfaceGlide, in.time);
        break;
      case Mode::SurfaceGlide:
      case Mode::Flight:
        break;
    }
  }

  out.mode = mode_;
  out.changed = mode_ != before;
  out.fold = cfg_.fold[static_cast<std::size_t>(mode_)];
  switch (mode_) {
    case Mode::UnderwaterNav:
      out.enables = {true, true, false};
      out.directives = {1.0, 0.0};
      break;
    case Mode::SurfaceGlide:
      out.enables = {true, true, false};
      out.directives = {cfg_.glide_underwater_throttle, 0.0};
      break;
    case Mode::Takeoff:
      out.enables = {!sequencer_.underwater_cut, true, sequencer_.aerial_engaged};
      out.directives = takeoff_directives;
      break;
    case Mode::Flight:
    case Mode::Landing:
      out.enables = {false, false, true};
      out.directives = {0.0, 1.0};
      break;
  }
  return out;
}

}  // namespace foilsim
