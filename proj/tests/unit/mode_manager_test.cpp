#include <gtest/gtest.h>

#include <random>

#include "foilsim/mode_manager.hpp"

using namespace foilsim;

namespace {

ImmersionState wet() {
  ImmersionState imm;
  for (auto& p : imm.parts) p = {0.1, 1.0};
  imm.lowest_point_height = -0.1;
  return imm;
}

ImmersionState airborne() {
  ImmersionState imm;
  imm.lowest_point_height = 0.5;
  return imm;
}

ModeInputs at(double t, double speed, const ImmersionState& imm, std::optional<MissionRequest> request = {}) {
  ModeInputs in;
  in.time = t;
  in.speed = speed;
  in.depth = -0.1;
  in.depth_setpoint = -0.1;
  in.immersion = imm;
  in.request = request;
  return in;
}

}  // namespace

TEST(ModeNames, RoundTrip) {
  for (auto m : {Mode::UnderwaterNav, Mode::SurfaceGlide, Mode::Takeoff, Mode::Flight, Mode::Landing}) {
    EXPECT_EQ(parse_mode(mode_name(m)), m);
  }
  EXPECT_FALSE(parse_mode("Hover").has_value());
}

TEST(ModeConfig, Validation) {
  ModeConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.v_aerial_on = cfg.v_takeoff_min;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  cfg.v_aerial_on = 0.0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  cfg.glide_underwater_throttle = 1.5;
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(ModeManager, UnderwaterSelfLoopKeepsWingsFolded) {
  ModeManager mm(ModeConfig{}, Mode::UnderwaterNav);
  ModeInputs in = at(0.1, 1.0, wet());
  in.depth = 0.3;
  in.depth_setpoint = 0.3;
  const auto out = mm.step(in);
  EXPECT_EQ(out.mode, Mode::UnderwaterNav);
  EXPECT_FALSE(out.changed);
  EXPECT_TRUE(out.fold);
  EXPECT_TRUE(out.enables.underwater_thrusters);
  EXPECT_FALSE(out.enables.aerial_motor);
}

TEST(ModeManager, SurfacingNeedsBothSetpointAndDepth) {
  ModeManager mm(ModeConfig{}, Mode::UnderwaterNav);
  ModeInputs in = at(0.1, 1.0, wet());
  in.depth_setpoint = 0.0;
  in.depth = 0.2;
  EXPECT_EQ(mm.step(in).mode, Mode::UnderwaterNav);
  in.time = 0.2;
  in.depth = 0.04;
  const auto out = mm.step(in);
  EXPECT_EQ(out.mode, Mode::SurfaceGlide);
  EXPECT_TRUE(out.changed);
  EXPECT_FALSE(out.fold);
  EXPECT_EQ(mm.entry_time(), 0.2);
}

TEST(ModeManager, TakeoffRequestFromGlide) {
  ModeManager mm(ModeConfig{}, Mode::SurfaceGlide);
  const auto out = mm.step(at(1.0, 2.0, wet(), MissionRequest::Takeoff));
  EXPECT_EQ(out.mode, Mode::Takeoff);
  EXPECT_TRUE(out.enables.underwater_thrusters);
  EXPECT_TRUE(out.enables.underwater_servos);
  EXPECT_FALSE(out.enables.aerial_motor);
  EXPECT_EQ(out.directives.aerial, 0.0);
}

TEST(ModeManager, FlightNeedsSpeedAndClearance) {
  ModeConfig cfg;
  ModeManager mm(cfg, Mode::Takeoff);
  auto partly_wet = airborne();
  partly_wet.lowest_point_height = -0.01;
  EXPECT_EQ(mm.step(at(0.1, cfg.v_takeoff_min + 1.0, partly_wet)).mode, Mode::Takeoff);
  EXPECT_EQ(mm.step(at(0.2, cfg.v_takeoff_min - 0.1, airborne())).mode, Mode::Takeoff);
  const auto out = mm.step(at(0.3, cfg.v_takeoff_min, airborne()));
  EXPECT_EQ(out.mode, Mode::Flight);
  EXPECT_FALSE(out.enables.underwater_thrusters);
  EXPECT_TRUE(out.enables.aerial_motor);
}

TEST(ModeManager, LandingEndsOnTailTouchdown) {
  ModeManager mm(ModeConfig{}, Mode::Flight);
  EXPECT_EQ(mm.step(at(0.1, 8.0, airborne(), MissionRequest::Landing)).mode, Mode::Landing);
  auto imm = airborne();
  imm[Component::AileronLeft] = {0.01, 0.5};
  EXPECT_EQ(mm.step(at(0.2, 8.0, imm)).mode, Mode::Landing);
  imm[Component::Tail] = {0.001, 0.03};
  EXPECT_EQ(mm.step(at(0.3, 8.0, imm)).mode, Mode::SurfaceGlide);
}

TEST(ModeManager, IllegalRequestRejected) {
  ModeManager mm(ModeConfig{}, Mode::UnderwaterNav);
  ModeInputs in = at(0.1, 1.0, wet(), MissionRequest::Takeoff);
  in.depth = 0.3;
  in.depth_setpoint = 0.3;
  const auto out = mm.step(in);
  EXPECT_TRUE(out.request_rejected);
  EXPECT_EQ(out.mode, Mode::UnderwaterNav);

  ModeManager flying(ModeConfig{}, Mode::Flight);
  EXPECT_TRUE(flying.step(at(0.1, 10.0, airborne(), MissionRequest::Takeoff)).request_rejected);
  EXPECT_EQ(flying.mode(), Mode::Flight);
}

TEST(ModeManager, TimeMustNotRunBackwards) {
  ModeManager mm(ModeConfig{}, Mode::SurfaceGlide, 5.0);
  EXPECT_THROW(mm.step(at(4.0, 1.0, wet())), std::invalid_argument);
  EXPECT_NO_THROW(mm.step(at(5.0, 1.0, wet())));
}

TEST(TakeoffSequencer, AerialHeldOffBelowEngageSpeed) {
  ModeConfig cfg;
  TakeoffSequencerState s;
  for (int i = 0; i < 100; ++i) {
    const auto step = takeoff_sequencer(s, 0.01 * i, cfg.v_aerial_on - 0.5, wet(), cfg);
    EXPECT_EQ(step.directives.aerial, 0.0);
    s = step.state;
  }
  EXPECT_GT(s.level.underwater, 0.0);
}

TEST(TakeoffSequencer, BothRampStrictlyAfterEngagement) {
  ModeConfig cfg;
  TakeoffSequencerState s;
  s.level.underwater = 0.2;
  auto prev = takeoff_sequencer(s, 0.0, cfg.v_aerial_on + 0.1, wet(), cfg);
  for (int i = 1; i < 50; ++i) {
    const auto step = takeoff_sequencer(prev.state, 0.02 * i, cfg.v_aerial_on + 0.1, wet(), cfg);
    EXPECT_GT(step.directives.underwater, prev.directives.underwater);
    EXPECT_GT(step.directives.aerial, prev.directives.aerial);
    prev = step;
  }
}

TEST(TakeoffSequencer, DirectivesStayInUnitRange) {
  ModeConfig cfg;
  TakeoffSequencerState s;
  for (int i = 0; i < 2000; ++i) {
    const auto step = takeoff_sequencer(s, 0.01 * i, 10.0, wet(), cfg);
    EXPECT_GE(step.directives.underwater, 0.0);
    EXPECT_LE(step.directives.underwater, 1.0);
    EXPECT_LE(step.directives.aerial, 1.0);
    s = step.state;
  }
  EXPECT_EQ(s.level.aerial, 1.0);
}

TEST(TakeoffSequencer, EngagementLatches) {
  ModeConfig cfg;
  auto step = takeoff_sequencer({}, 0.0, cfg.v_aerial_on, wet(), cfg);
  step = takeoff_sequencer(step.state, 0.5, 0.0, wet(), cfg);
  EXPECT_TRUE(step.state.aerial_engaged);
  EXPECT_GT(step.directives.aerial, 0.0);
}

TEST(TakeoffSequencer, UnderwaterCutAfterEmergenceHold) {
  ModeConfig cfg;
  cfg.emergence_hold = 0.2;
  TakeoffSequencerState s;
  s.level.underwater = 0.8;
  auto step = takeoff_sequencer(s, 1.0, 5.0, airborne(), cfg);
  EXPECT_GT(step.directives.underwater, 0.0);
  step = takeoff_sequencer(step.state, 1.1, 5.0, wet(), cfg);  // splashes back in: hold restarts
  step = takeoff_sequencer(step.state, 1.15, 5.0, airborne(), cfg);
  step = takeoff_sequencer(step.state, 1.3, 5.0, airborne(), cfg);
  EXPECT_GT(step.directives.underwater, 0.0);
  step = takeoff_sequencer(step.state, 1.35, 5.0, airborne(), cfg);
  EXPECT_EQ(step.directives.underwater, 0.0);
  step = takeoff_sequencer(step.state, 1.4, 5.0, wet(), cfg);
  EXPECT_EQ(step.directives.underwater, 0.0);
}

TEST(ModeManager, EnteringTakeoffRestartsSequencerAtGlideThrottle) {
  ModeConfig cfg;
  ModeManager mm(cfg, Mode::SurfaceGlide);
  const auto out = mm.step(at(3.0, 1.0, wet(), MissionRequest::Takeoff));
  EXPECT_EQ(out.directives.underwater, cfg.glide_underwater_throttle);
  EXPECT_FALSE(mm.sequencer().aerial_engaged);
}

TEST(ModeManager, RandomizedEventsRespectEdgeSet) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> speed(0.0, 10.0), depth(-0.3, 0.5), lowest(-0.2, 0.3), unit(0.0, 1.0);
  std::uniform_int_distribution<int> request(0, 5), start(0, 4);
  for (int run = 0; run < 200; ++run) {
    ModeManager mm(ModeConfig{}, static_cast<Mode>(start(rng)));
    double t = 0.0, last_entry = mm.entry_time();
    for (int i = 0; i < 500; ++i) {
      t += 0.004 * unit(rng);
      ModeInputs in;
      in.time = t;
      in.speed = speed(rng);
      in.depth = depth(rng);
      in.depth_setpoint = depth(rng);
      for (auto& p : in.immersion.parts) {
        const double f = unit(rng) < 0.5 ? 0.0 : unit(rng);
        p = {0.03 * f, f};
      }
      in.immersion.lowest_point_height = lowest(rng);
      const int r = request(rng);
      if (r == 0) in.request = MissionRequest::Takeoff;
      if (r == 1) in.request = MissionRequest::Landing;

      const Mode before = mm.mode();
      const auto out = mm.step(in);
      if (out.changed) {
        ASSERT_TRUE(is_legal_transition(before, out.mode))
            << mode_name(before) << " -> " << mode_name(out.mode);
        ASSERT_EQ(mm.entry_time(), t);
      } else {
        ASSERT_EQ(out.mode, before);
      }
      ASSERT_GE(mm.entry_time(), last_entry);
      last_entry = mm.entry_time();
      if (out.mode == Mode::Flight) {
        ASSERT_FALSE(out.enables.underwater_thrusters);
        ASSERT_EQ(out.directives.underwater, 0.0);
      }
      ASSERT_EQ(out.fold, out.mode == Mode::UnderwaterNav);
      ASSERT_GE(out.directives.underwater, 0.0);
      ASSERT_LE(out.directives.underwater, 1.0);
      ASSERT_GE(out.directives.aerial, 0.0);
      ASSERT_LE(out.directives.aerial, 1.0);
    }
  }
}
