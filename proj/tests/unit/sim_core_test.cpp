#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "foilsim/sim_core.hpp"

using namespace foilsim;

namespace {

PhysicsModel only(bool gravity, bool buoyancy, bool foils) {
  PhysicsModel m;
  m.toggles = {gravity, buoyancy, false, foils, false, false};
  return m;
}

PhysicsModel nothing() { return only(false, false, false); }

PhysicsModel neutral_submerged_model() {
  PhysicsModel m;
  m.params.buoyancy_volume = m.params.mass / m.env.water_density;
  return m;
}

RigidBodyState deep(double z = 5.0) {
  RigidBodyState s;
  s.position.z() = z;
  return s;
}

double mechanical_energy(const RigidBodyState& s, const PhysicsModel& m) {
  const auto& p = m.params;
  const double kinetic = 0.5 * p.mass * s.velocity.squaredNorm() + 0.5 * s.angular_rate.dot(p.inertia * s.angular_rate);
  // Weight at the CoM and equal buoyancy at the centre of buoyancy.
  const double potential = p.mass * m.env.gravity * (s.attitude * (p.center_of_buoyancy - p.center_of_mass)).z();
  return kinetic + potential;
}

}  // namespace

TEST(TotalWrench, FreeFallIsWeightOnly) {
  const auto m = only(true, false, false);
  const auto w = total_wrench(deep(-10.0), ActuatorState{}, m);
  EXPECT_NEAR(w.force.x(), 0.0, 1e-15);
  EXPECT_NEAR(w.force.y(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(w.force.z(), m.params.mass * m.env.gravity);
  EXPECT_EQ(w.moment, Eigen::Vector3d::Zero());
}

TEST(TotalWrench, GravityRotatesIntoBody) {
  const auto m = only(true, false, false);
  auto s = deep(-10.0);
  s.attitude = from_euler(0.0, 0.3, 0.0);
  const auto w = total_wrench(s, ActuatorState{}, m);
  const double mg = m.params.mass * m.env.gravity;
  // Nose up: weight has a -x body component.
  EXPECT_NEAR(w.force.x(), -mg * std::sin(0.3), 1e-12);
  EXPECT_NEAR(w.force.z(), mg * std::cos(0.3), 1e-12);
}

TEST(TotalWrench, NeutralBuoyancyAtRestIsEquilibrium) {
  const auto m = neutral_submerged_model();
  const auto w = total_wrench(deep(), ActuatorState{}, m);
  EXPECT_LT(w.force.norm(), 1e-12);
  EXPECT_LT(w.moment.norm(), 1e-12);
}

TEST(TotalWrench, DifferentialThrustYaws) {
  const auto m = only(false, false, true);
  const double thrust = 4.0;
  ActuatorState a;
  a.position.thrust_left = thrust;
  const auto w = total_wrench(deep(), a, m);
  EXPECT_NEAR(w.force.x(), thrust, 1e-12);
  EXPECT_NEAR(w.moment.z(), m.params.d_f * thrust, 1e-12);
  EXPECT_NEAR(w.moment.y(), m.params.h_s * thrust, 1e-12);
  EXPECT_NEAR(w.moment.x(), 0.0, 1e-12);

  a.position.thrust_left = 0.0;
  a.position.thrust_right = thrust;
  EXPECT_NEAR(total_wrench(deep(), a, m).moment.z(), -m.params.d_f * thrust, 1e-12);
}

TEST(TotalWrench, DeratedNearSurface) {
  const auto m = only(false, false, true);
  ActuatorState a;
  a.position.thrust_left = 4.0;
  // Prop bottom at h_s + prop_offset_z below the origin; put it half the derate depth under.
  const double prop_z = m.params.h_s + m.params.prop_offset_z;
  const auto w = total_wrench(deep(0.5 * m.params.derate_depth - prop_z), a, m);
  EXPECT_NEAR(w.force.x(), 2.0, 1e-12);
}

TEST(TotalWrench, AerialThrustAlongBodyX) {
  PhysicsModel m = nothing();
  m.toggles.aerial_thrust = true;
  ActuatorState a;
  a.position.aerial_throttle = 0.25;
  const auto w = total_wrench(deep(-10.0), a, m);
  EXPECT_DOUBLE_EQ(w.force.x(), 0.25 * m.params.thrust_max_aerial);
  EXPECT_EQ(w.moment, Eigen::Vector3d::Zero());
}

TEST(TotalWrench, ContinuousThroughSurface) {
  PhysicsModel m;
  ActuatorState a;
  a.position.thrust_left = a.position.thrust_right = 3.0;
  a.position.delta_left = a.position.delta_right = 0.1;
  a.position.elevator = 0.1;
  auto max_jump = [&](double step) {
    double worst = 0.0;
    RigidBodyState s;
    s.attitude = from_euler(0.02, 0.1, 0.0);
    s.velocity = Eigen::Vector3d(2.0, 0.1, 0.2);
    s.angular_rate = Eigen::Vector3d(0.1, -0.1, 0.05);
    s.position.z() = -0.35;
    auto prev = total_wrench(s, a, m);
    while (s.position.z() < 0.3) {
      s.position.z() += step;
      const auto w = total_wrench(s, a, m);
      worst = std::max({worst, (w.force - prev.force).norm(), (w.moment - prev.moment).norm()});
      prev = w;
    }
    return worst;
  };
  const double coarse = max_jump(1e-4);
  const double fine = max_jump(1e-5);
  EXPECT_LT(coarse, 0.2);
  EXPECT_LT(fine, 0.2 * coarse);
}

TEST(StepDynamics, RejectsBadStep) {
  EXPECT_THROW(step_dynamics(deep(), {}, 0.0, nothing()), std::invalid_argument);
  EXPECT_THROW(step_dynamics(deep(), {}, 0.02, nothing()), std::invalid_argument);
  EXPECT_NO_THROW(step_dynamics(deep(), {}, 0.01, nothing()));
}

TEST(StepDynamics, HaltsOnNonFiniteForce) {
  auto m = nothing();
  m.disturbance = Eigen::Vector3d(0.0, 0.0, std::nan(""));
  try {
    step_dynamics(deep(), {}, 0.001, m, 2.5);
    FAIL() << "expected a halt";
  } catch (const SimulationHalted& e) {
    EXPECT_EQ(e.time, 2.5);
    EXPECT_NE(std::string(e.what()).find("position"), std::string::npos);
  }
}

TEST(StepDynamics, BallisticTranslation) {
  const auto m = nothing();
  auto s = deep();
  s.velocity = Eigen::Vector3d(1.5, -0.5, 0.25);
  const Eigen::Vector3d start = s.position;
  for (int i = 0; i < 1000; ++i) s = step_dynamics(s, {}, 0.001, m);
  EXPECT_LT((s.position - (start + Eigen::Vector3d(1.5, -0.5, 0.25))).norm(), 1e-12);
}

TEST(StepDynamics, ConstantForceClosedForm) {
  auto m = nothing();
  const Eigen::Vector3d force(3.0, -1.0, 2.0);
  m.disturbance = force;
  auto s = deep();
  const double dt = 0.001;
  for (int i = 0; i < 10000; ++i) s = step_dynamics(s, {}, dt, m);
  const double t = 10000 * dt;
  const Eigen::Vector3d v = force * t / m.params.mass;
  const Eigen::Vector3d x = deep().position + 0.5 * force * t * t / m.params.mass;
  EXPECT_LT((s.velocity - v).norm(), 1e-6 * v.norm());
  EXPECT_LT((s.position - x).norm(), 1e-6 * (x - deep().position).norm());
}

TEST(StepDynamics, FourthOrderConvergence) {
  // Torque-free tumbling of an asymmetric body carrying a body-frame velocity.
  const auto m = nothing();
  RigidBodyState init = deep();
  init.velocity = Eigen::Vector3d(1.0, 0.3, -0.2);
  init.angular_rate = Eigen::Vector3d(0.8, 0.3, 1.5);
  auto endpoint = [&](double dt) {
    auto s = init;
    const int n = static_cast<int>(std::lround(2.0 / dt));
    for (int i = 0; i < n; ++i) s = step_dynamics(s, {}, dt, m);
    return s.position;
  };
  const auto reference = endpoint(0.000625);
  const double e1 = (endpoint(0.01) - reference).norm();
  const double e2 = (endpoint(0.005) - reference).norm();
  const double ratio = e1 / e2;
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(StepDynamics, AttitudeStaysNormalized) {
  const auto m = nothing();
  auto s = deep();
  s.angular_rate = Eigen::Vector3d(3.0, -2.0, 5.0);
  for (int i = 0; i < 5000; ++i) {
    s = step_dynamics(s, {}, 0.002, m);
    ASSERT_LT(std::abs(s.attitude.norm() - 1.0), 1e-9);
  }
}

TEST(StepDynamics, EnergyDissipatedWhenSubmerged) {
  const auto m = neutral_submerged_model();
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    auto s = deep();
    s.velocity = 2.0 * Eigen::Vector3d(u(rng), u(rng), u(rng));
    s.angular_rate = 2.0 * Eigen::Vector3d(u(rng), u(rng), u(rng));
    s.attitude = from_euler(0.3 * u(rng), 0.3 * u(rng), u(rng));
    double e = mechanical_energy(s, m);
    for (int i = 0; i < 3000; ++i) {
      s = step_dynamics(s, {}, 0.001, m);
      const double next = mechanical_energy(s, m);
      ASSERT_LE(next, e + 1e-9) << "step " << i;
      e = next;
    }
  }
}

TEST(Actuators, ClampCommand) {
  const VehicleParams p;
  ActuatorCommand c;
  c.thrust_left = -1.0;
  c.thrust_right = 99.0;
  c.delta_left = 2.0;
  c.elevator = -2.0;
  c.aerial_throttle = 1.5;
  const auto out = clamp_command(c, p);
  EXPECT_EQ(out.thrust_left, 0.0);
  EXPECT_EQ(out.thrust_right, p.thrust_max_underwater);
  EXPECT_EQ(out.delta_left, p.deflection_limit);
  EXPECT_EQ(out.elevator, -p.deflection_limit);
  EXPECT_EQ(out.aerial_throttle, 1.0);
}

TEST(Actuators, FirstOrderLag) {
  const VehicleParams p;
  ActuatorCommand c;
  c.thrust_left = 5.0;
  c.elevator = 0.2;
  ActuatorState a;
  for (int i = 0; i < 100; ++i) a = advance_actuators(a, c, 0.001, p);
  EXPECT_NEAR(a.position.thrust_left, 5.0 * (1.0 - std::exp(-0.1 / p.thruster_time_constant)), 1e-12);
  EXPECT_NEAR(a.position.elevator, 0.2 * (1.0 - std::exp(-0.1 / p.servo_time_constant)), 1e-12);
}

TEST(Actuators, FoldTakesFoldDuration) {
  const VehicleParams p;
  ActuatorCommand c;
  c.wings_folded = true;
  ActuatorState a;
  const int steps = static_cast<int>(std::lround(p.fold_duration / 0.001));
  for (int i = 0; i < steps - 1; ++i) a = advance_actuators(a, c, 0.001, p);
  EXPECT_LT(a.fold_progress, 1.0);
  a = advance_actuators(a, c, 0.001, p);
  a = advance_actuators(a, c, 0.001, p);
  EXPECT_EQ(a.fold_progress, 1.0);
  c.wings_folded = false;
  a = advance_actuators(a, c, 0.5 * p.fold_duration, p);
  EXPECT_NEAR(a.fold_progress, 0.5, 1e-12);
}

TEST(Simulator, TimeAndLaggedActuators) {
  Simulator sim(nothing(), deep(), 0.001);
  ActuatorCommand c;
  c.thrust_left = 50.0;
  sim.command(c);
  EXPECT_EQ(sim.commanded().thrust_left, sim.model().params.thrust_max_underwater);
  for (int i = 0; i < 250; ++i) sim.step();
  EXPECT_DOUBLE_EQ(sim.time(), 0.25);
  EXPECT_GT(sim.actuators().position.thrust_left, 0.0);
  EXPECT_LT(sim.actuators().position.thrust_left, sim.model().params.thrust_max_underwater);
}

TEST(Sense, NoiselessEqualsTruth) {
  const VehicleParams p;
  const FluidEnvironment env;
  SensorNoise none{0, 0, 0, 0, 0, 0};
  std::mt19937_64 rng(1);
  RigidBodyState s;
  s.position = Eigen::Vector3d(1.0, 2.0, 0.15);
  s.velocity = Eigen::Vector3d(0.5, 0.0, 0.1);
  s.angular_rate = Eigen::Vector3d(0.01, 0.02, 0.03);
  s.attitude = from_euler(0.05, -0.1, 0.7);
  const auto r = sense(s, 3.0, p, env, none, rng);
  EXPECT_EQ(r.timestamp, 3.0);
  ASSERT_TRUE(r.depth.has_value());
  EXPECT_NEAR(*r.depth, 0.15, 1e-15);
  EXPECT_LT((r.attitude - Eigen::Vector3d(0.05, -0.1, 0.7)).norm(), 1e-12);
  EXPECT_EQ(r.angular_rate, s.angular_rate);
  EXPECT_EQ(r.velocity, s.velocity);
  EXPECT_EQ(r.speed, s.velocity.norm());
}

TEST(Sense, DepthHoldSetpointReading) {
  std::mt19937_64 rng(2);
  const auto r = sense(deep(0.15), 0.0, VehicleParams{}, FluidEnvironment{}, SensorNoise{}, rng);
  ASSERT_TRUE(r.depth.has_value());
  EXPECT_NEAR(*r.depth, 0.15, 0.01);
  EXPECT_FALSE(r.position.has_value());
  EXPECT_FALSE(r.airspeed.has_value());
}

TEST(Sense, AirborneHasFixButNoDepth) {
  std::mt19937_64 rng(3);
  auto s = deep(-5.0);
  s.velocity.x() = 12.0;
  const auto r = sense(s, 0.0, VehicleParams{}, FluidEnvironment{}, SensorNoise{}, rng);
  EXPECT_FALSE(r.depth.has_value());
  ASSERT_TRUE(r.position.has_value());
  EXPECT_NEAR(r.position->z(), -5.05, 0.1);
  ASSERT_TRUE(r.airspeed.has_value());
  EXPECT_NEAR(*r.airspeed, 12.0, 1.0);
}

TEST(Sense, SeededStreamsRepeat) {
  auto run = [](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out;
    for (int i = 0; i < 100; ++i) {
      // Alternate media so availability changes do not shift the stream.
      const auto r = sense(deep(i % 2 ? 0.3 : -0.3), 0.0, VehicleParams{}, FluidEnvironment{}, SensorNoise{}, rng);
      out.push_back(r.attitude.x());
      out.push_back(r.speed);
    }
    return out;
  };
  EXPECT_EQ(run(7), run(7));
  EXPECT_NE(run(7), run(8));
}

TEST(Sense, StreamIndependentOfMedium) {
  std::mt19937_64 a(9), b(9);
  sense(deep(0.5), 0.0, VehicleParams{}, FluidEnvironment{}, SensorNoise{}, a);
  sense(deep(-0.5), 0.0, VehicleParams{}, FluidEnvironment{}, SensorNoise{}, b);
  EXPECT_EQ(a(), b());
}

TEST(SensorNoise, Validation) {
  SensorNoise n;
  EXPECT_NO_THROW(validate(n));
  n.rate = -0.1;
  EXPECT_THROW(validate(n), ConfigError);
}
