#pragma once

// Environment-dependent forces: airframe aerodynamics, foil hydrodynamics,
// buoyancy, near-surface thrust loss and per-component wetting. All functions
// are pure.

#include <array>
#include <cstddef>
#include <string_view>

#include "foilsim/types.hpp"
#include "foilsim/vehicle_model.hpp"

namespace foilsim {

struct FluidEnvironment {
  double water_density = 1000.0;  // kg/m^3
  double air_density = 1.225;     // kg/m^3
  double gravity = 9.81;          // m/s^2
  double surface_height = 0.0;    // m, world z of the calm surface
};

/// Throws ConfigError naming the violated invariant.
void validate(const FluidEnvironment& env);

enum class Component : std::size_t { Fuselage, AileronLeft, AileronRight, PropLeft, PropRight, Tail };
inline constexpr std::size_t kComponentCount = 6;
std::string_view component_name(Component c);

struct Wetting {
  double depth = 0.0;     // m below the surface of the component's lowest point
  double fraction = 0.0;  // of the component's vertical extent
};

struct ImmersionState {
  std::array<Wetting, kComponentCount> parts{};
  /// Height of the lowest tracked vehicle point above the surface (negative
  /// when that point is submerged).
  double lowest_point_height = 0.0;

  const Wetting& operator[](Component c) const { return parts[static_cast<std::size_t>(c)]; }
  Wetting& operator[](Component c) { return parts[static_cast<std::size_t>(c)]; }
  bool props_airborne() const {
    return (*this)[Component::PropLeft].fraction == 0.0 && (*this)[Component::PropRight].fraction == 0.0;
  }
};

/// Lowest point and vertical extent of each tracked component.
struct ComponentGeometry {
  Eigen::Vector3d lowest_point;  // body frame, relative to the body origin
  double height;
};
ComponentGeometry component_geometry(Component c, const VehicleParams& params);

ImmersionState compute_immersion(const RigidBodyState& state, const VehicleParams& params,
                                 const FluidEnvironment& env);

/// Control-surface positions seen by the airframe model.
struct AeroSurfaces {
  double elevator = 0.0;
  double aileron_l = 0.0;
  double aileron_r = 0.0;
  double flaps = 0.0;
  double fold_progress = 0.0;  // 0 unfolded, 1 fully folded

  static AeroSurfaces from(const ActuatorCommand& cmd) {
    return {cmd.elevator, cmd.aileron_l, cmd.aileron_r, cmd.flaps, cmd.wings_folded ? 1.0 : 0.0};
  }
};

/// Airframe wrench in air from the coefficient table plus control and damping
/// increments. Lift acts normal to the air-relative velocity in the
/// longitudinal plane, drag along it. Zero at zero airspeed.
BodyWrench aero_wrench(const RigidBodyState& state, const AeroSurfaces& surfaces, const FluidEnvironment& env,
                       const CoefficientTable& table, const VehicleParams& params);

inline BodyWrench aero_wrench(const RigidBodyState& state, const ActuatorCommand& cmd, const FluidEnvironment& env,
                              const CoefficientTable& table, const VehicleParams& params) {
  return aero_wrench(state, AeroSurfaces::from(cmd), env, table, params);
}

struct FoilForces {
  double lift = 0.0;  // N, positive for positive effective incidence
  double drag = 0.0;  // N, always >= 0
};

/// Symmetric-section foil: lift linear in incidence up to the stall clamp,
/// parabolic drag polar. Odd/even in alpha_eff respectively.
FoilForces aileron_hydro_forces(double alpha_eff, double speed, const FluidEnvironment& env,
                                const VehicleParams& params);

/// Linear depth ramp: full thrust once the propeller is derate_depth deep,
/// none when it is out of the water.
double thrust_derating(double nominal_thrust, double prop_depth, const VehicleParams& params);

/// Static buoyancy of the fuselage, upward in the world frame, acting at the
/// center of buoyancy.
BodyWrench buoyancy_wrench(const ImmersionState& immersion, const Eigen::Quaterniond& attitude,
                           const VehicleParams& params, const FluidEnvironment& env);

/// Density the elevator works in: air on the dry part of the airframe plus
/// water on the wetted part of the tail.
double elevator_density(const ImmersionState& immersion, const FluidEnvironment& env);

/// Elevator pitch moment for a given deflection at `speed` in fluid `density`.
double elevator_moment(double deflection, double speed, double density, const VehicleParams& params);

/// Wetted fuselage and tail damping. Every term opposes the local velocity.
BodyWrench hull_drag_wrench(const RigidBodyState& state, const ImmersionState& immersion,
                            const VehicleParams& params);

}  // namespace foilsim
