#pragma once

// Wrench allocation for the differential thrust-vectoring hydrofoil.
//
// The desired wrench (f_x, f_z, tau_x, tau_y, tau_z) maps one-to-one onto the
// body-frame force of each foil plus the elevator moment. Each foil force is
// then inverted for thruster thrust and foil deflection with a projected
// Newton iteration on the foil force model.

#include <optional>

#include "foilsim/hydro_aero.hpp"

namespace foilsim {

struct Wrench5 {
  double f_xd = 0.0;
  double f_zd = 0.0;
  double tau_xd = 0.0;
  double tau_yd = 0.0;
  double tau_zd = 0.0;

  bool all_finite() const;
};

struct VirtualForces {
  double f_xbr = 0.0;
  double f_zbr = 0.0;
  double f_xbl = 0.0;
  double f_zbl = 0.0;
  double m_e = 0.0;

  bool all_finite() const;
};

class SingularAllocation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Forward map. d_f is the lateral foil offset, h_s the foil depth below the
/// body origin.
Wrench5 compose_wrench(const VirtualForces& v, double d_f, double h_s);

/// Closed-form inverse of compose_wrench. Throws SingularAllocation when d_f <= 0.
VirtualForces allocate_wrench(const Wrench5& w, double d_f, double h_s);

/// Body-frame (x, z) force of one foil.
struct FoilForce {
  double x = 0.0;
  double z = 0.0;
};

/// Flow seen by a foil.
struct FoilFlow {
  double alpha = 0.0;        // rad, flow angle in the body x-z plane
  double speed = 0.0;        // m/s
  double hydro_scale = 1.0;  // wetted fraction multiplying lift and drag
};

/// Effective incidence of a foil deflected by `delta` in flow angle `alpha`.
/// Positive delta tilts the leading edge (and the thrust line) toward +z.
inline double effective_incidence(double alpha, double delta) { return alpha - delta; }

/// F_x = F_T cos(delta) + F_L sin(alpha) - F_D cos(alpha)
/// F_z = F_T sin(delta) - F_L cos(alpha) - F_D sin(alpha)
FoilForce aileron_forward(double thrust, double delta, const FoilFlow& flow, const FluidEnvironment& env,
                          const VehicleParams& params);

struct ActuatorLimits {
  double thrust_max = 10.0;
  double deflection_limit = deg2rad(30.0);
};

struct SolverOptions {
  double tolerance = 1e-6;  // N
  int max_iterations = 50;
  double fd_step = 1e-6;
};

struct ActuatorSolution {
  double thrust = 0.0;
  double delta = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool saturated = false;
};

/// Newton iteration on (thrust, delta) with a central-difference Jacobian,
/// projection onto the actuator box and step halving. Warm-starts from
/// `guess` when given, else from the zero-speed closed form.
/// Throws std::invalid_argument on non-finite input.
ActuatorSolution solve_actuator(FoilForce target, const FoilFlow& flow, const std::optional<ActuatorSolution>& guess,
                                const ActuatorLimits& limits, const SolverOptions& options,
                                const FluidEnvironment& env, const VehicleParams& params);

struct SurfaceDeflection {
  double deflection = 0.0;
  bool saturated = false;
};

/// Elevator deflection producing pitch moment m_e at `speed` in a fluid of
/// `density`. Zero with the saturation flag set when the dynamic pressure is
/// below the authority floor.
SurfaceDeflection elevator_from_moment(double m_e, double speed, double density, const VehicleParams& params);

inline SurfaceDeflection elevator_from_moment(double m_e, double airspeed, const FluidEnvironment& env,
                                              const VehicleParams& params) {
  return elevator_from_moment(m_e, airspeed, env.air_density, params);
}

/// Differential aileron deflection (per side) producing roll moment tau_x in air.
SurfaceDeflection aileron_from_roll_moment(double tau_x, double airspeed, const FluidEnvironment& env,
                                           const CoefficientTable& table, const VehicleParams& params);

}  // namespace foilsim
