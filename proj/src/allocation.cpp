#include "foilsim/allocation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace foilsim {

bool Wrench5::all_finite() const {
  return std::isfinite(f_xd) && std::isfinite(f_zd) && std::isfinite(tau_xd) && std::isfinite(tau_yd) &&
         std::isfinite(tau_zd);
}

bool VirtualForces::all_finite() const {
  return std::isfinite(f_xbr) && std::isfinite(f_zbr) && std::isfinite(f_xbl) && std::isfinite(f_zbl) &&
         std::isfinite(m_e);
}

Wrench5 compose_wrench(const VirtualForces& v, double d_f, double h_s) {
  return {
      v.f_xbr + v.f_xbl,
      v.f_zbr + v.f_zbl,
      d_f * (v.f_zbr - v.f_zbl),
      h_s * (v.f_xbr + v.f_xbl) + v.m_e,
      d_f * (v.f_xbl - v.f_xbr),
  };
}

VirtualForces allocate_wrench(const Wrench5& w, double d_f, double h_s) {
  if (!(d_f > 0.0)) throw SingularAllocation("allocation matrix singular: d_f must be > 0");
  const double yaw_split = w.tau_zd / d_f;
  const double roll_split = w.tau_xd / d_f;
  return {
      0.5 * (w.f_xd - yaw_split),
      0.5 * (w.f_zd + roll_split),
      0.5 * (w.f_xd + yaw_split),
      0.5 * (w.f_zd - roll_split),
      w.tau_yd - h_s * w.f_xd,
  };
}

FoilForce aileron_forward(double thrust, double delta, const FoilFlow& flow, const FluidEnvironment& env,
                          const VehicleParams& params) {
  auto hydro = aileron_hydro_forces(effective_incidence(flow.alpha, delta), flow.speed, env, params);
  hydro.lift *= flow.hydro_scale;
  hydro.drag *= flow.hydro_scale;
  const double ca = std::cos(flow.alpha);
  const double sa = std::sin(flow.alpha);
  return {
      thrust * std::cos(delta) + hydro.lift * sa - hydro.drag * ca,
      thrust * std::sin(delta) - hydro.lift * ca - hydro.drag * sa,
  };
}

ActuatorSolution solve_actuator(FoilForce target, const FoilFlow& flow, const std::optional<ActuatorSolution>& guess,
                                const ActuatorLimits& limits, const SolverOptions& options,
                                const FluidEnvironment& env, const VehicleParams& params) {
  const bool finite_input = std::isfinite(target.x) && std::isfinite(target.z) && std::isfinite(flow.alpha) &&
                            std::isfinite(flow.speed) && std::isfinite(flow.hydro_scale) &&
                            std::isfinite(limits.thrust_max) && std::isfinite(limits.deflection_limit) &&
                            (!guess || (std::isfinite(guess->thrust) && std::isfinite(guess->delta)));
  if (!finite_input) throw std::invalid_argument("solve_actuator: non-finite input");
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("solve_actuator: tolerance must be > 0");

  using Vec2 = Eigen::Vector2d;
  const double f_max = std::max(0.0, limits.thrust_max);
  const double d_lim = limits.deflection_limit;
  auto project = [&](Vec2 x) {
    x[0] = std::clamp(x[0], 0.0, f_max);
    x[1] = std::clamp(x[1], -d_lim, d_lim);
    return x;
  };
  auto residual = [&](const Vec2& x) {
    const auto f = aileron_forward(x[0], x[1], flow, env, params);
    return Vec2(f.x - target.x, f.z - target.z);
  };

  Vec2 x;
  if (guess) {
    x = Vec2(guess->thrust, guess->delta);
  } else {
    const double magnitude = std::hypot(target.x, target.z);
    x = Vec2(magnitude, magnitude > 0.0 ? std::atan2(target.z, target.x) : 0.0);
  }
  x = project(x);
  Vec2 r = residual(x);
  double norm = r.norm();

  int iterations = 0;
  const double h = options.fd_step;
  while (norm > options.tolerance && iterations < options.max_iterations) {
    ++iterations;
    Eigen::Matrix2d jac;
    for (int k = 0; k < 2; ++k) {
      Vec2 step = Vec2::Zero();
      step[k] = h;
      jac.col(k) = (residual(x + step) - residual(x - step)) / (2.0 * h);
    }

    Vec2 dx;
    const double scale = std::max(1.0, jac.squaredNorm());
    if (std::abs(jac.determinant()) > 1e-12 * scale) {
      dx = jac.partialPivLu().solve(-r);
    } else {
      // Rank-deficient (e.g. zero thrust with no flow): damped least squares.
      const Eigen::Matrix2d normal = jac.transpose() * jac + 1e-9 * scale * Eigen::Matrix2d::Identity();
      dx = normal.ldlt().solve(-jac.transpose() * r);
    }
    if (!dx.allFinite() || dx.isZero(0.0)) break;

    bool improved = false;
    double step_length = 1.0;
    for (int halving = 0; halving < 30; ++halving, step_length *= 0.5) {
      const Vec2 candidate = project(x + step_length * dx);
      const Vec2 r_candidate = residual(candidate);
      if (r_candidate.norm() < norm) {
        x = candidate;
        r = r_candidate;
        norm = r.norm();
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }

  ActuatorSolution out;
  out.thrust = x[0];
  out.delta = x[1];
  out.residual = norm;
  out.iterations = iterations;
  out.converged = norm <= options.tolerance;
  out.saturated = x[0] >= f_max || std::abs(x[1]) >= d_lim;
  return out;
}

namespace {

SurfaceDeflection clamp_deflection(double raw, const VehicleParams& params) {
  const double lim = params.deflection_limit;
  if (std::abs(raw) > lim) return {std::copysign(lim, raw), true};
  return {raw, false};
}

}  // namespace

SurfaceDeflection elevator_from_moment(double m_e, double speed, double density, const VehicleParams& params) {
  const double qbar = 0.5 * density * speed * speed;
  if (qbar < params.min_dynamic_pressure) return {0.0, m_e != 0.0};
  return clamp_deflection(m_e / (qbar * params.tail_area * params.tail_arm * params.elevator_effectiveness), params);
}

SurfaceDeflection aileron_from_roll_moment(double tau_x, double airspeed, const FluidEnvironment& env,
                                           const CoefficientTable& table, const VehicleParams& params) {
  const double qbar = 0.5 * env.air_density * airspeed * airspeed;
  if (qbar < params.min_dynamic_pressure) return {0.0, tau_x != 0.0};
  return clamp_deflection(tau_x / (qbar * table.reference_area * params.wing_span * params.aero.cl_delta_a), params);
}

}  // namespace foilsim
