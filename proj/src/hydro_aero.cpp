#include "foilsim/hydro_aero.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace foilsim {

void validate(const FluidEnvironment& env) {
  if (!(env.water_density > 0.0)) throw ConfigError("environment.water_density must be > 0");
  if (!(env.air_density > 0.0)) throw ConfigError("environment.air_density must be > 0");
  if (!(env.water_density > env.air_density)) {
    throw ConfigError("environment.water_density must exceed environment.air_density");
  }
  if (!(env.gravity >= 0.0) || !std::isfinite(env.gravity)) throw ConfigError("environment.gravity must be >= 0");
  if (!std::isfinite(env.surface_height)) throw ConfigError("environment.surface_height must be finite");
}

std::string_view component_name(Component c) {
  switch (c) {
    case Component::Fuselage: return "fuselage";
    case Component::AileronLeft: return "aileron_l";
    case Component::AileronRight: return "aileron_r";
    case Component::PropLeft: return "prop_l";
    case Component::PropRight: return "prop_r";
    case Component::Tail: return "tail";
  }
  return "?";
}

ComponentGeometry component_geometry(Component c, const VehicleParams& p) {
  switch (c) {
    case Component::Fuselage: return {p.fuselage_bottom, p.fuselage_height};
    case Component::AileronLeft: return {p.foil_bottom(-1), p.foil.thickness};
    case Component::AileronRight: return {p.foil_bottom(+1), p.foil.thickness};
    case Component::PropLeft: return {p.prop_point(-1), p.prop_diameter};
    case Component::PropRight: return {p.prop_point(+1), p.prop_diameter};
    case Component::Tail: return {p.tail_point(), p.tail_height};
  }
  return {Eigen::Vector3d::Zero(), 1.0};
}

ImmersionState compute_immersion(const RigidBodyState& state, const VehicleParams& params,
                                 const FluidEnvironment& env) {
  ImmersionState out;
  const Eigen::Matrix3d rot = state.attitude.toRotationMatrix();
  double deepest = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kComponentCount; ++i) {
    const auto geom = component_geometry(static_cast<Component>(i), params);
    const double z = state.position.z() + rot.row(2).dot(geom.lowest_point - params.center_of_mass);
    deepest = std::max(deepest, z);
    const double depth = std::max(0.0, z - env.surface_height);
    out.parts[i] = {depth, std::clamp(depth / geom.height, 0.0, 1.0)};
  }
  out.lowest_point_height = env.surface_height - deepest;
  return out;
}

BodyWrench aero_wrench(const RigidBodyState& state, const AeroSurfaces& s, const FluidEnvironment& env,
                       const CoefficientTable& table, const VehicleParams& p) {
  const Eigen::Vector3d& v = state.velocity;
  const double speed = v.norm();
  BodyWrench w;
  if (!(speed > 1e-9)) return w;

  const double alpha = std::atan2(v.z(), v.x());
  const double beta = std::asin(std::clamp(v.y() / speed, -1.0, 1.0));
  const double qbar = 0.5 * env.air_density * speed * speed;
  const double area = table.reference_area;
  const double chord = table.reference_chord;
  const double span = p.wing_span;

  const double wing_scale = 1.0 - (1.0 - p.folded_area_fraction) * std::clamp(s.fold_progress, 0.0, 1.0);
  const auto c = interpolate_coefficients(table, alpha);
  const double cl = wing_scale * (c.cl + p.aero.flap_cl * s.flaps);
  const double cd = wing_scale * (c.cd + p.aero.flap_cd * std::abs(s.flaps));
  const double cm = wing_scale * (c.cm + p.aero.flap_cm * s.flaps);

  const double lift = qbar * area * cl;
  const double drag = qbar * area * cd;
  const Eigen::Vector3d lift_dir(std::sin(alpha), 0.0, -std::cos(alpha));
  w.force = lift * lift_dir - drag * (v / speed);
  w.force.y() += qbar * area * p.aero.cy_beta * beta;

  const Eigen::Vector3d& rate = state.angular_rate;
  const double roll_cmd = 0.5 * (s.aileron_r - s.aileron_l);
  w.moment.x() = qbar * area * span * (p.aero.cl_delta_a * roll_cmd + p.aero.cl_p * rate.x() * span / (2.0 * speed));
  w.moment.y() = qbar * area * chord * (cm + p.aero.cm_q * rate.y() * chord / (2.0 * speed)) +
                 elevator_moment(s.elevator, speed, env.air_density, p);
  w.moment.z() = qbar * area * span * (p.aero.cn_beta * beta + p.aero.cn_r * rate.z() * span / (2.0 * speed));
  return w;
}

FoilForces aileron_hydro_forces(double alpha_eff, double speed, const FluidEnvironment& env,
                                const VehicleParams& params) {
  const double qs = 0.5 * env.water_density * speed * speed * params.foil.area;
  const double incidence = std::clamp(alpha_eff, -params.foil.stall_angle, params.foil.stall_angle);
  const double cl = params.foil.lift_slope() * incidence;
  return {qs * cl, qs * (params.foil.cd0 + params.foil.induced_drag_factor() * cl * cl)};
}

double thrust_derating(double nominal_thrust, double prop_depth, const VehicleParams& params) {
  return nominal_thrust * std::clamp(prop_depth / params.derate_depth, 0.0, 1.0);
}

BodyWrench buoyancy_wrench(const ImmersionState& immersion, const Eigen::Quaterniond& attitude,
                           const VehicleParams& params, const FluidEnvironment& env) {
  const double fraction = immersion[Component::Fuselage].fraction;
  if (fraction == 0.0) return {};
  const double lift = env.water_density * env.gravity * params.buoyancy_volume * fraction;
  const Eigen::Vector3d force_body = attitude.conjugate() * Eigen::Vector3d(0.0, 0.0, -lift);
  return BodyWrench::at(params.center_of_buoyancy - params.center_of_mass, force_body);
}

double elevator_density(const ImmersionState& immersion, const FluidEnvironment& env) {
  return env.air_density * (1.0 - immersion[Component::Fuselage].fraction) +
         env.water_density * immersion[Component::Tail].fraction;
}

double elevator_moment(double deflection, double speed, double density, const VehicleParams& p) {
  return 0.5 * density * speed * speed * p.tail_area * p.tail_arm * p.elevator_effectiveness * deflection;
}

BodyWrench hull_drag_wrench(const RigidBodyState& state, const ImmersionState& immersion,
                            const VehicleParams& p) {
  BodyWrench w;
  const Eigen::Vector3d& v = state.velocity;
  const Eigen::Vector3d& rate = state.angular_rate;

  const double hull = immersion[Component::Fuselage].fraction;
  if (hull > 0.0) {
    w.force = -hull * (p.drag.quadratic.cwiseProduct(v.cwiseAbs()).cwiseProduct(v) + p.drag.linear.cwiseProduct(v));
    w.moment = -hull * (p.drag.angular_quadratic.cwiseProduct(rate.cwiseAbs()).cwiseProduct(rate) +
                        p.drag.angular_linear.cwiseProduct(rate));
  }

  const double tail = immersion[Component::Tail].fraction;
  if (tail > 0.0) {
    const Eigen::Vector3d arm = p.tail_point() - p.center_of_mass;
    const Eigen::Vector3d local = v + rate.cross(arm);
    w += BodyWrench::at(arm, -tail * p.drag.tail_quadratic.cwiseProduct(local.cwiseAbs()).cwiseProduct(local));
  }
  return w;
}

}  // namespace foilsim
