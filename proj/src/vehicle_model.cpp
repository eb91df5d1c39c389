#include "foilsim/vehicle_model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "yaml_section.hpp"

namespace foilsim {

Coefficients interpolate_coefficients(const CoefficientTable& table, double alpha) {
  const auto& e = table.entries;
  if (e.empty()) return {};
  if (alpha <= e.front().alpha) {
    return {e.front().cl, e.front().cd, e.front().cm, alpha < e.front().alpha};
  }
  if (alpha >= e.back().alpha) {
    return {e.back().cl, e.back().cd, e.back().cm, alpha > e.back().alpha};
  }
  auto hi = std::upper_bound(e.begin(), e.end(), alpha,
                             [](double a, const CoefficientSample& s) { return a < s.alpha; });
  auto lo = hi - 1;
  if (lo->alpha == alpha) return {lo->cl, lo->cd, lo->cm, false};
  const double t = (alpha - lo->alpha) / (hi->alpha - lo->alpha);
  auto lerp = [t](double a, double b) { return a + t * (b - a); };
  return {lerp(lo->cl, hi->cl), lerp(lo->cd, hi->cd), lerp(lo->cm, hi->cm), false};
}

CoefficientTable default_coefficient_table(double reference_area, double reference_chord) {
  CoefficientTable table;
  table.reference_area = reference_area;
  table.reference_chord = reference_chord;
  table.entries = {
      {deg2rad(-10.0), -0.60, 0.120, 0.15},
      {deg2rad(0.0), 0.00, 0.045, 0.05},
      {deg2rad(5.0), 0.62, 0.095, 0.00},
      {deg2rad(10.0), 1.221, 0.174, -0.05},
      {deg2rad(15.0), 1.02, 0.320, -0.03},
      {deg2rad(20.0), 0.88, 0.450, 0.00},
  };
  return table;
}

void validate(const CoefficientTable& table) {
  const auto& e = table.entries;
  if (e.size() < 2) throw ConfigError("coefficients.table: at least two entries required");
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& s = e[i];
    if (!std::isfinite(s.alpha) || !std::isfinite(s.cl) || !std::isfinite(s.cd) || !std::isfinite(s.cm)) {
      throw ConfigError("coefficients.table[" + std::to_string(i) + "]: non-finite value");
    }
    if (s.cd <= 0.0) {
      throw ConfigError("coefficients.table[" + std::to_string(i) + "]: C_D must be > 0");
    }
    if (i > 0 && !(s.alpha > e[i - 1].alpha)) {
      throw ConfigError("coefficients.table[" + std::to_string(i) + "]: alpha not increasing");
    }
  }
  constexpr double kSlack = 1e-9;
  if (e.front().alpha > deg2rad(-10.0) + kSlack || e.back().alpha < deg2rad(20.0) - kSlack) {
    throw ConfigError("coefficients.table: must cover at least [-10, 20] deg");
  }
  if (!(table.reference_area > 0.0)) throw ConfigError("coefficients.reference_area must be > 0");
  if (!(table.reference_chord > 0.0)) throw ConfigError("coefficients.reference_chord must be > 0");
}

void validate(const VehicleParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("vehicle.") + name + " must be > 0");
  };
  positive(p.mass, "mass");
  const Eigen::Matrix3d& inertia = p.inertia;
  if (!inertia.allFinite() || (inertia - inertia.transpose()).norm() > 1e-12 * (1.0 + inertia.norm())) {
    throw ConfigError("vehicle.inertia must be symmetric");
  }
  if (Eigen::LLT<Eigen::Matrix3d>(inertia).info() != Eigen::Success) {
    throw ConfigError("vehicle.inertia must be positive definite");
  }
  if (!(p.d_f > 0.0)) throw ConfigError("vehicle.d_f must be > 0: allocation matrix singular");
  if (!(p.h_s > 0.0)) throw ConfigError("vehicle.h_s must be > 0");
  positive(p.strut_height, "strut_height");
  positive(p.derate_depth, "derate_depth");
  if (!(p.deflection_limit > 0.0 && p.deflection_limit < kPi / 2)) {
    throw ConfigError("vehicle.deflection_limit_deg must lie in (0, 90)");
  }
  if (!(p.buoyancy_volume >= 0.0)) throw ConfigError("vehicle.buoyancy_volume must be >= 0");
  positive(p.wing_area, "wing_area");
  positive(p.wing_span, "wing_span");
  positive(p.tail_area, "tail_area");
  positive(p.tail_arm, "tail_arm");
  positive(p.tail_height, "tail_height");
  positive(p.elevator_effectiveness, "elevator_effectiveness");
  positive(p.min_dynamic_pressure, "min_dynamic_pressure");
  positive(p.fuselage_height, "fuselage_height");
  positive(p.prop_diameter, "prop_diameter");
  positive(p.thrust_max_underwater, "thrust_max_underwater");
  positive(p.thrust_max_aerial, "thrust_max_aerial");
  positive(p.thruster_time_constant, "thruster_time_constant");
  positive(p.servo_time_constant, "servo_time_constant");
  positive(p.motor_time_constant, "motor_time_constant");
  if (!(p.fold_duration >= 0.0)) throw ConfigError("vehicle.fold_duration must be >= 0");
  if (!(p.folded_area_fraction >= 0.0 && p.folded_area_fraction <= 1.0)) {
    throw ConfigError("vehicle.folded_area_fraction must lie in [0, 1]");
  }
  positive(p.foil.area, "foil.area");
  positive(p.foil.aspect_ratio, "foil.aspect_ratio");
  positive(p.foil.cd0, "foil.cd0");
  positive(p.foil.oswald, "foil.oswald");
  positive(p.foil.stall_angle, "foil.stall_angle_deg");
  positive(p.foil.thickness, "foil.thickness");
  if ((p.drag.quadratic.array() < 0).any() || (p.drag.linear.array() < 0).any() ||
      (p.drag.angular_quadratic.array() < 0).any() || (p.drag.angular_linear.array() < 0).any() ||
      (p.drag.tail_quadratic.array() < 0).any()) {
    throw ConfigError("vehicle.drag coefficients must be >= 0");
  }
}

double geometric_surface_pitch(const VehicleParams& p) {
  // Strut tip at (hydrofoil_x, h_s), tail lowest point at (x_tail, tail_z).
  // Both on the plane z_world = const when tan(pitch) = dz / dx.
  const Eigen::Vector3d tail = p.tail_point();
  return std::atan2(p.strut_height - tail.z(), p.hydrofoil_x - tail.x());
}

namespace {

void read_inertia(detail::Section& s, Eigen::Matrix3d& inertia) {
  const YAML::Node n = s.take("inertia");
  if (!n.IsDefined() || n.IsNull()) return;
  const auto key = s.key_path("inertia");
  if (n.IsSequence() && n.size() == 3 && n[0].IsScalar()) {
    inertia.setZero();
    for (std::size_t i = 0; i < 3; ++i) {
      inertia(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = detail::as_double(n[i], key);
    }
    return;
  }
  if (n.IsSequence() && n.size() == 3) {
    for (std::size_t r = 0; r < 3; ++r) {
      if (!n[r].IsSequence() || n[r].size() != 3) {
        detail::Section::fail_at(n, key, "expected 3 diagonal values or a 3x3 matrix");
      }
      for (std::size_t c = 0; c < 3; ++c) {
        inertia(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = detail::as_double(n[r][c], key);
      }
    }
    return;
  }
  detail::Section::fail_at(n, key, "expected 3 diagonal values or a 3x3 matrix");
}

void read_vehicle(detail::Section& s, VehicleParams& p) {
  s.require("mass");
  s.get("mass", p.mass);
  read_inertia(s, p.inertia);
  s.get_vec3("center_of_mass", p.center_of_mass);
  s.get("d_f", p.d_f);
  s.get("strut_height", p.strut_height);
  // The foil force acts at the strut tip unless stated otherwise.
  p.h_s = p.strut_height;
  s.get("h_s", p.h_s);
  s.get("hydrofoil_x", p.hydrofoil_x);
  s.get_deg("design_pitch_deg", p.design_pitch);
  s.get("buoyancy_volume", p.buoyancy_volume);
  s.get_vec3("center_of_buoyancy", p.center_of_buoyancy);
  s.get("wing_area", p.wing_area);
  s.get("wing_span", p.wing_span);
  s.get("folded_area_fraction", p.folded_area_fraction);
  s.get_deg("flap_bias_deg", p.flap_bias);
  s.get("tail_area", p.tail_area);
  s.get("tail_arm", p.tail_arm);
  s.get("tail_z", p.tail_z);
  s.get("tail_height", p.tail_height);
  s.get("elevator_effectiveness", p.elevator_effectiveness);
  s.get("min_dynamic_pressure", p.min_dynamic_pressure);
  s.get_vec3("fuselage_bottom", p.fuselage_bottom);
  s.get("fuselage_height", p.fuselage_height);
  s.get("prop_offset_x", p.prop_offset_x);
  s.get("prop_offset_z", p.prop_offset_z);
  s.get("prop_diameter", p.prop_diameter);
  s.get("thrust_max_underwater", p.thrust_max_underwater);
  s.get("thrust_max_aerial", p.thrust_max_aerial);
  s.get_deg("deflection_limit_deg", p.deflection_limit);
  s.get("fold_duration", p.fold_duration);
  s.get("derate_depth", p.derate_depth);
  s.get("thruster_time_constant", p.thruster_time_constant);
  s.get("servo_time_constant", p.servo_time_constant);
  s.get("motor_time_constant", p.motor_time_constant);
  s.get_vec3("depth_sensor", p.depth_sensor);
  s.get_vec3("gnss_antenna", p.gnss_antenna);
  s.get_vec3("pitot", p.pitot);

  auto foil = s.child("foil");
  foil.get("area", p.foil.area);
  foil.get("aspect_ratio", p.foil.aspect_ratio);
  foil.get("cd0", p.foil.cd0);
  foil.get("oswald", p.foil.oswald);
  foil.get_deg("stall_angle_deg", p.foil.stall_angle);
  foil.get("thickness", p.foil.thickness);
  foil.finish();

  auto aero = s.child("aero");
  aero.get("cm_q", p.aero.cm_q);
  aero.get("cl_p", p.aero.cl_p);
  aero.get("cn_r", p.aero.cn_r);
  aero.get("cn_beta", p.aero.cn_beta);
  aero.get("cy_beta", p.aero.cy_beta);
  aero.get("cl_delta_a", p.aero.cl_delta_a);
  aero.get("flap_cl", p.aero.flap_cl);
  aero.get("flap_cd", p.aero.flap_cd);
  aero.get("flap_cm", p.aero.flap_cm);
  aero.finish();

  auto drag = s.child("drag");
  drag.get_vec3("quadratic", p.drag.quadratic);
  drag.get_vec3("linear", p.drag.linear);
  drag.get_vec3("angular_quadratic", p.drag.angular_quadratic);
  drag.get_vec3("angular_linear", p.drag.angular_linear);
  drag.get_vec3("tail_quadratic", p.drag.tail_quadratic);
  drag.finish();

  s.finish();
}

void read_coefficients(detail::Section& s, const VehicleParams& p, CoefficientTable& table) {
  table = default_coefficient_table(p.wing_area, p.wing_area / p.wing_span);
  s.get("reference_area", table.reference_area);
  s.get("reference_chord", table.reference_chord);
  const YAML::Node rows = s.take("table");
  if (rows.IsDefined() && !rows.IsNull()) {
    const auto key = s.key_path("table");
    if (!rows.IsSequence()) detail::Section::fail_at(rows, key, "expected a list of [alpha_deg, C_L, C_D, C_m] rows");
    table.entries.clear();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto row = rows[i];
      const auto row_key = key + "[" + std::to_string(i) + "]";
      if (!row.IsSequence() || row.size() != 4) {
        detail::Section::fail_at(row, row_key, "expected [alpha_deg, C_L, C_D, C_m]");
      }
      CoefficientSample sample{deg2rad(detail::as_double(row[0], row_key)), detail::as_double(row[1], row_key),
                               detail::as_double(row[2], row_key), detail::as_double(row[3], row_key)};
      if (i > 0 && !(sample.alpha > table.entries.back().alpha)) {
        detail::Section::fail_at(row, row_key, "alpha not increasing");
      }
      table.entries.push_back(sample);
    }
  }
  s.finish();
}

}  // namespace

LoadedParams load_params(std::string_view config_text) {
  auto root = detail::parse_yaml(config_text);
  detail::Section top(root, "");
  LoadedParams out;
  auto vehicle = top.child("vehicle");
  if (!vehicle.present()) throw ConfigError("missing required key 'vehicle.mass'");
  read_vehicle(vehicle, out.params);
  auto coeffs = top.child("coefficients");
  read_coefficients(coeffs, out.params, out.table);
  validate(out.params);
  validate(out.table);
  return out;
}

}  // namespace foilsim
