#pragma once

// Vehicle constants, geometry and the whole-airframe coefficient table.
//
// Frames: body x forward, y right, z down. World frame is NED-like with the
// calm water surface at z = 0, so depth is positive below the surface.
// All quantities are SI; angles are radians in memory and degrees in files.

#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace foilsim {

constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Raised for any config or mission document that fails to parse or validate.
/// The message carries the offending key and, when known, the line number.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CoefficientSample {
  double alpha = 0.0;  // rad
  double cl = 0.0;
  double cd = 0.0;
  double cm = 0.0;
};

/// Whole-vehicle lift/drag/pitch-moment coefficients against angle of attack.
struct CoefficientTable {
  std::vector<CoefficientSample> entries;
  double reference_area = 0.45;   // m^2
  double reference_chord = 0.375;  // m
};

struct Coefficients {
  double cl = 0.0;
  double cd = 0.0;
  double cm = 0.0;
  bool clamped = false;  // alpha was outside the table and got clamped
};

/// Piecewise-linear interpolation of all three coefficients; exact at nodes.
/// Out-of-range alpha is clamped to the nearest end and flagged.
Coefficients interpolate_coefficients(const CoefficientTable& table, double alpha);

/// Nodes at -10, 0, 5, 10, 15, 20 deg. The 10 deg node (C_L 1.221, C_D 0.174)
/// is the measured stall point; the others are estimates shaped to the
/// reported curve trends and can be overridden from the config file.
CoefficientTable default_coefficient_table(double reference_area = 0.45,
                                           double reference_chord = 0.375);

/// Throws ConfigError naming the violated invariant.
void validate(const CoefficientTable& table);

/// Lift-producing foil (the underwater aileron) with a NACA 0016 section.
struct FoilModel {
  double area = 0.006;            // m^2, per side
  double aspect_ratio = 2.4;
  double cd0 = 0.03;              // section + strut + pod parasitic drag
  double oswald = 0.8;
  double stall_angle = deg2rad(15.0);
  double thickness = 0.02;        // m, vertical extent used for wetting

  /// Finite-wing lift slope, thin-airfoil 2*pi with an aspect-ratio correction.
  double lift_slope() const { return 2.0 * kPi * aspect_ratio / (aspect_ratio + 2.0); }
  double induced_drag_factor() const { return 1.0 / (kPi * oswald * aspect_ratio); }
};

/// Stability and control derivatives used by the airframe aero model.
struct AeroDerivatives {
  double cm_q = -8.0;              // pitch damping, per q*c/(2V)
  double cl_p = -0.4;              // roll damping, per p*b/(2V)
  double cn_r = -0.1;              // yaw damping, per r*b/(2V)
  double cn_beta = 0.08;           // weathercock stability
  double cy_beta = -0.4;           // side force
  double cl_delta_a = 0.3;         // roll per rad of differential aileron
  double flap_cl = 1.0;            // per rad of flap
  double flap_cd = 0.2;
  double flap_cm = -0.1;
};

/// Lumped fuselage damping in water. Quadratic terms are N/(m/s)^2 per body
/// axis, linear terms N/(m/s); angular terms in N*m per (rad/s) or (rad/s)^2.
struct BodyDrag {
  Eigen::Vector3d quadratic{2.0, 8.0, 10.0};
  Eigen::Vector3d linear{0.5, 2.0, 3.0};
  Eigen::Vector3d angular_quadratic{0.01, 0.02, 0.02};
  Eigen::Vector3d angular_linear{0.05, 0.1, 0.1};
  // Tail surfaces when wetted, applied at the tail point on local velocity.
  Eigen::Vector3d tail_quadratic{0.2, 2.0, 4.0};
};

struct VehicleParams {
  double mass = 1.5;  // kg
  Eigen::Matrix3d inertia = Eigen::Vector3d(0.03, 0.06, 0.08).asDiagonal();
  /// CoM offset from the body origin, body frame. All other points below are
  /// given relative to the body origin.
  Eigen::Vector3d center_of_mass = Eigen::Vector3d::Zero();

  // Hydrofoil geometry. Each foil force acts at (hydrofoil_x, +-d_f, h_s).
  double d_f = 0.20;            // m, estimate (no published value)
  double h_s = 0.1262;          // m, equals the strut height by construction
  double strut_height = 0.1262;  // m
  double hydrofoil_x = 0.0;     // m
  double design_pitch = deg2rad(12.4);

  double buoyancy_volume = 0.0016;  // m^3
  Eigen::Vector3d center_of_buoyancy{0.0, 0.0, -0.02};

  // Airframe.
  double wing_area = 0.45;   // m^2
  double wing_span = 1.2;    // m
  double folded_area_fraction = 0.2;
  double flap_bias = deg2rad(15.0);
  AeroDerivatives aero;

  // Tail: horizontal distance from the strut to the tail, and tail lowest point.
  double tail_area = 0.08;   // m^2
  double tail_arm = 0.574;   // m
  double tail_z = 0.0;       // m
  double tail_height = 0.03;  // m
  double elevator_effectiveness = 3.0;  // tail lift per rad of elevator
  double min_dynamic_pressure = 2.0;    // Pa, elevator authority floor

  FoilModel foil;
  BodyDrag drag;

  // Fuselage wetting: lowest point and vertical extent.
  Eigen::Vector3d fuselage_bottom{0.0, 0.0, 0.05};
  double fuselage_height = 0.10;

  // Underwater propeller: lowest point offset from the foil point (x, z).
  double prop_offset_x = -0.04;
  double prop_offset_z = 0.03;
  double prop_diameter = 0.06;

  // Actuators.
  double thrust_max_underwater = 10.0;  // N, per thruster
  double thrust_max_aerial = 20.0;      // N
  double deflection_limit = deg2rad(30.0);
  double fold_duration = 1.0;           // s
  double derate_depth = 0.08;           // m
  double thruster_time_constant = 0.1;  // s
  double servo_time_constant = 0.05;    // s
  double motor_time_constant = 0.1;     // s

  // Sensor placement (body frame, relative to the body origin).
  Eigen::Vector3d depth_sensor{0.0, 0.0, 0.0};
  Eigen::Vector3d gnss_antenna{0.0, 0.0, -0.05};
  Eigen::Vector3d pitot{0.25, 0.0, -0.05};

  /// Foil force application point, body origin relative. side = +1 right, -1 left.
  Eigen::Vector3d foil_point(int side) const {
    return {hydrofoil_x, side * d_f, h_s};
  }
  Eigen::Vector3d prop_point(int side) const {
    return {hydrofoil_x + prop_offset_x, side * d_f, h_s + prop_offset_z};
  }
  Eigen::Vector3d foil_bottom(int side) const {
    return {hydrofoil_x, side * d_f, h_s + 0.5 * foil.thickness};
  }
  Eigen::Vector3d tail_point() const { return {hydrofoil_x - tail_arm, 0.0, tail_z}; }
};

/// Throws ConfigError naming the violated invariant.
void validate(const VehicleParams& params);

/// Pitch at which the strut tip and the tail both touch a flat surface.
double geometric_surface_pitch(const VehicleParams& params);

struct LoadedParams {
  VehicleParams params;
  CoefficientTable table;
};

/// Parses the `vehicle` and `coefficients` sections of a YAML config document.
/// `vehicle.mass` is required; every other key falls back to its default.
LoadedParams load_params(std::string_view config_text);

}  // namespace foilsim
