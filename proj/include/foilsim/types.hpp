#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace foilsim {

/// Integration state. Position and velocity refer to the center of mass.
struct RigidBodyState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // world, m (z down)
  Eigen::Quaterniond attitude = Eigen::Quaterniond::Identity();  // body -> world
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();      // body, m/s
  Eigen::Vector3d angular_rate = Eigen::Vector3d::Zero();  // body, rad/s

  bool all_finite() const {
    return position.allFinite() && attitude.coeffs().allFinite() && velocity.allFinite() &&
           angular_rate.allFinite();
  }
};

/// Commanded actuator set-points.
struct ActuatorCommand {
  double thrust_left = 0.0;   // N
  double thrust_right = 0.0;  // N
  double delta_left = 0.0;    // rad, foil deflection (positive tilts thrust toward +z)
  double delta_right = 0.0;   // rad
  double elevator = 0.0;      // rad, positive produces a nose-up moment
  double aileron_l = 0.0;     // rad
  double aileron_r = 0.0;     // rad, (aileron_r - aileron_l)/2 > 0 rolls right
  double flaps = 0.0;         // rad
  double aerial_throttle = 0.0;  // [0, 1]
  bool wings_folded = false;
};

/// Force and moment about the center of mass, body frame.
struct BodyWrench {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();

  BodyWrench& operator+=(const BodyWrench& o) {
    force += o.force;
    moment += o.moment;
    return *this;
  }
  friend BodyWrench operator+(BodyWrench a, const BodyWrench& b) { return a += b; }
  friend BodyWrench operator*(double s, BodyWrench w) {
    w.force *= s;
    w.moment *= s;
    return w;
  }

  /// Wrench of a force applied at `point` (relative to the center of mass).
  static BodyWrench at(const Eigen::Vector3d& point, const Eigen::Vector3d& force) {
    return {force, point.cross(force)};
  }
};

/// Roll, pitch, yaw (ZYX) of a body -> world rotation.
Eigen::Vector3d euler_angles(const Eigen::Quaterniond& attitude);
Eigen::Quaterniond from_euler(double roll, double pitch, double yaw);

}  // namespace foilsim
