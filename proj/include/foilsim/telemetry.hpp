#pragma once

// CSV telemetry, schema v1. UTF-8, comma separated, '.' decimal point. The
// first line is the comment `# foilsim-telemetry v1`, the second the column
// header, then one row per control tick. Numbers use the shortest decimal
// form that parses back to the identical double; an absent reading is `nan`.

#include <array>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "foilsim/allocation.hpp"
#include "foilsim/mode_manager.hpp"

namespace foilsim {

inline constexpr std::string_view kTelemetrySchema = "# foilsim-telemetry v1";

struct SolverStatus {
  double residual = 0.0;
  bool converged = true;
  int iterations = 0;
};

struct TelemetryRecord {
  double t = 0.0;
  Mode mode = Mode::UnderwaterNav;
  RigidBodyState state;
  double speed = 0.0;
  double depth_true = 0.0;          // m, depth of the depth-sensor point
  double depth_measured = 0.0;      // m, NaN when the sensor is dry
  double depth_setpoint = 0.0;
  double speed_setpoint = 0.0;
  ActuatorCommand command;
  Wrench5 wrench;
  SolverStatus solver_left;
  SolverStatus solver_right;
  ImmersionState immersion;
  ThrottleDirectives directives;
};

const std::vector<std::string>& telemetry_columns();

/// Shortest round-trip decimal form; `nan`, `inf`, `-inf` for non-finite values.
std::string format_double(double value);

class TelemetryWriter {
 public:
  /// Writes the schema comment and header immediately.
  explicit TelemetryWriter(std::ostream& out);
  void write(const TelemetryRecord& record);

 private:
  std::ostream& out_;
};

}  // namespace foilsim
