#include "foilsim/telemetry.hpp"

#include <charconv>
#include <cmath>

namespace foilsim {

const std::vector<std::string>& telemetry_columns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> c = {
        "t",          "mode",         "x",           "y",         "z",          "roll",     "pitch",
        "yaw",        "u",            "v",           "w",         "p",          "q",        "r",
        "speed",      "depth_true",   "depth",       "h_d",       "v_d",        "thrust_l", "thrust_r",
        "delta_l",    "delta_r",      "elevator",    "aileron_l", "aileron_r",  "flaps",    "aerial_throttle",
        "wings_folded", "f_xd",       "f_zd",        "tau_xd",    "tau_yd",     "tau_zd",   "residual_l",
        "converged_l", "iterations_l", "residual_r", "converged_r", "iterations_r",
    };
    for (std::size_t i = 0; i < kComponentCount; ++i) {
      c.push_back("wet_" + std::string(component_name(static_cast<Component>(i))));
    }
    c.insert(c.end(), {"lowest_point_height", "underwater_directive", "aerial_directive"});
    return c;
  }();
  return columns;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

TelemetryWriter::TelemetryWriter(std::ostream& out) : out_(out) {
  out_ << kTelemetrySchema << '\n';
  const auto& cols = telemetry_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
  out_ << '\n';
}

void TelemetryWriter::write(const TelemetryRecord& r) {
  std::string line;
  line.reserve(768);
  auto num = [&line](double v) {
    line += format_double(v);
    line += ',';
  };
  auto integer = [&line](long long v) {
    line += std::to_string(v);
    line += ',';
  };

  num(r.t);
  line += mode_name(r.mode);
  line += ',';
  for (int i = 0; i < 3; ++i) num(r.state.position[i]);
  const auto rpy = euler_angles(r.state.attitude);
  for (int i = 0; i < 3; ++i) num(rpy[i]);
  for (int i = 0; i < 3; ++i) num(r.state.velocity[i]);
  for (int i = 0; i < 3; ++i) num(r.state.angular_rate[i]);
  num(r.speed);
  num(r.depth_true);
  num(r.depth_measured);
  num(r.depth_setpoint);
  num(r.speed_setpoint);

  const auto& c = r.command;
  for (double v : {c.thrust_left, c.thrust_right, c.delta_left, c.delta_right, c.elevator, c.aileron_l, c.aileron_r,
                   c.flaps, c.aerial_throttle}) {
    num(v);
  }
  integer(c.wings_folded ? 1 : 0);

  const auto& w = r.wrench;
  for (double v : {w.f_xd, w.f_zd, w.tau_xd, w.tau_yd, w.tau_zd}) num(v);
  for (const auto* s : {&r.solver_left, &r.solver_right}) {
    num(s->residual);
    integer(s->converged ? 1 : 0);
    integer(s->iterations);
  }
  for (const auto& part : r.immersion.parts) num(part.fraction);
  num(r.immersion.lowest_point_height);
  num(r.directives.underwater);
  line += format_double(r.directives.aerial);
  line += '\n';
  out_ << line;
}

}  // namespace foilsim
