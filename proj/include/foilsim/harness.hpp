#pragma once

// Closed-loop mission runner: sense, apply mission events, step the mode
// manager, run the controllers, allocate, command the actuators and integrate
// until the end event. Also the `run` and `sweep` entry points used by the CLI.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "foilsim/config.hpp"
#include "foilsim/mission.hpp"
#include "foilsim/telemetry.hpp"

namespace foilsim {

enum ExitCode : int { kExitOk = 0, kExitInvalidInput = 2, kExitHalted = 3 };

struct RunOptions {
  std::uint64_t seed = 0;
  std::optional<double> dt;        // overrides sim.dt
  std::optional<double> duration;  // caps the mission end time
};

struct RunResult {
  double end_time = 0.0;
  long ticks = 0;
  Mode final_mode = Mode::UnderwaterNav;
  RigidBodyState final_state;
  std::vector<std::string> log;  // mode changes and rejected commands
};

using RecordSink = std::function<void(const TelemetryRecord&)>;

/// Runs the mission and hands one record per control tick with t < end time
/// to `sink`. Throws SimulationHalted on a numerical failure.
RunResult simulate_mission(const Config& cfg, const MissionScript& mission, const RunOptions& options,
                           const RecordSink& sink = {});

/// Loads both files, runs, writes the CSV. Diagnostics go to `diag`.
int run_mission(const std::filesystem::path& config_path, const std::filesystem::path& mission_path,
                const std::filesystem::path& out_path, const RunOptions& options, std::ostream& diag);

/// Replaces the scalar at a dotted key path (`modes.v_takeoff_min`) in a
/// YAML document, creating intermediate maps as needed.
std::string override_yaml(const std::string& text, const std::string& key_path, const std::string& value);

struct SweepParameter {
  std::string key;
  std::vector<std::string> values;
};

struct SweepOptions {
  int seeds = 1;
  std::uint64_t first_seed = 0;
  std::vector<SweepParameter> params;  // full Cartesian product
  unsigned jobs = 0;                   // 0 picks the hardware concurrency
  std::optional<double> dt;
  std::optional<double> duration;
};

/// Runs every (seed, parameter) combination, concurrently up to `jobs`,
/// writing run_NNN.csv per run and summary.csv in `out_dir`. Returns the
/// worst exit code of all runs.
int run_sweep(const std::filesystem::path& config_path, const std::filesystem::path& mission_path,
              const std::filesystem::path& out_dir, const SweepOptions& options, std::ostream& diag);

}  // namespace foilsim
