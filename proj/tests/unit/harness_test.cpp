#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "foilsim/harness.hpp"

using namespace foilsim;

namespace fs = std::filesystem;

namespace {

const fs::path kData(FOILSIM_DATA_DIR);

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("foilsim_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(FOILSIM_CLI) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string run_csv(const Config& cfg, const MissionScript& mission, std::uint64_t seed) {
  std::ostringstream out;
  TelemetryWriter w(out);
  RunOptions opts;
  opts.seed = seed;
  simulate_mission(cfg, mission, opts, [&](const TelemetryRecord& r) { w.write(r); });
  return out.str();
}

}  // namespace

TEST(Harness, EmptyMissionWritesHeaderOnly) {
  const auto dir = scratch("empty");
  std::ostringstream diag;
  const int code = run_mission(kData / "configs/default.yaml", kData / "missions/empty.yaml", dir / "out.csv", {}, diag);
  EXPECT_EQ(code, kExitOk) << diag.str();
  const auto csv = slurp(dir / "out.csv");
  EXPECT_EQ(count_lines(csv), 2);
  EXPECT_EQ(csv.rfind("# foilsim-telemetry v1\nt,mode,", 0), 0u);
}

TEST(Harness, DepthHoldSettles) {
  const auto cfg = load_config_file(kData / "configs/default.yaml");
  auto mission = load_mission_file(kData / "missions/depth_hold.yaml");
  double worst = 0.0;
  long rows = 0;
  RunOptions opts;
  opts.duration = 15.0;
  const auto result = simulate_mission(cfg, mission, opts, [&](const TelemetryRecord& r) {
    ++rows;
    EXPECT_EQ(r.mode, Mode::UnderwaterNav);
    if (r.t >= 10.0) worst = std::max(worst, std::abs(r.depth_true - 0.15));
  });
  EXPECT_EQ(result.end_time, 15.0);
  EXPECT_EQ(rows, result.ticks);
  EXPECT_EQ(rows, 3750);
  EXPECT_LE(worst, 0.02);
}

TEST(Harness, TickTimesFollowControlPeriod) {
  const auto cfg = load_config_file(kData / "configs/default.yaml");
  const auto mission = load_mission_file(kData / "missions/depth_hold.yaml");
  RunOptions opts;
  opts.duration = 0.1;
  std::vector<double> times;
  simulate_mission(cfg, mission, opts, [&](const TelemetryRecord& r) { times.push_back(r.t); });
  ASSERT_EQ(times.size(), 25u);
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(times[i], 0.004 * i, 1e-12);
}

TEST(Harness, SeededRerunsAreIdentical) {
  const auto cfg = load_config_file(kData / "configs/default.yaml");
  auto mission = load_mission_file(kData / "missions/takeoff.yaml");
  mission.duration = 4.0;
  const auto a = run_csv(cfg, mission, 7);
  EXPECT_EQ(a, run_csv(cfg, mission, 7));
  EXPECT_NE(a, run_csv(cfg, mission, 8));
}

TEST(Harness, OverrideYaml) {
  const std::string text = "vehicle:\n  mass: 1.5\nmodes:\n  v_takeoff_min: 8\n";
  const auto cfg = load_config(override_yaml(text, "modes.v_takeoff_min", "9.5"));
  EXPECT_EQ(cfg.modes.v_takeoff_min, 9.5);
  EXPECT_EQ(cfg.vehicle.mass, 1.5);
  const auto created = load_config(override_yaml(text, "sim.dt", "0.0005"));
  EXPECT_EQ(created.sim.dt, 0.0005);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const std::string config = (kData / "configs/default.yaml").string();
  const std::string mission = (kData / "missions/empty.yaml").string();
  const std::string out = (dir / "out.csv").string();
  EXPECT_EQ(cli("run --config " + config + " --mission " + mission + " --out " + out), 0);
  EXPECT_EQ(cli("run --config " + config + " --mission " + config + " --out " + out), 2);
  EXPECT_EQ(cli("run --config " + mission + " --mission " + mission + " --out " + out), 2);
  EXPECT_EQ(cli("run --config " + config + " --out " + out), 2);
  EXPECT_EQ(cli("fly"), 2);

  std::ofstream(dir / "halt.yaml") << override_yaml(slurp(kData / "configs/default.yaml"), "vehicle.inertia",
                                                    "[1.0e-7, 1.0e-7, 1.0e-7]");
  EXPECT_EQ(cli("run --config " + (dir / "halt.yaml").string() + " --mission " +
                (kData / "missions/depth_hold.yaml").string() + " --out " + out),
            3);
}

TEST(Cli, SweepWritesRunsAndSummary) {
  const auto dir = scratch("sweep");
  const int code = cli("sweep --config " + (kData / "configs/default.yaml").string() + " --mission " +
                       (kData / "missions/depth_hold.yaml").string() + " --out-dir " + dir.string() +
                       " --seeds 2 --param control.depth.k_p=40,60 --duration 0.5 --jobs 2");
  EXPECT_EQ(code, 0);
  for (int i = 0; i < 4; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%03d.csv", i);
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  const auto summary = slurp(dir / "summary.csv");
  EXPECT_EQ(count_lines(summary), 5);
  EXPECT_EQ(summary.rfind("run,file,seed,control.depth.k_p,exit_code", 0), 0u) << summary;
}
