#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "foilsim/harness.hpp"

namespace {

foilsim::SweepParameter parse_param(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw CLI::ValidationError("--param", "expected key=v1,v2,... got '" + arg + "'");
  }
  foilsim::SweepParameter p{arg.substr(0, eq), {}};
  std::string rest = arg.substr(eq + 1);
  std::size_t start = 0;
  for (;;) {
    const auto comma = rest.find(',', start);
    p.values.push_back(rest.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"foilsim: aquatic-aerial vehicle simulator"};
  app.require_subcommand(1);

  std::string config, mission, out;
  foilsim::RunOptions run_opts;
  double dt = 0.0, duration = 0.0;

  auto* run = app.add_subcommand("run", "Run one mission and write a telemetry CSV");
  run->add_option("--config", config, "Config YAML")->required();
  run->add_option("--mission", mission, "Mission YAML")->required();
  run->add_option("--out", out, "Output CSV path")->required();
  run->add_option("--seed", run_opts.seed, "Sensor noise seed");
  auto* run_dt = run->add_option("--dt", dt, "Integration step, s");
  auto* run_duration = run->add_option("--duration", duration, "Cap on mission length, s");

  std::string sweep_out;
  foilsim::SweepOptions sweep_opts;
  std::vector<std::string> params;
  auto* sweep = app.add_subcommand("sweep", "Run seeds and parameter variations concurrently");
  sweep->add_option("--config", config, "Config YAML")->required();
  sweep->add_option("--mission", mission, "Mission YAML")->required();
  sweep->add_option("--out-dir", sweep_out, "Directory for per-run CSVs and summary.csv")->required();
  sweep->add_option("--seeds", sweep_opts.seeds, "Number of seeds per parameter combination");
  sweep->add_option("--first-seed", sweep_opts.first_seed, "First seed");
  sweep->add_option("--param", params, "key=v1,v2,... (repeatable; Cartesian product)");
  sweep->add_option("--jobs", sweep_opts.jobs, "Concurrent runs (0 = hardware threads)");
  auto* sweep_dt = sweep->add_option("--dt", dt, "Integration step, s");
  auto* sweep_duration = sweep->add_option("--duration", duration, "Cap on mission length, s");

  try {
    app.parse(argc, argv);
    for (const auto& p : params) sweep_opts.params.push_back(parse_param(p));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : foilsim::kExitInvalidInput;
  }

  if (run->parsed()) {
    if (*run_dt) run_opts.dt = dt;
    if (*run_duration) run_opts.duration = duration;
    return foilsim::run_mission(config, mission, out, run_opts, std::cerr);
  }
  if (*sweep_dt) sweep_opts.dt = dt;
  if (*sweep_duration) sweep_opts.duration = duration;
  return foilsim::run_sweep(config, mission, sweep_out, sweep_opts, std::cerr);
}
