// Copyright 2026 The ogmnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ogmnav/harness.hpp"
#include "ogmnav/scan_corpus.hpp"
#include "ogmnav/world.hpp"

namespace fs = std::filesystem;
using namespace ogmnav;

namespace
{

void write_text(const fs::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

SimConfig config_from(const std::string & path)
{
  return path.empty() ? SimConfig{} : load_config(path);
}

struct RunArgs
{
  std::string town;
  std::string scenarios;
  std::string out;
  std::string config;
  bool no_avoidance{false};
  std::string area_mode;
  std::string wall_mode{"directed"};
  std::optional<std::uint64_t> seed;
  bool export_maps{false};
  bool tick_logs{false};
};

int run(const RunArgs & args)
{
  const World town = load_world(args.town);
  auto scenarios = load_scenarios(args.scenarios);
  const SimConfig config = config_from(args.config);
  const fs::path out = args.out;
  fs::create_directories(out);

  RunOptions options;
  options.blockage_avoidance = !args.no_avoidance;
  options.wall_mode = args.wall_mode == "remove_when_left" ? WallMode::kRemoveWhenLeft : WallMode::kDirected;
  if (!args.area_mode.empty()) {
    options.area_mode = args.area_mode == "polygon" ? AreaMode::kPolygon : AreaMode::kConvexHull;
  }
  options.tick_log = args.tick_logs;

  std::vector<Metrics> runs;
  for (auto & scenario : scenarios) {
    if (args.seed) {
      scenario.seed = *args.seed;
    }
    if (args.export_maps) {
      options.export_dir = out / "maps" / scenario.id;
      fs::create_directories(*options.export_dir);
    }
    const ScenarioResult result = run_scenario(town, scenario, config, options);
    const Metrics & m = result.metrics;
    fmt::print(
      "{:<24} {:<16} t={:7.2f}/{:7.2f} s  goal {:6.2f}%  collisions {}  a* {}\n", m.id, to_string(m.outcome),
      m.time_used, m.deadline, m.distance_to_goal_pct, m.static_collisions, m.a_star_runs);
    if (args.tick_logs) {
      write_text(out / fmt::format("ticks_{}.csv", scenario.id), result.tick_log);
    }
    runs.push_back(m);
  }
  write_text(out / "metrics.csv", metrics_csv(runs));
  const std::string label = options.blockage_avoidance ? "avoidance_on" : "avoidance_off";
  const Summary summary = compute_metrics(runs);
  write_text(out / "summary.csv", summary_csv(summary, label));
  fmt::print(
    "success {}/{} ({:.1f}%), km {:.3f}, km per static collision {}\n", summary.successes, summary.n,
    summary.success_rate_pct, summary.km_traveled, km_per_infraction(summary.km_traveled, summary.static_collisions));
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Occupancy-grid blockage avoidance for route-following vehicles"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto * run_cmd = app.add_subcommand("run", "Run scenarios in closed loop and write metrics");
  run_cmd->add_option("--town", run_args.town, "Town JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--scenarios", run_args.scenarios, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run_args.out, "Output directory")->required();
  run_cmd->add_option("--config", run_args.config, "Config JSON")->check(CLI::ExistingFile);
  run_cmd->add_flag("--no-blockage-avoidance", run_args.no_avoidance, "Disable the mapping and blockage stack");
  run_cmd->add_option("--area-mode", run_args.area_mode, "Affected area shape")
    ->check(CLI::IsMember({"hull", "polygon"}));
  run_cmd->add_option("--wall-mode", run_args.wall_mode, "Blockage wall handling")
    ->check(CLI::IsMember({"directed", "remove_when_left"}));
  run_cmd->add_option("--seed", run_args.seed, "Override every scenario seed");
  run_cmd->add_flag("--export-maps", run_args.export_maps, "Write final OGM and planning maps");
  run_cmd->add_flag("--tick-logs", run_args.tick_logs, "Write one CSV tick log per scenario");

  std::string gen_town;
  std::string gen_out;
  std::string gen_config;
  int gen_n = 20;
  std::uint64_t gen_seed = 1;
  auto * gen_cmd = app.add_subcommand("gen-scenarios", "Generate blockage scenarios for a town");
  gen_cmd->add_option("--town", gen_town, "Town JSON")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--n", gen_n, "Number of scenarios")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("--out", gen_out, "Output scenario JSON")->required();
  gen_cmd->add_option("--config", gen_config, "Config JSON")->check(CLI::ExistingFile);

  std::string bench_scans;
  std::string bench_config;
  int bench_reps = 5;
  auto * bench_cmd = app.add_subcommand("bench-area", "Time hull and polygon affected areas on a scan corpus");
  bench_cmd->add_option("--scans", bench_scans, "Scan corpus file")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--reps", bench_reps, "Repetitions per scan")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--config", bench_config, "Config JSON")->check(CLI::ExistingFile);

  std::string scans_town;
  std::string scans_out;
  std::string scans_config;
  int scans_n = 50;
  std::uint64_t scans_seed = 1;
  auto * scans_cmd = app.add_subcommand("gen-scans", "Record filtered scans at random in-lane poses");
  scans_cmd->add_option("--town", scans_town, "Town JSON")->required()->check(CLI::ExistingFile);
  scans_cmd->add_option("--n", scans_n, "Number of scans")->check(CLI::PositiveNumber);
  scans_cmd->add_option("--seed", scans_seed, "Pose seed");
  scans_cmd->add_option("--out", scans_out, "Output corpus file")->required();
  scans_cmd->add_option("--config", scans_config, "Config JSON")->check(CLI::ExistingFile);

  std::string config_out;
  auto * config_cmd = app.add_subcommand("dump-config", "Print the default configuration");
  config_cmd->add_option("--out", config_out, "Write to this file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      return run(run_args);
    }
    if (*gen_cmd) {
      const World town = load_world(gen_town);
      const auto scenarios =
        generate_blockage_scenarios(town, fs::path(gen_town).stem().string(), gen_n, gen_seed, config_from(gen_config));
      write_text(gen_out, dump_scenarios(scenarios));
      fmt::print("wrote {} scenarios to {}\n", scenarios.size(), gen_out);
      return 0;
    }
    if (*bench_cmd) {
      const auto corpus = load_scan_corpus(bench_scans);
      const auto report = bench_affected_area(corpus, bench_reps, config_from(bench_config).ogm);
      std::cout << bench_report_text(report);
      return 0;
    }
    if (*scans_cmd) {
      const World town = load_world(scans_town);
      save_scan_corpus(scans_out, generate_scan_corpus(town, scans_n, scans_seed, config_from(scans_config)));
      fmt::print("wrote {} scans to {}\n", scans_n, scans_out);
      return 0;
    }
    if (*config_cmd) {
      const std::string text = dump_config(SimConfig{});
      if (config_out.empty()) {
        std::cout << text;
      } else {
        write_text(config_out, text);
      }
      return 0;
    }
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
