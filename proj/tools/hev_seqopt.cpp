/*
 * Copyright (C) 2026 The hev-seqopt Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */
#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <thread>

#include "hev/errors.hpp"
#include "hev/io.hpp"
#include "hev/pipeline.hpp"
#include "hev/scenario.hpp"

namespace fs = std::filesystem;
using namespace hev;

namespace
{

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

int exit_code(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::Usage:
    case ErrorKind::Config:
      return kExitUsage;
    case ErrorKind::Io:
      return kExitIo;
    default:
      return kExitInfeasible;
  }
}

std::size_t resolve_threads(int requested)
{
  if (requested > 0)
    return static_cast<std::size_t>(requested);
  return std::max(1u, std::thread::hardware_concurrency());
}

void emit(const std::string& text, const std::string& out)
{
  if (out.empty())
    std::cout << text;
  else
    io::write_text(out, text);
}

std::string energy_json(const vehicle::EnergyReport& e)
{
  nlohmann::ordered_json j = {{"fuel_grams", e.fuel_grams},
                              {"soc_start", e.soc_start},
                              {"soc_end", e.soc_end},
                              {"delta_soc", e.delta_soc},
                              {"fuel_energy_j", e.fuel_energy_j},
                              {"soc_correction_j", e.soc_correction_j},
                              {"equivalent_energy_j", e.equivalent_energy_j},
                              {"traction_energy_j", e.traction_energy_j},
                              {"ac_energy_j", e.ac_energy_j},
                              {"duration_s", e.duration_s}};
  return j.dump(2) + "\n";
}

void make_dir(const fs::path& dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
}

struct RunArgs
{
  std::string scenario;
  std::string stages;
  std::string out;
  std::string format = "json";
  int threads = 1;
  bool timing = false;
  bool traces = false;
};

int cmd_run(const RunArgs& a)
{
  Scenario s = load_scenario(a.scenario);
  if (!a.stages.empty())
    s.stages = parse_stages(a.stages);
  std::vector<ConfigurationTraces> traces;
  RunOptions opt;
  opt.threads = resolve_threads(a.threads);
  opt.timing = a.timing;
  if (a.traces)
    opt.traces = &traces;
  const auto report = run_pipeline(s, opt);
  const bool csv = a.format == "csv";
  const std::string text = csv ? report_csv(report) : report_json(report);
  if (a.out.empty())
  {
    std::cout << text;
    return 0;
  }
  const fs::path dir(a.out);
  make_dir(dir);
  io::write_text(dir / (csv ? "report.csv" : "report.json"), text);
  for (std::size_t i = 0; i < traces.size(); ++i)
  {
    const std::string name = report.configurations[i].name;
    const auto& t = traces[i];
    io::write_text(dir / (name + "_trajectory.csv"), io::trajectory_csv(t.cycle.fine));
    io::write_text(dir / (name + "_ac.csv"), io::ac_csv(t.ac));
    io::write_text(dir / (name + "_schedule.csv"), io::schedule_csv(t.schedule, s.powertrain.soc.dt));
  }
  return 0;
}

int cmd_fleet(const std::string& dir, const std::string& out, int threads)
{
  if (!fs::is_directory(dir))
    throw Error(ErrorKind::Io, "not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw Error(ErrorKind::Usage, "no scenario files in " + dir);
  std::vector<Scenario> scenarios;
  for (const auto& f : files)
    scenarios.push_back(load_scenario(f));
  const auto summary = run_fleet(scenarios, resolve_threads(threads));
  emit(fleet_json(summary), out);
  return 0;
}

int cmd_plan_speed(const std::string& scenario, int vehicle, const std::string& out)
{
  Scenario s = load_scenario(scenario);
  if (vehicle != s.ego.vehicle_id)
  {
    auto it = std::find_if(s.background.begin(), s.background.end(),
                           [&](const traffic::Arrival& a) { return a.vehicle_id == vehicle; });
    if (it == s.background.end())
      throw Error(ErrorKind::Usage, "no vehicle with id " + std::to_string(vehicle) + " in the scenario");
    s.ego = *it;
    s.background.erase(it);
  }
  const auto traffic = simulate_background(s);
  const auto cycle = eco_cycle(s, traffic);
  emit(io::trajectory_csv(cycle.fine), out);
  return 0;
}

int cmd_plan_ac(const std::string& trajectory, const std::string& mode, const std::string& scenario,
                const std::string& out)
{
  Scenario s;
  if (!scenario.empty())
    s = load_scenario(scenario);
  const auto cycle = to_drive_cycle(io::trajectory_from_csv(io::read_csv(trajectory)), s.vehicle);
  const auto ac_mode = mode == "eco" ? acmpc::AcMode::EcoCool : acmpc::AcMode::ConstantSetpoint;
  const auto ac = acmpc::run_ac_controller(cycle.speed, s.cabin_init, s.ambient, s.ac, ac_mode);
  emit(io::ac_csv(ac), out);
  return 0;
}

int cmd_optimize_split(const std::string& traction, const std::string& ac_file, bool baseline,
                       const std::string& scenario, const std::string& out)
{
  Scenario s;
  if (!scenario.empty())
    s = load_scenario(scenario);
  const auto tt = io::read_csv(traction);
  split::DemandSeries demand;
  if (tt.has("p_trac"))
    demand.traction_w = tt.values("p_trac");
  else
    demand.traction_w = to_drive_cycle(io::trajectory_from_csv(tt), s.vehicle).traction_w;
  demand.ac_w = io::read_csv(ac_file).values("p_ac");
  if (demand.ac_w.size() != demand.traction_w.size())
    throw Error(ErrorKind::Usage, "traction and A/C series differ in length (" +
                                      std::to_string(demand.traction_w.size()) + " vs " +
                                      std::to_string(demand.ac_w.size()) + ")");
  demand.ac_on.assign(demand.size(), true);

  const auto sched = baseline ? split::rule_based(demand, s.soc0, s.rule, s.powertrain)
                              : split::dp_optimize(demand, s.soc0, s.dp, s.powertrain);
  const auto report = split::simulate_schedule(sched, demand, s.powertrain);
  if (out.empty())
  {
    std::cout << energy_json(report);
    return 0;
  }
  const fs::path dir(out);
  make_dir(dir);
  io::write_text(dir / "schedule.csv", io::schedule_csv(sched, s.powertrain.soc.dt));
  io::write_text(dir / "energy.json", energy_json(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Sequential speed, A/C load and power-split optimization for a hybrid vehicle"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run baseline and cumulative stage configurations on a scenario");
  run_cmd->add_option("--scenario", run.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--stages", run.stages, "Enabled stages, e.g. speed,ac,dp (default: from scenario)");
  run_cmd->add_option("--out", run.out, "Output directory (default: report on stdout)");
  run_cmd->add_option("--format", run.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_option("--threads", run.threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  run_cmd->add_flag("--timing", run.timing, "Include wall-clock runtimes (breaks byte-identical output)");
  run_cmd->add_flag("--traces", run.traces, "Also write per-configuration traces to --out");

  std::string fleet_dir;
  std::string fleet_out;
  int fleet_threads = 1;
  auto* fleet_cmd = app.add_subcommand("fleet", "Stage I savings over a directory of scenarios");
  fleet_cmd->add_option("--scenarios", fleet_dir, "Directory of scenario JSON files")->required();
  fleet_cmd->add_option("--out", fleet_out, "Summary JSON file (default: stdout)");
  fleet_cmd->add_option("--threads", fleet_threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

  std::string ps_scenario;
  std::string ps_out;
  int ps_vehicle = 0;
  auto* ps_cmd = app.add_subcommand("plan-speed", "Eco-driving trajectory for one vehicle");
  ps_cmd->add_option("--scenario", ps_scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  ps_cmd->add_option("--vehicle", ps_vehicle, "Vehicle id (ego or a background vehicle)")->required();
  ps_cmd->add_option("--out", ps_out, "Trajectory CSV (default: stdout)");

  std::string ac_traj;
  std::string ac_mode = "eco";
  std::string ac_scenario;
  std::string ac_out;
  auto* ac_cmd = app.add_subcommand("plan-ac", "A/C load for a speed trajectory");
  ac_cmd->add_option("--trajectory", ac_traj, "Trajectory CSV")->required()->check(CLI::ExistingFile);
  ac_cmd->add_option("--mode", ac_mode, "eco or constant")->check(CLI::IsMember({"eco", "constant"}));
  ac_cmd->add_option("--scenario", ac_scenario, "Scenario JSON for plant, ambient and MPC settings");
  ac_cmd->add_option("--out", ac_out, "A/C CSV (default: stdout)");

  std::string sp_traction;
  std::string sp_ac;
  std::string sp_scenario;
  std::string sp_out;
  bool sp_baseline = false;
  auto* sp_cmd = app.add_subcommand("optimize-split", "Power split over traction and A/C power series");
  sp_cmd->add_option("--traction", sp_traction, "Traction CSV (p_trac column) or trajectory CSV")
      ->required()
      ->check(CLI::ExistingFile);
  sp_cmd->add_option("--ac", sp_ac, "A/C CSV with a p_ac column")->required()->check(CLI::ExistingFile);
  sp_cmd->add_flag("--baseline", sp_baseline, "Use the rule-based controller instead of DP");
  sp_cmd->add_option("--scenario", sp_scenario, "Scenario JSON for powertrain settings");
  sp_cmd->add_option("--out", sp_out, "Output directory for schedule.csv and energy.json");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try
  {
    if (*run_cmd)
      return cmd_run(run);
    if (*fleet_cmd)
      return cmd_fleet(fleet_dir, fleet_out, fleet_threads);
    if (*ps_cmd)
      return cmd_plan_speed(ps_scenario, ps_vehicle, ps_out);
    if (*ac_cmd)
      return cmd_plan_ac(ac_traj, ac_mode, ac_scenario, ac_out);
    if (*sp_cmd)
      return cmd_optimize_split(sp_traction, sp_ac, sp_baseline, sp_scenario, sp_out);
  }
  catch (const Error& e)
  {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  }
  return kExitUsage;
}
