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
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hev/ac_mpc.hpp"
#include "hev/power_split.hpp"
#include "hev/scenario.hpp"
#include "hev/speed_planner.hpp"
#include "hev/vehicle_model.hpp"

namespace hev
{

/// One-second drive cycle derived from a finely sampled trajectory.
struct DriveCycle
{
  speed::Trajectory fine;
  std::vector<double> speed;       // mean speed over each second, m/s
  std::vector<double> traction_w;  // mean traction power over each second
  std::vector<speed::StrategyKind> strategies;  // per intersection, eco cycles only

  std::size_t seconds() const { return speed.size(); }
};

DriveCycle to_drive_cycle(speed::Trajectory fine, const vehicle::VehicleParams& params);

/// Background traffic simulated long enough to cover the ego trip.
traffic::Microsim simulate_background(const Scenario& s);

/// Human-driver baseline for the ego.
DriveCycle baseline_cycle(const Scenario& s, const traffic::Microsim& traffic);

/// Eco-driving plan: one queue forecast and speed plan per intersection,
/// then a free run to the corridor end.
DriveCycle eco_cycle(const Scenario& s, const traffic::Microsim& traffic);

struct ConfigurationResult
{
  std::string name;
  std::string speed;  // "idm" or "eco"
  std::string ac;     // "constant" or "eco-cool"
  std::string split;  // "rule" or "dp"
  vehicle::EnergyReport energy;
  double savings_pct = 0.0;  // relative to the first configuration
  double mean_cabin_c = 0.0;  // after the cool-down window
  double seconds_above_upper = 0.0;
  double max_cabin_after_c = 0.0;
  std::optional<double> runtime_s;
};

struct StageReport
{
  std::string scenario;
  std::vector<ConfigurationResult> configurations;

  const ConfigurationResult& at(const std::string& name) const;
};

/// Full traces of one configuration, for export.
struct ConfigurationTraces
{
  DriveCycle cycle;
  acmpc::AcLoadTrajectory ac;
  split::PowerSplitSchedule schedule;
};

struct RunOptions
{
  std::size_t threads = 1;
  bool timing = false;
  std::vector<ConfigurationTraces>* traces = nullptr;  // filled in configuration order when set
};

StageReport run_pipeline(const Scenario& s, const RunOptions& opt = {});

struct FleetEntry
{
  std::string scenario;
  bool ok = false;
  std::string error;
  double savings_pct = 0.0;  // Stage I vs baseline
  StageReport report;
};

struct FleetSummary
{
  std::vector<FleetEntry> entries;
  std::size_t succeeded = 0;
  double mean_savings_pct = 0.0;
  double min_savings_pct = 0.0;
  double max_savings_pct = 0.0;
};

FleetSummary run_fleet(std::span<const Scenario> scenarios, std::size_t threads = 1);

enum class ReportFormat
{
  Json,
  Csv,
};

std::string report_json(const StageReport& r);
std::string report_csv(const StageReport& r);
StageReport report_from_json(const std::string& text);
StageReport report_from_csv(const std::string& text, const std::string& scenario_name);
std::string fleet_json(const FleetSummary& f);

/// Metric names in CSV order; every configuration emits each once.
std::span<const char* const> report_metrics();

}  // namespace hev
