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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hev/vehicle_model.hpp"

namespace hev::split
{

/// Battery, engine and accounting models shared by every split strategy.
struct Powertrain
{
  vehicle::SocModel soc;
  vehicle::FuelMap fuel = vehicle::FuelMap::willans();
  vehicle::EnergyConfig energy;
};

/// Per-second demand seen by the power split.
struct DemandSeries
{
  std::vector<double> traction_w;
  std::vector<double> ac_w;
  std::vector<bool> ac_on;

  std::size_t size() const { return traction_w.size(); }
  void validate() const;
};

struct DpConfig
{
  std::vector<double> soc_grid;   // percent, strictly increasing
  std::vector<double> pbat_grid;  // watts, strictly increasing; ends give the charge/discharge limits
  double terminal_weight = 5.0;   // grams per percent^2 of terminal shortfall
  std::optional<double> soc_target;  // defaults to the initial SOC
  bool hard_terminal = false;     // forbid ending below soc_target instead of penalizing it
  std::size_t threads = 1;

  static DpConfig defaults();
  static std::vector<double> uniform_soc_grid(double lo, double hi, double spacing);
  static std::vector<double> uniform_pbat_grid(double charge_max_w, double discharge_max_w,
                                               std::size_t levels);

  double charge_limit_w() const { return -pbat_grid.front(); }
  double discharge_limit_w() const { return pbat_grid.back(); }
  void validate(const vehicle::SocModel& model) const;
};

struct RuleBasedConfig
{
  double soc_high = 61.0;
  double soc_low = 59.0;
  double engine_level_w = 12000.0;
  double engine_on_threshold_w = 10000.0;
  double charge_limit_w = 25000.0;
  double discharge_limit_w = 25000.0;

  void validate() const;
};

struct SplitStep
{
  vehicle::EngineMode mode = vehicle::EngineMode::Off;
  double p_bat = 0.0;   // W, P_mg + P_ac
  double p_eng = 0.0;   // W
  double p_mg = 0.0;    // W
  double friction_w = 0.0;  // W dissipated by the service brakes (<= 0)
  double fuel_g_s = 0.0;
  double soc = 0.0;     // percent at the start of the step
};

struct PowerSplitSchedule
{
  std::vector<SplitStep> steps;
  double soc_end = 0.0;
  /// Optimal value predicted by the DP value function at the initial SOC
  /// (grams of fuel plus terminal cost). Zero for rule-based schedules.
  double predicted_cost = 0.0;

  double fuel_grams() const;
};

/// Cost-to-go tables from the backward sweep. value[k][j] belongs to
/// soc_grid[j] at stage k; stage K holds the terminal cost.
struct ValueTable
{
  std::vector<double> soc_grid;
  std::vector<std::vector<double>> value;

  /// Linear interpolation in SOC; +inf outside the grid or next to an
  /// unreachable node.
  double at(std::size_t k, double soc) const;
};

struct DpResult
{
  PowerSplitSchedule schedule;
  ValueTable table;
};

/// Terminal cost used by the backward sweep.
double terminal_cost(double soc, double target, const DpConfig& cfg);

/// Admissible control candidates at one step: engine Off first, then engine
/// On for each battery power level in grid order.
struct Candidate
{
  vehicle::EngineMode mode;
  double p_bat;
  double p_eng;
  double p_mg;
  double friction_w;
  double fuel_g_s;
};

std::vector<Candidate> candidates(double p_trac, double p_ac, const DpConfig& cfg,
                                  const vehicle::FuelMap& map);

DpResult dp_solve(const DemandSeries& demand, double soc0, const DpConfig& cfg, const Powertrain& pt);

inline PowerSplitSchedule dp_optimize(const DemandSeries& demand, double soc0, const DpConfig& cfg,
                                      const Powertrain& pt)
{
  return dp_solve(demand, soc0, cfg, pt).schedule;
}

PowerSplitSchedule rule_based(const DemandSeries& demand, double soc0, const RuleBasedConfig& cfg,
                              const Powertrain& pt);

/// Re-simulates a schedule, checks it against the demand and the models, and
/// returns the energy accounting.
vehicle::EnergyReport simulate_schedule(const PowerSplitSchedule& schedule, const DemandSeries& demand,
                                        const Powertrain& pt);

}  // namespace hev::split
