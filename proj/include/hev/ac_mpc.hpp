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
#include <span>
#include <vector>

#include "hev/cabin_thermal.hpp"
#include "hev/shooting_solver.hpp"

namespace hev::acmpc
{

/// Discrete candidate values for the decision variables.
struct ControlGrid
{
  std::vector<double> blower;    // kg/s
  std::vector<double> setpoint;  // degC
  std::vector<double> slack;     // degC, scheduling layer only

  static ControlGrid uniform(std::size_t blower_levels, std::size_t setpoint_levels,
                             std::size_t slack_levels, double slack_max = 3.0);

  std::size_t size() const { return blower.size() * setpoint.size(); }
  thermal::AcCommand command(std::size_t index) const;
};

struct SchedulingConfig
{
  std::size_t horizon = 180;       // steps of 1 s
  double cabin_lower = 22.0;
  double cabin_upper = 29.0;
  double evap_lower = 0.0;
  double evap_upper = 12.0;
  double eps_max = 3.0;
  double ioch_weight = 50.0;       // B
  double ioch_offset = 0.5;        // D
  double setpoint_weight = 20.0;   // lambda
  double cabin_setpoint = 26.0;
  double violation_penalty = 1e4;  // per degC of state-box violation
  ControlGrid grid = ControlGrid::uniform(5, 8, 7);
  SolverOptions solver{6, 10, 3};

  void validate() const;
};

struct PilotingConfig
{
  std::size_t horizon = 30;
  double tracking_weight = 100.0;  // w_c
  ControlGrid grid = ControlGrid::uniform(5, 8, 0);
  SolverOptions solver{4, 3, 2};

  void validate(const SchedulingConfig& sched) const;
};

struct ScheduledBound
{
  std::vector<double> epsilon;  // horizon entries
  std::vector<double> bound;    // horizon + 1 entries, cabin_upper - epsilon
  std::vector<thermal::AcCommand> controls;
  std::vector<thermal::ThermalState> predicted;  // horizon + 1 states
  double cost = 0.0;
  double ioch_cost = 0.0;
  double electrical_energy_j = 0.0;  // sum of P_comp/eta + P_bl over the plan
  double max_violation = 0.0;
  bool feasible = true;
};

/// Cost breakdown of a scheduling-layer control sequence; epsilon is chosen
/// per step as the exact minimizer over the slack grid.
ScheduledBound evaluate_schedule(const thermal::ThermalState& state, std::span<const double> speed_preview,
                                 const thermal::Ambient& amb, const SchedulingConfig& cfg,
                                 const thermal::ThermalPlantParams& plant,
                                 std::span<const thermal::AcCommand> controls);

ScheduledBound schedule(const thermal::ThermalState& state, std::span<const double> speed_preview,
                        const thermal::Ambient& amb, const SchedulingConfig& cfg,
                        const thermal::ThermalPlantParams& plant);

double piloting_cost(const thermal::ThermalState& state, std::span<const double> bound,
                     const thermal::Ambient& amb, const PilotingConfig& cfg,
                     const thermal::ThermalPlantParams& plant,
                     std::span<const thermal::AcCommand> controls);

struct PilotResult
{
  thermal::AcCommand command;
  std::vector<thermal::AcCommand> plan;
  double cost = 0.0;
};

/// bound[i] is the cabin-temperature reference at prediction step i (i = 0 is
/// now); at least horizon + 1 entries.
PilotResult pilot_plan(const thermal::ThermalState& state, std::span<const double> bound,
                       std::span<const double> speed_preview, const thermal::Ambient& amb,
                       const PilotingConfig& cfg, const thermal::ThermalPlantParams& plant);

thermal::AcCommand pilot(const thermal::ThermalState& state, std::span<const double> bound,
                         std::span<const double> speed_preview, const thermal::Ambient& amb,
                         const PilotingConfig& cfg, const thermal::ThermalPlantParams& plant);

enum class AcMode
{
  EcoCool,
  ConstantSetpoint,
};

struct AcStep
{
  double time_s;
  thermal::ThermalState state;  // at the start of the step
  thermal::AcCommand command;
  double compressor_w;
  double blower_w;
  double ac_w;  // compressor / eta + blower
  double bound;
  double speed;
};

struct AcLoadTrajectory
{
  std::vector<AcStep> steps;
  thermal::ThermalState final_state;
  bool feasible = true;  // every scheduling solve met its constraints
  std::size_t schedule_solves = 0;

  double electrical_energy_j() const;
  /// Mean cabin temperature over steps at or after `from_s`.
  double mean_cabin_after(double from_s) const;
  std::size_t seconds_above(double limit, double from_s) const;
};

struct AcRunConfig
{
  SchedulingConfig scheduling;
  PilotingConfig piloting;
  std::size_t reschedule_period = 30;
  thermal::ThermalPlantParams plant;
};

/// Closed loop at 1 s over `speeds` (one entry per second).
AcLoadTrajectory run_ac_controller(std::span<const double> speeds, const thermal::ThermalState& init,
                                   const thermal::AmbientProfile& ambient, const AcRunConfig& cfg,
                                   AcMode mode);

}  // namespace hev::acmpc
