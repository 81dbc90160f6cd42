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
#include "hev/ac_mpc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "hev/errors.hpp"

namespace hev::acmpc
{

using thermal::AcCommand;
using thermal::Ambient;
using thermal::ThermalPlantParams;
using thermal::ThermalState;

namespace
{

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1)
    v.back() = hi;
  return v;
}

double over(double value, double limit) { return std::max(0.0, value - limit); }

/// Rolls the plant forward and prices a scheduling-layer sequence.
class ScheduleEvaluator
{
public:
  ScheduleEvaluator(const ThermalState& s0, std::span<const double> preview, const Ambient& amb,
                    const SchedulingConfig& cfg, const ThermalPlantParams& plant)
    : s0_(s0), amb_(amb), cfg_(cfg), plant_(plant), states_(cfg.horizon + 1), eta_(cfg.horizon)
  {
    for (std::size_t i = 0; i < cfg.horizon; ++i)
      eta_[i] = thermal::ac_efficiency(preview[i]);
  }

  template <typename CommandAt>
  double run(CommandAt&& command_at, ScheduledBound* out)
  {
    const std::size_t h = cfg_.horizon;
    states_[0] = s0_;
    double energy = 0.0;
    for (std::size_t i = 0; i < h; ++i)
    {
      const AcCommand cmd = command_at(i);
      energy += thermal::compressor_power(cmd.blower_kg_s, amb_.temperature_c,
                                          states_[i].evaporator_c, plant_) / eta_[i] +
                thermal::blower_power(cmd.blower_kg_s, plant_);
      states_[i + 1] = thermal::thermal_step(states_[i], cmd, amb_, plant_, 1.0);
    }

    const double rho = cfg_.violation_penalty;
    double mean = 0.0;
    double box = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i <= h; ++i)
    {
      const auto& s = states_[i];
      mean += s.cabin_c;
      const double v = over(cfg_.cabin_lower, s.cabin_c) + over(s.evaporator_c, cfg_.evap_upper) +
                       over(cfg_.evap_lower, s.evaporator_c);
      box += v;
      worst = std::max({worst, over(cfg_.cabin_lower, s.cabin_c), over(s.evaporator_c, cfg_.evap_upper),
                        over(cfg_.evap_lower, s.evaporator_c)});
    }
    mean /= static_cast<double>(h + 1);
    const double sp_dev = cfg_.cabin_setpoint - mean;
    const double sp_term = static_cast<double>(h + 1) * cfg_.setpoint_weight * sp_dev * sp_dev;

    // Slack enters only its own step's IOCH term and upper-bound constraint,
    // so the per-step minimum over the slack grid is the exact joint minimum.
    double ioch_total = 0.0;
    double slack_total = 0.0;
    if (out)
    {
      out->epsilon.assign(h, 0.0);
      out->bound.assign(h + 1, cfg_.cabin_upper);
    }
    for (std::size_t i = 0; i < h; ++i)
    {
      const double tc = states_[i].cabin_c;
      const double tc_next = i + 1 == h ? states_[h].cabin_c : -1e300;
      double best = std::numeric_limits<double>::infinity();
      double best_ioch = 0.0;
      double best_eps = 0.0;
      double best_viol = 0.0;
      for (double eps : cfg_.grid.slack)
      {
        const double ioch = cfg_.ioch_weight * (eta_[i] - 1.0) / (eps + cfg_.ioch_offset);
        const double ub = cfg_.cabin_upper - eps;
        const double viol_now = over(tc, ub);
        const double viol_end = over(tc_next, ub);
        const double value = ioch + rho * (viol_now + viol_end);
        if (value < best)
        {
          best = value;
          best_ioch = ioch;
          best_eps = eps;
          best_viol = std::max(viol_now, viol_end);
        }
      }
      slack_total += best;
      ioch_total += best_ioch;
      worst = std::max(worst, best_viol);
      if (out)
      {
        out->epsilon[i] = best_eps;
        out->bound[i] = cfg_.cabin_upper - best_eps;
      }
    }

    const double cost = energy + slack_total + sp_term + rho * box;
    if (out)
    {
      out->bound[h] = out->bound[h - 1];
      out->predicted = states_;
      out->cost = cost;
      out->ioch_cost = ioch_total;
      out->electrical_energy_j = energy;
      out->max_violation = worst;
      out->feasible = worst <= 1e-6;
    }
    return cost;
  }

private:
  ThermalState s0_;
  Ambient amb_;
  const SchedulingConfig& cfg_;
  const ThermalPlantParams& plant_;
  std::vector<ThermalState> states_;
  std::vector<double> eta_;
};

void require_preview(std::span<const double> preview, std::size_t horizon, const char* what)
{
  if (preview.size() < horizon)
    throw Error(ErrorKind::Usage, std::string(what) + ": preview shorter than the horizon");
}

}  // namespace

ControlGrid ControlGrid::uniform(std::size_t blower_levels, std::size_t setpoint_levels,
                                 std::size_t slack_levels, double slack_max)
{
  ControlGrid g;
  g.blower = linspace(thermal::kBlowerMin, thermal::kBlowerMax, blower_levels);
  g.setpoint = linspace(thermal::kSetpointMin, thermal::kSetpointMax, setpoint_levels);
  g.slack = slack_levels == 0 ? std::vector<double>{0.0} : linspace(0.0, slack_max, slack_levels);
  return g;
}

AcCommand ControlGrid::command(std::size_t index) const
{
  return {blower[index / setpoint.size()], setpoint[index % setpoint.size()]};
}

void SchedulingConfig::validate() const
{
  if (horizon == 0)
    throw Error(ErrorKind::Config, "scheduling horizon must be positive");
  if (!(cabin_lower < cabin_upper) || !(evap_lower < evap_upper))
    throw Error(ErrorKind::Config, "temperature bounds must be ordered");
  if (!(ioch_offset > 0) || ioch_weight < 0 || setpoint_weight < 0)
    throw Error(ErrorKind::Config, "IOCH offset must be positive and weights nonnegative");
  for (double e : grid.slack)
    if (e < 0 || e > eps_max)
      throw Error(ErrorKind::Config, "slack grid must lie in [0, eps_max]");
  for (double w : grid.blower)
    if (w < thermal::kBlowerMin || w > thermal::kBlowerMax)
      throw Error(ErrorKind::Config, "blower grid outside actuator bounds");
  for (double t : grid.setpoint)
    if (t < thermal::kSetpointMin || t > thermal::kSetpointMax)
      throw Error(ErrorKind::Config, "setpoint grid outside actuator bounds");
  if (grid.size() == 0 || grid.size() > 65535)
    throw Error(ErrorKind::Config, "control grid size out of range");
}

void PilotingConfig::validate(const SchedulingConfig& sched) const
{
  if (horizon == 0 || horizon > sched.horizon)
    throw Error(ErrorKind::Config, "piloting horizon must lie in (0, H_l]");
  if (!(tracking_weight > 0))
    throw Error(ErrorKind::Config, "tracking weight must be positive");
  for (double w : grid.blower)
    if (w < thermal::kBlowerMin || w > thermal::kBlowerMax)
      throw Error(ErrorKind::Config, "blower grid outside actuator bounds");
  for (double t : grid.setpoint)
    if (t < thermal::kSetpointMin || t > thermal::kSetpointMax)
      throw Error(ErrorKind::Config, "setpoint grid outside actuator bounds");
}

ScheduledBound evaluate_schedule(const ThermalState& state, std::span<const double> preview,
                                 const Ambient& amb, const SchedulingConfig& cfg,
                                 const ThermalPlantParams& plant, std::span<const AcCommand> controls)
{
  if (controls.size() != cfg.horizon)
    throw Error(ErrorKind::Usage, "control sequence length must equal the scheduling horizon");
  require_preview(preview, cfg.horizon, "schedule");
  ScheduleEvaluator eval(state, preview, amb, cfg, plant);
  ScheduledBound out;
  eval.run([&](std::size_t i) { return controls[i]; }, &out);
  out.controls.assign(controls.begin(), controls.end());
  return out;
}

ScheduledBound schedule(const ThermalState& state, std::span<const double> preview, const Ambient& amb,
                        const SchedulingConfig& cfg, const ThermalPlantParams& plant)
{
  require_preview(preview, cfg.horizon, "schedule");
  ScheduleEvaluator eval(state, preview, amb, cfg, plant);
  const ControlGrid& grid = cfg.grid;
  const auto solved = solve_shooting(cfg.horizon, grid.size(), cfg.solver,
                                     [&](const std::vector<std::uint16_t>& seq) {
                                       return eval.run([&](std::size_t i) { return grid.command(seq[i]); },
                                                       nullptr);
                                     });
  ScheduledBound out;
  eval.run([&](std::size_t i) { return grid.command(solved.controls[i]); }, &out);
  out.controls.reserve(cfg.horizon);
  for (auto idx : solved.controls)
    out.controls.push_back(grid.command(idx));
  return out;
}

double piloting_cost(const ThermalState& state, std::span<const double> bound, const Ambient& amb,
                     const PilotingConfig& cfg, const ThermalPlantParams& plant,
                     std::span<const AcCommand> controls)
{
  ThermalState s = state;
  double cost = 0.0;
  for (std::size_t i = 0; i < controls.size(); ++i)
  {
    const AcCommand& cmd = controls[i];
    cost += thermal::compressor_power(cmd.blower_kg_s, amb.temperature_c, s.evaporator_c, plant) +
            thermal::blower_power(cmd.blower_kg_s, plant);
    s = thermal::thermal_step(s, cmd, amb, plant, 1.0);
    const double err = s.cabin_c - bound[i + 1];
    cost += cfg.tracking_weight * err * err;
  }
  return cost;
}

PilotResult pilot_plan(const ThermalState& state, std::span<const double> bound,
                       std::span<const double> /*speed_preview*/, const Ambient& amb,
                       const PilotingConfig& cfg, const ThermalPlantParams& plant)
{
  if (bound.size() < cfg.horizon + 1)
    throw Error(ErrorKind::Usage, "pilot: bound slice shorter than the horizon");
  const ControlGrid& grid = cfg.grid;
  std::vector<AcCommand> cmds(cfg.horizon);
  const auto solved = solve_shooting(cfg.horizon, grid.size(), cfg.solver,
                                     [&](const std::vector<std::uint16_t>& seq) {
                                       for (std::size_t i = 0; i < seq.size(); ++i)
                                         cmds[i] = grid.command(seq[i]);
                                       return piloting_cost(state, bound, amb, cfg, plant, cmds);
                                     });
  PilotResult r;
  for (auto idx : solved.controls)
    r.plan.push_back(grid.command(idx));
  r.command = r.plan.front();
  r.cost = solved.cost;
  return r;
}

AcCommand pilot(const ThermalState& state, std::span<const double> bound,
                std::span<const double> speed_preview, const Ambient& amb, const PilotingConfig& cfg,
                const ThermalPlantParams& plant)
{
  return pilot_plan(state, bound, speed_preview, amb, cfg, plant).command;
}

double AcLoadTrajectory::electrical_energy_j() const
{
  double e = 0.0;
  for (const auto& s : steps)
    e += s.ac_w;
  return e;
}

double AcLoadTrajectory::mean_cabin_after(double from_s) const
{
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : steps)
    if (s.time_s >= from_s)
    {
      sum += s.state.cabin_c;
      ++n;
    }
  return n ? sum / static_cast<double>(n) : std::nan("");
}

std::size_t AcLoadTrajectory::seconds_above(double limit, double from_s) const
{
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [&](const AcStep& s) {
    return s.time_s >= from_s && s.state.cabin_c > limit + 1e-6;
  }));
}

AcLoadTrajectory run_ac_controller(std::span<const double> speeds, const ThermalState& init,
                                   const thermal::AmbientProfile& ambient, const AcRunConfig& cfg,
                                   AcMode mode)
{
  cfg.scheduling.validate();
  cfg.piloting.validate(cfg.scheduling);
  cfg.plant.validate();

  const std::size_t k_total = speeds.size();
  const std::size_t hl = cfg.scheduling.horizon;
  const std::size_t hs = cfg.piloting.horizon;
  const std::size_t period = std::max<std::size_t>(1, cfg.reschedule_period);

  auto preview_from = [&](std::size_t k, std::size_t len) {
    std::vector<double> p(len);
    const double tail = k_total ? speeds[k_total - 1] : 0.0;
    for (std::size_t i = 0; i < len; ++i)
      p[i] = k + i < k_total ? speeds[k + i] : tail;
    return p;
  };

  AcLoadTrajectory out;
  out.steps.reserve(k_total);
  ThermalState state = init;
  ScheduledBound plan;
  std::size_t plan_start = 0;
  std::vector<double> bound(hs + 1);

  for (std::size_t k = 0; k < k_total; ++k)
  {
    const Ambient amb = ambient.at(static_cast<double>(k));
    if (mode == AcMode::EcoCool && k % period == 0)
    {
      const auto preview = preview_from(k, hl);
      plan = schedule(state, preview, amb, cfg.scheduling, cfg.plant);
      plan_start = k;
      ++out.schedule_solves;
      out.feasible = out.feasible && plan.feasible;
    }
    for (std::size_t i = 0; i <= hs; ++i)
    {
      if (mode == AcMode::ConstantSetpoint)
      {
        bound[i] = cfg.scheduling.cabin_setpoint;
        continue;
      }
      const std::size_t idx = k - plan_start + i;
      bound[i] = idx < plan.bound.size() ? plan.bound[idx] : plan.bound.back();
    }

    const auto preview = preview_from(k, hs);
    const AcCommand cmd = pilot(state, bound, preview, amb, cfg.piloting, cfg.plant);

    AcStep step;
    step.time_s = static_cast<double>(k);
    step.state = state;
    step.command = cmd;
    step.speed = speeds[k];
    step.compressor_w =
        thermal::compressor_power(cmd.blower_kg_s, amb.temperature_c, state.evaporator_c, cfg.plant);
    step.blower_w = thermal::blower_power(cmd.blower_kg_s, cfg.plant);
    step.ac_w = thermal::ac_electrical_power(step.compressor_w, step.blower_w, speeds[k]);
    step.bound = bound[0];
    out.steps.push_back(step);

    state = thermal::thermal_step(state, cmd, amb, cfg.plant, 1.0);
  }
  out.final_state = state;
  return out;
}

}  // namespace hev::acmpc
