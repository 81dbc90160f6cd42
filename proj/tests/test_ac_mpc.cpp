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
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hev/ac_mpc.hpp"
#include "hev/errors.hpp"
#include "oracles.hpp"

using namespace hev::acmpc;
using namespace hev::thermal;

namespace
{

SolverOptions exhaustive(std::size_t sequences) { return {sequences, 1, 0}; }

SchedulingConfig small_scheduling(std::size_t horizon)
{
  SchedulingConfig cfg;
  cfg.horizon = horizon;
  cfg.grid = ControlGrid::uniform(3, 3, 4);
  cfg.solver = {4, 1, 3};
  return cfg;
}

}  // namespace

TEST(ControlGrid, UniformSpansActuatorBoxes)
{
  const auto g = ControlGrid::uniform(5, 8, 7);
  EXPECT_EQ(g.blower.front(), kBlowerMin);
  EXPECT_EQ(g.blower.back(), kBlowerMax);
  EXPECT_EQ(g.setpoint.front(), kSetpointMin);
  EXPECT_EQ(g.setpoint.back(), kSetpointMax);
  EXPECT_EQ(g.slack.front(), 0.0);
  EXPECT_EQ(g.slack.back(), 3.0);
  EXPECT_EQ(g.size(), 40u);
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_TRUE(within_bounds(g.command(i)));
}

TEST(Schedule, ZeroSpeedPreviewHasNoIochCost)
{
  const SchedulingConfig cfg = small_scheduling(5);
  const std::vector<double> preview(5, 0.0);
  const auto s = schedule({30.0, 32.0, 33.0, 10.0}, preview, {}, cfg, {});
  EXPECT_EQ(s.ioch_cost, 0.0);
}

TEST(Schedule, HighSpeedPreviewUsesLessElectricalEnergy)
{
  SchedulingConfig cfg;
  cfg.horizon = 60;
  const ThermalState hot{30.0, 34.0, 35.0, 8.0};
  const std::vector<double> fast(60, 25.0), still(60, 0.0);
  const auto a = schedule(hot, fast, {}, cfg, {});
  const auto b = schedule(hot, still, {}, cfg, {});
  EXPECT_LT(a.electrical_energy_j, b.electrical_energy_j);
}

TEST(Schedule, MatchesEnumerationOnSmallInstance)
{
  SchedulingConfig cfg = small_scheduling(5);
  cfg.solver = exhaustive(59049);
  const std::vector<double> preview{0.0, 5.0, 12.0, 20.0, 25.0};
  const ThermalState s0{29.5, 31.0, 33.0, 9.0};
  const Ambient amb{35.0, 700.0};
  const auto got = schedule(s0, preview, amb, cfg, {});
  const double want = hev::oracle::enumerate_schedule(s0, preview, amb, cfg, {});
  EXPECT_NEAR(got.cost, want, 1e-6 * std::abs(want));
  for (const auto& c : got.controls)
    EXPECT_TRUE(within_bounds(c));
}

TEST(Schedule, EvaluateReportsBoundsAndSlack)
{
  const SchedulingConfig cfg = small_scheduling(4);
  const std::vector<double> preview(4, 10.0);
  const std::vector<AcCommand> controls(4, AcCommand{0.1, 6.5});
  const auto r = evaluate_schedule({24.0, 30.0, 33.0, 8.0}, preview, {}, cfg, {}, controls);
  ASSERT_EQ(r.epsilon.size(), 4u);
  ASSERT_EQ(r.bound.size(), 5u);
  ASSERT_EQ(r.predicted.size(), 5u);
  for (std::size_t i = 0; i < 4; ++i)
  {
    EXPECT_GE(r.epsilon[i], 0.0);
    EXPECT_LE(r.epsilon[i], cfg.eps_max);
    EXPECT_DOUBLE_EQ(r.bound[i], cfg.cabin_upper - r.epsilon[i]);
  }
  // moving and comfortably below the bound: the largest slack is free
  EXPECT_EQ(r.epsilon[0], 3.0);
  EXPECT_TRUE(r.feasible);
}

TEST(Schedule, RejectsShortPreview)
{
  const SchedulingConfig cfg = small_scheduling(5);
  const std::vector<double> preview(3, 0.0);
  EXPECT_THROW(schedule({}, preview, {}, cfg, {}), hev::Error);
}

TEST(Pilot, MatchesEnumeration)
{
  PilotingConfig cfg;
  cfg.horizon = 3;
  cfg.grid = ControlGrid::uniform(3, 3, 0);
  cfg.solver = exhaustive(729);
  const ThermalState s0{28.0, 31.0, 33.0, 7.0};
  const std::vector<double> bound{28.0, 27.8, 27.6, 27.4};
  const std::vector<double> preview(3, 10.0);
  const auto r = pilot_plan(s0, bound, preview, {}, cfg, {});
  const double want = hev::oracle::enumerate_pilot(s0, bound, {}, cfg, {});
  EXPECT_NEAR(r.cost, want, 1e-6 * std::abs(want));
  EXPECT_TRUE(within_bounds(r.command));
}

TEST(Pilot, HoldsABoundItCanFollow)
{
  PilotingConfig cfg;
  cfg.horizon = 5;
  cfg.tracking_weight = 1e4;
  cfg.grid = ControlGrid::uniform(3, 3, 0);
  const ThermalPlantParams plant;
  const Ambient amb;
  const AcCommand hold{0.1, 6.5};
  ThermalState s{26.0, 28.0, 30.0, 6.5};
  std::vector<double> bound{s.cabin_c};
  for (int i = 0; i < 5; ++i)
  {
    s = thermal_step(s, hold, amb, plant, 1.0);
    bound.push_back(s.cabin_c);
  }
  const ThermalState s0{26.0, 28.0, 30.0, 6.5};
  const std::vector<double> preview(5, 10.0);
  const auto cmd = pilot(s0, bound, preview, amb, cfg, plant);
  const auto next = thermal_step(s0, cmd, amb, plant, 1.0);
  EXPECT_LE(std::abs(next.cabin_c - bound[1]), 0.05);
}

TEST(Pilot, SmallTrackingWeightIdles)
{
  PilotingConfig cfg;
  cfg.horizon = 5;
  cfg.tracking_weight = 1e-6;
  const ThermalState s0{26.0, 30.0, 32.0, 6.0};
  const std::vector<double> bound(6, 27.0), preview(5, 10.0);
  const auto cmd = pilot(s0, bound, preview, {}, cfg, {});
  EXPECT_EQ(cmd.blower_kg_s, kBlowerMin);
  EXPECT_EQ(cmd.evap_setpoint_c, kSetpointMax);
}

TEST(Pilot, RaisedBoundReducesCooling)
{
  PilotingConfig cfg;
  cfg.horizon = 10;
  cfg.tracking_weight = 1e4;
  const ThermalState s0{28.0, 36.0, 38.0, 6.0};
  const std::vector<double> preview(10, 10.0);
  const std::vector<double> held(11, 28.0), raised(11, 29.0);
  const auto a = pilot(s0, held, preview, {}, cfg, {});
  const auto b = pilot(s0, raised, preview, {}, cfg, {});
  EXPECT_TRUE(b.blower_kg_s < a.blower_kg_s || b.evap_setpoint_c > a.evap_setpoint_c);
}

TEST(RunAcController, ConstantSetpointSettles)
{
  AcRunConfig cfg;
  const std::vector<double> speeds(600, 12.0);
  const ThermalState cooled{26.0, 28.0, 32.0, 8.0};
  const auto r = run_ac_controller(speeds, cooled, AmbientProfile(Ambient{}), cfg, AcMode::ConstantSetpoint);
  ASSERT_EQ(r.steps.size(), 600u);
  for (std::size_t i = 400; i < 600; ++i)
    EXPECT_NEAR(r.steps[i].state.cabin_c, 26.0, 0.5);
  for (const auto& s : r.steps)
    EXPECT_TRUE(within_bounds(s.command));
}

TEST(RunAcController, EcoCoolRaisesBoundDuringStops)
{
  AcRunConfig cfg;
  std::vector<double> speeds;
  for (int cycle = 0; cycle < 6; ++cycle)
  {
    speeds.insert(speeds.end(), 40, 0.0);
    speeds.insert(speeds.end(), 60, 13.0);
  }
  const auto r = run_ac_controller(speeds, {}, AmbientProfile(Ambient{}), cfg, AcMode::EcoCool);
  double stopped = 0.0, moving = 0.0;
  int ns = 0, nm = 0;
  for (const auto& s : r.steps)
  {
    if (s.time_s < 80.0)
      continue;
    if (s.speed == 0.0)
    {
      stopped += s.bound;
      ++ns;
    }
    else
    {
      moving += s.bound;
      ++nm;
    }
    EXPECT_TRUE(within_bounds(s.command));
    EXPECT_GE(s.bound, cfg.scheduling.cabin_upper - cfg.scheduling.eps_max - 1e-12);
    EXPECT_LE(s.bound, cfg.scheduling.cabin_upper + 1e-12);
  }
  ASSERT_GT(ns, 0);
  ASSERT_GT(nm, 0);
  EXPECT_GE(stopped / ns, moving / nm);
  EXPECT_GT(r.schedule_solves, 1u);
}

TEST(RunAcController, EcoCoolUsesLessEnergyThanConstant)
{
  AcRunConfig cfg;
  std::vector<double> speeds;
  for (int cycle = 0; cycle < 5; ++cycle)
  {
    speeds.insert(speeds.end(), 30, 0.0);
    speeds.insert(speeds.end(), 90, 12.0);
  }
  const AmbientProfile amb(Ambient{});
  const auto eco = run_ac_controller(speeds, {}, amb, cfg, AcMode::EcoCool);
  const auto cst = run_ac_controller(speeds, {}, amb, cfg, AcMode::ConstantSetpoint);
  EXPECT_LT(eco.electrical_energy_j(), cst.electrical_energy_j());
}
