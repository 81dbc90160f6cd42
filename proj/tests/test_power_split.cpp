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

#include "hev/errors.hpp"
#include "hev/power_split.hpp"
#include "oracles.hpp"
#include "split_instances.hpp"

using namespace hev::split;
using hev::vehicle::EngineMode;

namespace
{

DemandSeries constant_demand(std::size_t steps, double traction, double ac = 0.0, bool ac_on = false)
{
  return {std::vector<double>(steps, traction), std::vector<double>(steps, ac),
          std::vector<bool>(steps, ac_on)};
}

double step_cost(const PowerSplitSchedule& s, const DpConfig& cfg, double target)
{
  return s.fuel_grams() + terminal_cost(s.soc_end, target, cfg);
}

}  // namespace

TEST(Dp, ZeroDemandIdles)
{
  const Powertrain pt;
  DpConfig cfg = DpConfig::defaults();
  cfg.terminal_weight = 0.0;
  const auto s = dp_optimize(constant_demand(20, 0.0), 60.0, cfg, pt);
  ASSERT_EQ(s.steps.size(), 20u);
  for (std::size_t k = 0; k < 20; ++k)
  {
    EXPECT_EQ(s.steps[k].mode, EngineMode::Off);
    EXPECT_EQ(s.steps[k].fuel_g_s, 0.0);
    EXPECT_NEAR(s.steps[k].soc, 60.0 - 0.01 * static_cast<double>(k), 1e-9);
  }
  EXPECT_EQ(s.fuel_grams(), 0.0);
  EXPECT_NEAR(s.soc_end, 60.0 - 0.2, 1e-9);
}

TEST(Dp, FourStepInstanceMatchesEnumeration)
{
  Powertrain pt;
  pt.soc.xi = {0, 0, 0, 0, 0, 0, -1.0 / 4096.0, 0.0, 0.0};
  DpConfig cfg;
  cfg.soc_grid = {58.0, 59.0, 60.0, 61.0, 62.0};
  cfg.pbat_grid = {-4096.0, 0.0, 4096.0};
  cfg.terminal_weight = 5.0;
  DemandSeries d;
  d.traction_w = {4096.0, 0.0, 8192.0, -8192.0};
  d.ac_w.assign(4, 0.0);
  d.ac_on.assign(4, false);

  const auto r = dp_solve(d, 60.0, cfg, pt);
  const double want = hev::oracle::enumerate_split(d, 60.0, cfg, pt);
  ASSERT_TRUE(std::isfinite(want));
  EXPECT_NEAR(r.schedule.predicted_cost, want, 1e-9);
  EXPECT_NEAR(step_cost(r.schedule, cfg, 60.0), want, 1e-9);

  const auto rep = simulate_schedule(r.schedule, d, pt);
  EXPECT_NEAR(rep.fuel_grams + terminal_cost(rep.soc_end, 60.0, cfg), want, 1e-9);
}

TEST(Dp, RandomAlignedInstancesMatchEnumeration)
{
  std::mt19937_64 rng(2024);
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial)
  {
    auto in = hev::testing::aligned_instance(rng, 1 + trial % 6, 3 + trial % 7, 2 + trial % 4);
    const double want = hev::oracle::enumerate_split(in.demand, in.soc0, in.cfg, in.pt);
    if (!std::isfinite(want))
    {
      EXPECT_THROW(dp_optimize(in.demand, in.soc0, in.cfg, in.pt), hev::InfeasibleInstance);
      continue;
    }
    const auto s = dp_optimize(in.demand, in.soc0, in.cfg, in.pt);
    EXPECT_NEAR(s.predicted_cost, want, 1e-9) << "trial " << trial;
    EXPECT_NEAR(step_cost(s, in.cfg, in.soc0), want, 1e-9) << "trial " << trial;
    ++solved;
  }
  EXPECT_GT(solved, 20);
}

TEST(Dp, BellmanConsistency)
{
  const Powertrain pt;
  DpConfig cfg = DpConfig::defaults();
  cfg.soc_grid = DpConfig::uniform_soc_grid(55.0, 65.0, 0.5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> load(-15e3, 30e3), ac(0.0, 3e3);
  DemandSeries d;
  for (int k = 0; k < 30; ++k)
  {
    d.traction_w.push_back(load(rng));
    d.ac_w.push_back(ac(rng));
    d.ac_on.push_back(k % 3 != 0);
  }
  const auto r = dp_solve(d, 60.0, cfg, pt);
  std::uniform_int_distribution<std::size_t> kk(0, 29), jj(0, cfg.soc_grid.size() - 1);
  for (int probe = 0; probe < 100; ++probe)
  {
    const std::size_t k = kk(rng), j = jj(rng);
    const double soc = cfg.soc_grid[j];
    double best = std::numeric_limits<double>::infinity();
    for (const auto& u : candidates(d.traction_w[k], d.ac_w[k], cfg, pt.fuel))
    {
      const double next = hev::oracle::soc_next(soc, u.p_mg, d.ac_w[k], d.ac_on[k]);
      if (next < 30.0 || next > 90.0)
        continue;
      best = std::min(best, u.fuel_g_s + r.table.at(k + 1, next));
    }
    const double v = r.table.value[k][j];
    if (std::isinf(best))
      EXPECT_TRUE(std::isinf(v));
    else
      EXPECT_NEAR(v, best, 1e-6);
  }
}

TEST(Dp, NoWorseThanRuleBasedAtEightKilowatts)
{
  const Powertrain pt;
  const auto d = constant_demand(300, 8000.0);
  DpConfig cfg = DpConfig::defaults();
  cfg.hard_terminal = true;
  const auto dp = simulate_schedule(dp_optimize(d, 60.0, cfg, pt), d, pt);
  const auto rb = simulate_schedule(rule_based(d, 60.0, {}, pt), d, pt);
  EXPECT_GE(dp.soc_end, 60.0 - 1e-9);
  EXPECT_LE(dp.equivalent_energy_j, rb.equivalent_energy_j);
}

TEST(Dp, ThreadCountDoesNotChangeTheResult)
{
  const Powertrain pt;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> load(-10e3, 25e3);
  DemandSeries d;
  for (int k = 0; k < 120; ++k)
  {
    d.traction_w.push_back(load(rng));
    d.ac_w.push_back(800.0);
    d.ac_on.push_back(true);
  }
  DpConfig one = DpConfig::defaults();
  DpConfig many = one;
  many.threads = 8;
  const auto a = dp_solve(d, 60.0, one, pt);
  const auto b = dp_solve(d, 60.0, many, pt);
  EXPECT_EQ(a.table.value, b.table.value);
  ASSERT_EQ(a.schedule.steps.size(), b.schedule.steps.size());
  for (std::size_t k = 0; k < a.schedule.steps.size(); ++k)
  {
    EXPECT_EQ(a.schedule.steps[k].p_bat, b.schedule.steps[k].p_bat);
    EXPECT_EQ(a.schedule.steps[k].soc, b.schedule.steps[k].soc);
  }
}

TEST(Dp, FinerGridChangesLittle)
{
  const Powertrain pt;
  std::vector<double> trace;
  for (int k = 0; k < 200; ++k)
    trace.push_back(12000.0 * std::sin(0.05 * k) + 6000.0);
  DemandSeries d{trace, std::vector<double>(200, 0.0), std::vector<bool>(200, false)};
  DpConfig coarse = DpConfig::defaults();
  DpConfig fine = coarse;
  fine.soc_grid = DpConfig::uniform_soc_grid(30.0, 90.0, 0.125);
  const double a = dp_optimize(d, 60.0, coarse, pt).predicted_cost;
  const double b = dp_optimize(d, 60.0, fine, pt).predicted_cost;
  EXPECT_NEAR(a, b, 0.02 * a);
}

TEST(Dp, OverloadIsInfeasible)
{
  const Powertrain pt;
  auto d = constant_demand(10, 5000.0);
  d.traction_w[6] = 100000.0;
  try
  {
    dp_optimize(d, 60.0, DpConfig::defaults(), pt);
    FAIL();
  }
  catch (const hev::InfeasibleInstance& e)
  {
    EXPECT_EQ(e.blocked_step(), 6u);
  }
}

TEST(Candidates, OffRoutesExcessRegenToFriction)
{
  const auto map = hev::vehicle::FuelMap::willans();
  const auto c = candidates(-40000.0, 1000.0, DpConfig::defaults(), map);
  ASSERT_FALSE(c.empty());
  EXPECT_EQ(c.front().mode, EngineMode::Off);
  EXPECT_EQ(c.front().p_mg, -26000.0);
  EXPECT_EQ(c.front().p_bat, -25000.0);
  EXPECT_EQ(c.front().friction_w, -14000.0);
  for (std::size_t i = 1; i < c.size(); ++i)
  {
    EXPECT_EQ(c[i].mode, EngineMode::On);
    EXPECT_GT(c[i].p_eng, 0.0);
  }
}

TEST(TerminalCost, SoftAndHard)
{
  DpConfig cfg;
  cfg.terminal_weight = 5.0;
  EXPECT_EQ(terminal_cost(61.0, 60.0, cfg), 0.0);
  EXPECT_DOUBLE_EQ(terminal_cost(58.0, 60.0, cfg), 20.0);
  cfg.hard_terminal = true;
  EXPECT_TRUE(std::isinf(terminal_cost(59.9, 60.0, cfg)));
  EXPECT_EQ(terminal_cost(60.0, 60.0, cfg), 0.0);
}

TEST(RuleBased, HighSocRunsElectric)
{
  const Powertrain pt;
  const auto s = rule_based(constant_demand(600, 3000.0), 70.0, {}, pt);
  EXPECT_EQ(s.steps.front().mode, EngineMode::Off);
  std::size_t first_on = s.steps.size();
  for (std::size_t k = 0; k < s.steps.size(); ++k)
    if (s.steps[k].mode == EngineMode::On)
    {
      first_on = k;
      break;
    }
  ASSERT_LT(first_on, s.steps.size());
  EXPECT_LT(s.steps[first_on].soc, 59.0);
  for (std::size_t k = 1; k < first_on; ++k)
    EXPECT_LT(s.steps[k].soc, s.steps[k - 1].soc);
}

TEST(RuleBased, LowSocRecharges)
{
  const Powertrain pt;
  const auto s = rule_based(constant_demand(5, 0.0), 50.0, {}, pt);
  for (const auto& st : s.steps)
  {
    EXPECT_EQ(st.mode, EngineMode::On);
    EXPECT_EQ(st.p_eng, 12000.0);
    EXPECT_LT(st.p_mg, 0.0);
  }
  EXPECT_GT(s.soc_end, 50.0);
}

TEST(RuleBased, HighLoadStartsEngine)
{
  const Powertrain pt;
  const auto s = rule_based(constant_demand(3, 20000.0), 70.0, {}, pt);
  EXPECT_EQ(s.steps.front().mode, EngineMode::On);
}

TEST(SimulateSchedule, AllOffOnZeroDemand)
{
  const Powertrain pt;
  const std::size_t k = 15;
  const auto d = constant_demand(k, 0.0);
  PowerSplitSchedule s;
  double soc = 60.0;
  for (std::size_t i = 0; i < k; ++i)
  {
    SplitStep st;
    st.soc = soc;
    s.steps.push_back(st);
    soc += -0.01;
  }
  s.soc_end = soc;
  const auto r = simulate_schedule(s, d, pt);
  EXPECT_EQ(r.fuel_grams, 0.0);
  EXPECT_NEAR(r.delta_soc, -0.01 * k, 1e-9);
}

TEST(SimulateSchedule, SingleStepOnAtGridPower)
{
  const Powertrain pt;
  const auto d = constant_demand(1, 10000.0);
  PowerSplitSchedule s;
  SplitStep st;
  st.mode = EngineMode::On;
  st.p_eng = 10000.0;
  st.fuel_g_s = pt.fuel.fuel_rate(10000.0);
  st.soc = 60.0;
  s.steps.push_back(st);
  s.soc_end = 60.0 - 0.01;
  const auto r = simulate_schedule(s, d, pt);
  EXPECT_EQ(r.fuel_grams, pt.fuel.points()[10].fuel_g_s);
}

TEST(SimulateSchedule, RejectsInconsistentSchedules)
{
  const Powertrain pt;
  const auto d = constant_demand(1, 10000.0);
  PowerSplitSchedule s;
  SplitStep st;
  st.mode = EngineMode::On;
  st.p_eng = 8000.0;  // leaves 2 kW unaccounted
  st.fuel_g_s = pt.fuel.fuel_rate(8000.0);
  st.soc = 60.0;
  s.steps.push_back(st);
  s.soc_end = 60.0;
  try
  {
    simulate_schedule(s, d, pt);
    FAIL();
  }
  catch (const hev::Error& e)
  {
    EXPECT_EQ(e.kind(), hev::ErrorKind::InconsistentSchedule);
  }
}
