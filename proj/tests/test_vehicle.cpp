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
#include "hev/vehicle_model.hpp"
#include "oracles.hpp"

using namespace hev::vehicle;

TEST(TractionPower, ZeroSpeedIsZero)
{
  const VehicleParams p;
  EXPECT_EQ(traction_power(0.0, 2.0, p), 0.0);
  EXPECT_EQ(traction_power(0.0, -3.0, p), 0.0);
}

TEST(TractionPower, CruiseAtTwentyMetresPerSecond)
{
  const VehicleParams p;
  const double f_roll = 1500.0 * 9.81 * 0.009;           // 132.435 N
  const double f_aero = 0.5 * 1.2 * 0.28 * 2.2 * 400.0;  // 147.84 N
  EXPECT_NEAR(traction_power(20.0, 0.0, p), 20.0 * (f_roll + f_aero) / 0.9, 1e-9);
  EXPECT_NEAR(traction_power(20.0, 0.0, p), 6227.0, 2.0);
}

TEST(TractionPower, BrakingMultipliesByEfficiency)
{
  const VehicleParams p;
  const double wheel = 10.0 * (1500.0 * 9.81 * 0.009 + 0.5 * 1.2 * 0.28 * 2.2 * 100.0 - 1500.0 * 1.5);
  ASSERT_LT(wheel, 0.0);
  EXPECT_NEAR(traction_power(10.0, -1.5, p), wheel * 0.9, 1e-9);
}

TEST(SocStep, WorkedExamples)
{
  const SocModel m;
  EXPECT_NEAR(soc_step(60.0, 0.0, 0.0, false, m).soc, 59.99, 1e-12);
  EXPECT_NEAR(soc_step(60.0, 0.0, 0.0, true, m).soc, 59.97, 1e-12);
  EXPECT_NEAR(soc_step(60.0, 1e4, 0.0, false, m).soc, 59.4956, 1e-12);
}

TEST(SocStep, MatchesHandTypedCoefficients)
{
  const SocModel m;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> soc(31.0, 89.0), pmg(-25e3, 25e3), pac(0.0, 4e3);
  for (int i = 0; i < 500; ++i)
  {
    const double s = soc(rng), p = pmg(rng), a = pac(rng);
    const bool on = (i % 2) == 0;
    const double want = hev::oracle::soc_next(s, p, a, on);
    if (want < 30.0 || want > 90.0)
      continue;
    EXPECT_NEAR(soc_step(s, p, a, on, m).soc, want, 1e-12);
  }
}

TEST(SocStep, SaturatesAtBounds)
{
  const SocModel m;
  const auto lo = soc_step(30.005, 0.0, 0.0, false, m);
  EXPECT_EQ(lo.soc, 30.0);
  EXPECT_TRUE(lo.saturated);
  const auto hi = soc_step(89.99, -20000.0, 0.0, false, m);
  EXPECT_EQ(hi.soc, 90.0);
  EXPECT_TRUE(hi.saturated);
  EXPECT_FALSE(soc_step(60.0, 0.0, 0.0, false, m).saturated);
}

TEST(SocModel, RejectsOtherStepSizes)
{
  SocModel m;
  m.dt = 0.5;
  EXPECT_THROW(m.validate(), hev::Error);
}

TEST(MgPower, Balance)
{
  EXPECT_EQ(mg_power(5000.0, 0.0), 5000.0);
  EXPECT_EQ(mg_power(5000.0, 8000.0), -3000.0);
  EXPECT_EQ(mg_power(-2000.0, 0.0), -2000.0);
}

TEST(FuelRate, OffIsZero)
{
  const auto map = FuelMap::willans();
  EXPECT_EQ(fuel_rate(EngineMode::Off, 0.0, map), 0.0);
  EXPECT_EQ(fuel_rate(EngineMode::Off, 30000.0, map), 0.0);
}

TEST(FuelRate, NodesAndMidpoints)
{
  const FuelMap map({{0.0, 100.0, 0.1}, {10000.0, 200.0, 0.7}, {20000.0, 300.0, 1.5}});
  EXPECT_EQ(fuel_rate(EngineMode::On, 10000.0, map), 0.7);
  EXPECT_EQ(fuel_rate(EngineMode::On, 20000.0, map), 1.5);
  EXPECT_NEAR(fuel_rate(EngineMode::On, 5000.0, map), 0.4, 1e-15);
  EXPECT_NEAR(fuel_rate(EngineMode::On, 15000.0, map), 1.1, 1e-15);
}

TEST(FuelRate, OutsideMapThrows)
{
  const FuelMap map({{1000.0, 100.0, 0.1}, {10000.0, 200.0, 0.7}});
  try
  {
    fuel_rate(EngineMode::On, 20000.0, map);
    FAIL() << "expected OutOfMapDomain";
  }
  catch (const hev::Error& e)
  {
    EXPECT_EQ(e.kind(), hev::ErrorKind::OutOfMapDomain);
  }
  EXPECT_THROW(fuel_rate(EngineMode::On, 500.0, map), hev::Error);
}

TEST(FuelRate, WillansMapIsAffineInPower)
{
  const auto map = FuelMap::willans();
  for (const auto& pt : map.points())
    EXPECT_NEAR(pt.fuel_g_s, (350.0 + pt.power_w / 0.36) / 42500.0, 1e-15);
  EXPECT_NEAR(map.fuel_rate(12345.0), (350.0 + 12345.0 / 0.36) / 42500.0, 1e-12);
}

TEST(FuelMap, RejectsUnsortedGrid)
{
  EXPECT_THROW(FuelMap({{0.0, 1.0, 0.1}, {0.0, 1.0, 0.2}}), hev::Error);
  EXPECT_THROW(FuelMap({{0.0, 1.0, 0.2}, {10.0, 1.0, 0.1}}), hev::Error);
}

TEST(EquivalentEnergy, Examples)
{
  const EnergyConfig cfg;
  EXPECT_NEAR(equivalent_energy(100.0, 0.0, cfg), 4.25e6, 1e-6);
  EXPECT_NEAR(equivalent_energy(0.0, -5.0, cfg), 0.5616e6, 1e-6);
  const double gain = 100.0 * 4.25e6 / (4.68e6 * 2.4);
  EXPECT_NEAR(equivalent_energy(100.0, gain, cfg), 0.0, 1e-6);
}
