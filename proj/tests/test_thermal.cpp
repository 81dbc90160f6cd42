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

#include "hev/cabin_thermal.hpp"
#include "hev/errors.hpp"

using namespace hev::thermal;

TEST(ThermalStep, EquilibriumIsFixedPoint)
{
  const ThermalPlantParams p;
  const ThermalState s{35.0, 35.0, 35.0, 35.0};
  const auto next = thermal_step(s, {kBlowerMin, 35.0}, {35.0, 0.0}, p, 1.0);
  EXPECT_NEAR(next.cabin_c, 35.0, 1e-12);
  EXPECT_NEAR(next.interior_c, 35.0, 1e-12);
  EXPECT_NEAR(next.shell_c, 35.0, 1e-12);
  EXPECT_NEAR(next.evaporator_c, 35.0, 1e-12);
}

TEST(ThermalStep, EvaporatorFirstOrderLag)
{
  const ThermalPlantParams p;
  const ThermalState s{30.0, 30.0, 30.0, 10.0};
  EXPECT_NEAR(thermal_step(s, {0.1, 4.0}, {}, p, 1.0).evaporator_c, 9.8, 1e-12);
}

TEST(ThermalStep, HotSoakCools)
{
  const ThermalPlantParams p;
  const ThermalState s{40.0, 40.0, 40.0, 5.0};
  EXPECT_LT(thermal_step(s, {kBlowerMax, 3.0}, {}, p, 1.0).cabin_c, 40.0);
}

TEST(ThermalStep, LumpedEnergyFallsWhenCooling)
{
  const ThermalPlantParams p;
  ThermalState s{40.0, 40.0, 40.0, 5.0};
  const Ambient amb{35.0, 0.0};
  double e = lumped_energy(s, p);
  for (int i = 0; i < 60; ++i)
  {
    s = thermal_step(s, {kBlowerMax, 3.0}, amb, p, 1.0);
    const double next = lumped_energy(s, p);
    EXPECT_LT(next, e);
    e = next;
  }
}

TEST(CompressorPower, Examples)
{
  const ThermalPlantParams p;
  EXPECT_EQ(compressor_power(0.1, 20.0, 20.0, p), 0.0);
  EXPECT_NEAR(compressor_power(0.10, 35.0, 5.0, p), 468.0, 1e-9);
}

TEST(BlowerPower, Examples)
{
  const ThermalPlantParams p;
  EXPECT_NEAR(blower_power(0.05, p), 30.0, 1e-9);
  EXPECT_NEAR(blower_power(0.15, p), 290.0, 1e-9);
}

TEST(AcEfficiency, Anchors)
{
  EXPECT_EQ(ac_efficiency(0.0), 1.0);
  EXPECT_EQ(ac_efficiency(25.0), 1.3);
  EXPECT_NEAR(ac_efficiency(12.5), 1.15, 1e-15);
}

TEST(AcEfficiency, MonotoneAndSaturating)
{
  double prev = ac_efficiency(0.0);
  for (int i = 1; i <= 3000; ++i)
  {
    const double e = ac_efficiency(0.01 * i);
    EXPECT_GE(e, prev);
    prev = e;
  }
  EXPECT_EQ(ac_efficiency(30.0), 1.3);
}

TEST(AcElectricalPower, DividesCompressorOnly)
{
  EXPECT_NEAR(ac_electrical_power(1300.0, 100.0, 25.0), 1100.0, 1e-9);
  EXPECT_NEAR(ac_electrical_power(1000.0, 100.0, 0.0), 1100.0, 1e-9);
}

TEST(AcCommand, Bounds)
{
  EXPECT_TRUE(within_bounds({kBlowerMin, kSetpointMin}));
  EXPECT_TRUE(within_bounds({kBlowerMax, kSetpointMax}));
  EXPECT_FALSE(within_bounds({0.2, 5.0}));
  EXPECT_FALSE(within_bounds({0.1, 2.0}));
}

TEST(AmbientProfile, InterpolatesSamples)
{
  const AmbientProfile prof({{0.0, {30.0, 0.0}}, {100.0, {40.0, 1000.0}}});
  EXPECT_NEAR(prof.at(50.0).temperature_c, 35.0, 1e-12);
  EXPECT_NEAR(prof.at(50.0).solar_w, 500.0, 1e-9);
  EXPECT_EQ(prof.at(500.0).temperature_c, 40.0);
}
