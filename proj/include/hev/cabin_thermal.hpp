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

#include <vector>

namespace hev::thermal
{

struct ThermalState
{
  double cabin_c = 40.0;
  double interior_c = 40.0;
  double shell_c = 40.0;
  double evaporator_c = 20.0;
};

constexpr double kBlowerMin = 0.05;    // kg/s
constexpr double kBlowerMax = 0.15;    // kg/s
constexpr double kSetpointMin = 3.0;   // degC
constexpr double kSetpointMax = 10.0;  // degC
constexpr double kEvaporatorFloor = -10.0;

struct AcCommand
{
  double blower_kg_s = kBlowerMin;
  double evap_setpoint_c = kSetpointMax;
};

/// True when the command satisfies the actuator box exactly.
bool within_bounds(const AcCommand& cmd);

struct Ambient
{
  double temperature_c = 35.0;
  double solar_w = 700.0;
};

/// Lumped RC cabin network plus first-order evaporator, and the coefficients
/// of the compressor and blower power surrogates.
struct ThermalPlantParams
{
  double cabin_capacity = 15e3;     // J/K
  double interior_capacity = 60e3;  // J/K
  double shell_capacity = 50e3;     // J/K
  double ua_cabin_interior = 100.0; // W/K
  double ua_cabin_shell = 60.0;     // W/K
  double ua_shell_ambient = 100.0;  // W/K
  double evaporator_tau_s = 30.0;
  double air_cp = 1005.0;           // J/(kg K)

  double compressor_c1 = 120.0;     // W s/(kg K)
  double compressor_c2 = 0.01;      // 1/K
  double blower_b0 = 20.0;          // W
  double blower_b1 = 8e4;           // W s^3/kg^3

  void validate() const;
};

ThermalState thermal_step(const ThermalState& s, const AcCommand& cmd, const Ambient& amb,
                          const ThermalPlantParams& p, double dt);

double compressor_power(double blower_kg_s, double ambient_c, double evaporator_c,
                        const ThermalPlantParams& p);

double blower_power(double blower_kg_s, const ThermalPlantParams& p);

/// Speed-dependent A/C efficiency factor: 1 at standstill, 1.3 from 25 m/s on,
/// linear in between.
double ac_efficiency(double speed);

/// Electrical A/C draw with the compressor share scaled by the efficiency factor.
double ac_electrical_power(double compressor_w, double blower_w, double speed);

/// Sum of C*T over the three lumped masses (J, relative to 0 degC).
double lumped_energy(const ThermalState& s, const ThermalPlantParams& p);

/// Piecewise-linear ambient conditions over time, held constant outside the
/// sampled range.
class AmbientProfile
{
public:
  struct Sample
  {
    double time_s;
    Ambient ambient;
  };

  AmbientProfile() = default;
  explicit AmbientProfile(Ambient constant);
  explicit AmbientProfile(std::vector<Sample> samples);

  Ambient at(double time_s) const;
  const std::vector<Sample>& samples() const { return samples_; }

private:
  std::vector<Sample> samples_{{0.0, Ambient{}}};
};

}  // namespace hev::thermal
