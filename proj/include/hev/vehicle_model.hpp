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

#include <array>
#include <span>
#include <vector>

namespace hev::vehicle
{

constexpr double kGravity = 9.81;  // m/s^2

/// Longitudinal-dynamics parameters. Defaults approximate a mid-size
/// power-split hybrid on a flat road.
struct VehicleParams
{
  double mass_kg = 1500.0;
  double rolling_coeff = 0.009;
  double drag_coeff = 0.28;
  double frontal_area_m2 = 2.2;
  double air_density = 1.2;            // kg/m^3
  double driveline_efficiency = 0.9;   // (0, 1]

  void validate() const;
};

/// Demanded traction power in watts. Propelling power is divided by the
/// driveline efficiency, regenerative (negative) power is multiplied by it.
double traction_power(double speed, double accel, const VehicleParams& p);

/// Switching SOC power-balance model. SOC is in percent, powers in watts,
/// one step is one second.
struct SocModel
{
  // A/C-on branch uses xi[0..5], A/C-off branch uses xi[6..8].
  std::array<double, 9> xi = {-4.74e-5, -4.11e-10, 6.17e-9, -3.8e-5, 8.63e-9,
                              -0.03,    -4.46e-5,  -4.84e-10, -0.01};
  double soc_min = 30.0;
  double soc_max = 90.0;
  double dt = 1.0;

  void validate() const;
};

struct SocStep
{
  double soc;
  bool saturated;
};

/// SOC increment for one step, without clamping.
double soc_delta(double p_mg, double p_ac, bool ac_on, const SocModel& model);

/// One step of the SOC model, clamped to [soc_min, soc_max].
SocStep soc_step(double soc, double p_mg, double p_ac, bool ac_on, const SocModel& model);

/// Residual power the motor/generator pair supplies at the power-split device.
/// Negative values charge the battery.
inline double mg_power(double p_trac, double p_eng) { return p_trac - p_eng; }

enum class EngineMode : int
{
  Off = 1,
  On = 2,
};

struct EngineState
{
  EngineMode mode = EngineMode::Off;
  double omega_rad_s = 0.0;
  double power_w = 0.0;
  double fuel_rate_g_s = 0.0;
};

struct WillansParams
{
  double idle_power_w = 350.0;        // fuel-power intercept
  double marginal_ratio = 1.0 / 0.36; // fuel power per unit shaft power
  double max_power_w = 60000.0;
  double grid_step_w = 1000.0;
  double rpm_at_zero = 1000.0;
  double rpm_at_max = 4000.0;
  double lhv_j_per_g = 42500.0;
};

/// Engine fuel rate along the optimal operating line, tabulated over engine
/// power and interpolated linearly.
class FuelMap
{
public:
  struct Point
  {
    double power_w;
    double omega_rad_s;
    double fuel_g_s;
  };

  explicit FuelMap(std::vector<Point> points);

  static FuelMap willans(const WillansParams& params = {});

  double fuel_rate(double power_w) const;
  double optimal_speed(double power_w) const;

  double min_power() const { return points_.front().power_w; }
  double max_power() const { return points_.back().power_w; }
  std::span<const Point> points() const { return points_; }

private:
  // index of the segment containing power_w; throws OutOfMapDomain
  std::size_t segment(double power_w) const;

  std::vector<Point> points_;
};

/// Fuel rate in g/s for the given mode. Off always burns nothing.
double fuel_rate(EngineMode mode, double p_eng, const FuelMap& map);

EngineState engine_state(EngineMode mode, double p_eng, const FuelMap& map);

struct EnergyConfig
{
  double lhv_j_per_g = 42500.0;
  double battery_energy_j = 4.68e6;
  double charge_equivalence = 2.4;  // J fuel per J electricity
};

/// Fuel energy plus the fuel-equivalent of the net SOC change.
/// delta_soc is soc_end - soc_start in percent.
double equivalent_energy(double fuel_g, double delta_soc, const EnergyConfig& cfg);

struct EnergyReport
{
  double fuel_grams = 0.0;
  double soc_start = 0.0;
  double soc_end = 0.0;
  double delta_soc = 0.0;
  double fuel_energy_j = 0.0;
  double soc_correction_j = 0.0;
  double equivalent_energy_j = 0.0;
  double traction_energy_j = 0.0;  // positive traction work
  double ac_energy_j = 0.0;        // electrical A/C energy
  double duration_s = 0.0;
};

}  // namespace hev::vehicle
