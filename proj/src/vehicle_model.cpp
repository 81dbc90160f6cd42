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
#include "hev/vehicle_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hev/errors.hpp"

namespace hev::vehicle
{

void VehicleParams::validate() const
{
  if (!(mass_kg > 0 && rolling_coeff > 0 && drag_coeff > 0 && frontal_area_m2 > 0 && air_density > 0))
    throw Error(ErrorKind::Config, "vehicle parameters must be positive");
  if (!(driveline_efficiency > 0 && driveline_efficiency <= 1))
    throw Error(ErrorKind::Config, "driveline efficiency must lie in (0, 1]");
}

double traction_power(double speed, double accel, const VehicleParams& p)
{
  const double rolling = p.rolling_coeff * p.mass_kg * kGravity;
  const double aero = 0.5 * p.air_density * p.frontal_area_m2 * p.drag_coeff * speed * speed;
  const double wheel = speed * (rolling + aero + p.mass_kg * accel);
  if (wheel >= 0)
    return wheel / p.driveline_efficiency;
  return wheel * p.driveline_efficiency;
}

void SocModel::validate() const
{
  if (dt != 1.0)
    throw Error(ErrorKind::Config, "SOC model is identified at a 1 s step");
  if (!(soc_min < soc_max))
    throw Error(ErrorKind::Config, "soc_min must be below soc_max");
}

double soc_delta(double p_mg, double p_ac, bool ac_on, const SocModel& m)
{
  const auto& x = m.xi;
  if (ac_on)
    return x[0] * p_mg + x[1] * p_mg * p_mg + x[2] * p_mg * p_ac + x[3] * p_ac + x[4] * p_ac * p_ac + x[5];
  return x[6] * p_mg + x[7] * p_mg * p_mg + x[8];
}

SocStep soc_step(double soc, double p_mg, double p_ac, bool ac_on, const SocModel& model)
{
  const double next = soc + soc_delta(p_mg, p_ac, ac_on, model);
  if (next < model.soc_min)
    return {model.soc_min, true};
  if (next > model.soc_max)
    return {model.soc_max, true};
  return {next, false};
}

FuelMap::FuelMap(std::vector<Point> points) : points_(std::move(points))
{
  if (points_.size() < 2)
    throw Error(ErrorKind::Config, "fuel map needs at least two points");
  for (std::size_t i = 1; i < points_.size(); ++i)
  {
    if (!(points_[i].power_w > points_[i - 1].power_w))
      throw Error(ErrorKind::Config, "fuel map power grid must be strictly increasing");
    if (points_[i].fuel_g_s < points_[i - 1].fuel_g_s)
      throw Error(ErrorKind::Config, "fuel map must be nondecreasing in power");
  }
  if (points_.front().power_w < 0 || points_.front().fuel_g_s <= 0)
    throw Error(ErrorKind::Config, "fuel map must start at nonnegative power with positive idle fuel");
}

FuelMap FuelMap::willans(const WillansParams& w)
{
  std::vector<Point> pts;
  const auto n = static_cast<std::size_t>(std::llround(w.max_power_w / w.grid_step_w));
  pts.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
  {
    const double p = static_cast<double>(i) * w.grid_step_w;
    const double frac = p / w.max_power_w;
    const double rpm = w.rpm_at_zero + frac * (w.rpm_at_max - w.rpm_at_zero);
    pts.push_back({p, rpm * 2.0 * std::numbers::pi / 60.0,
                   (w.idle_power_w + w.marginal_ratio * p) / w.lhv_j_per_g});
  }
  return FuelMap(std::move(pts));
}

std::size_t FuelMap::segment(double power_w) const
{
  if (!(power_w >= min_power() && power_w <= max_power()))
    throw Error(ErrorKind::OutOfMapDomain,
                "engine power " + std::to_string(power_w) + " W outside fuel map domain");
  auto it = std::upper_bound(points_.begin(), points_.end(), power_w,
                             [](double p, const Point& pt) { return p < pt.power_w; });
  auto idx = static_cast<std::size_t>(it - points_.begin());
  return std::clamp<std::size_t>(idx, 1, points_.size() - 1) - 1;
}

double FuelMap::fuel_rate(double power_w) const
{
  const std::size_t i = segment(power_w);
  const Point& a = points_[i];
  const Point& b = points_[i + 1];
  if (power_w == a.power_w)
    return a.fuel_g_s;
  if (power_w == b.power_w)
    return b.fuel_g_s;
  const double t = (power_w - a.power_w) / (b.power_w - a.power_w);
  return a.fuel_g_s + t * (b.fuel_g_s - a.fuel_g_s);
}

double FuelMap::optimal_speed(double power_w) const
{
  const std::size_t i = segment(power_w);
  const Point& a = points_[i];
  const Point& b = points_[i + 1];
  const double t = (power_w - a.power_w) / (b.power_w - a.power_w);
  return a.omega_rad_s + t * (b.omega_rad_s - a.omega_rad_s);
}

double fuel_rate(EngineMode mode, double p_eng, const FuelMap& map)
{
  if (mode == EngineMode::Off)
    return 0.0;
  return map.fuel_rate(p_eng);
}

EngineState engine_state(EngineMode mode, double p_eng, const FuelMap& map)
{
  if (mode == EngineMode::Off)
    return {};
  return {mode, map.optimal_speed(p_eng), p_eng, map.fuel_rate(p_eng)};
}

double equivalent_energy(double fuel_g, double delta_soc, const EnergyConfig& cfg)
{
  return fuel_g * cfg.lhv_j_per_g + (-delta_soc) / 100.0 * cfg.battery_energy_j * cfg.charge_equivalence;
}

}  // namespace hev::vehicle
