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
#include "hev/cabin_thermal.hpp"

#include <algorithm>
#include <cmath>

#include "hev/errors.hpp"

namespace hev::thermal
{

bool within_bounds(const AcCommand& cmd)
{
  return cmd.blower_kg_s >= kBlowerMin && cmd.blower_kg_s <= kBlowerMax &&
         cmd.evap_setpoint_c >= kSetpointMin && cmd.evap_setpoint_c <= kSetpointMax;
}

void ThermalPlantParams::validate() const
{
  const double all[] = {cabin_capacity, interior_capacity, shell_capacity, ua_cabin_interior,
                        ua_cabin_shell, ua_shell_ambient, evaporator_tau_s, air_cp,
                        compressor_c1, blower_b1};
  for (double v : all)
    if (!(v > 0))
      throw Error(ErrorKind::Config, "thermal plant parameters must be positive");
  if (compressor_c2 < 0 || blower_b0 < 0)
    throw Error(ErrorKind::Config, "power surrogate offsets must be nonnegative");
}

ThermalState thermal_step(const ThermalState& s, const AcCommand& cmd, const Ambient& amb,
                          const ThermalPlantParams& p, double dt)
{
  const double vent = cmd.blower_kg_s * p.air_cp * (s.evaporator_c - s.cabin_c);
  const double cab_int = p.ua_cabin_interior * (s.interior_c - s.cabin_c);
  const double cab_shell = p.ua_cabin_shell * (s.shell_c - s.cabin_c);
  const double shell_amb = p.ua_shell_ambient * (amb.temperature_c - s.shell_c);

  ThermalState next;
  next.cabin_c = s.cabin_c + dt * (vent + cab_int + cab_shell) / p.cabin_capacity;
  next.interior_c = s.interior_c + dt * (amb.solar_w - cab_int) / p.interior_capacity;
  next.shell_c = s.shell_c + dt * (shell_amb - cab_shell) / p.shell_capacity;
  next.evaporator_c =
      s.evaporator_c + (dt / p.evaporator_tau_s) * (cmd.evap_setpoint_c - s.evaporator_c);
  return next;
}

double compressor_power(double blower_kg_s, double ambient_c, double evaporator_c,
                        const ThermalPlantParams& p)
{
  const double lift = std::max(0.0, ambient_c - evaporator_c);
  return p.compressor_c1 * blower_kg_s * lift * (1.0 + p.compressor_c2 * lift);
}

double blower_power(double blower_kg_s, const ThermalPlantParams& p)
{
  return p.blower_b0 + p.blower_b1 * blower_kg_s * blower_kg_s * blower_kg_s;
}

double ac_efficiency(double speed)
{
  constexpr double kFullSpeed = 25.0;
  constexpr double kGain = 0.3;
  if (speed <= 0.0)
    return 1.0;
  if (speed >= kFullSpeed)
    return 1.0 + kGain;
  return 1.0 + kGain * speed / kFullSpeed;
}

double ac_electrical_power(double compressor_w, double blower_w, double speed)
{
  return compressor_w / ac_efficiency(speed) + blower_w;
}

double lumped_energy(const ThermalState& s, const ThermalPlantParams& p)
{
  return p.cabin_capacity * s.cabin_c + p.interior_capacity * s.interior_c +
         p.shell_capacity * s.shell_c;
}

AmbientProfile::AmbientProfile(Ambient constant) : samples_{{0.0, constant}} {}

AmbientProfile::AmbientProfile(std::vector<Sample> samples) : samples_(std::move(samples))
{
  if (samples_.empty())
    throw Error(ErrorKind::Config, "ambient profile is empty");
  for (std::size_t i = 1; i < samples_.size(); ++i)
    if (!(samples_[i].time_s > samples_[i - 1].time_s))
      throw Error(ErrorKind::Config, "ambient profile times must be strictly increasing");
}

Ambient AmbientProfile::at(double t) const
{
  if (t <= samples_.front().time_s)
    return samples_.front().ambient;
  if (t >= samples_.back().time_s)
    return samples_.back().ambient;
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const Sample& s) { return v < s.time_s; });
  const Sample& b = *it;
  const Sample& a = *(it - 1);
  const double w = (t - a.time_s) / (b.time_s - a.time_s);
  return {a.ambient.temperature_c + w * (b.ambient.temperature_c - a.ambient.temperature_c),
          a.ambient.solar_w + w * (b.ambient.solar_w - a.ambient.solar_w)};
}

}  // namespace hev::thermal
