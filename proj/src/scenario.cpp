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
#include "hev/scenario.hpp"

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "hev/errors.hpp"
#include "hev/io.hpp"

namespace hev
{

namespace
{

using json = nlohmann::json;
namespace fs = std::filesystem;

template <typename T>
void read(const json& j, const char* key, T& out)
{
  if (j.contains(key))
    out = j.at(key).get<T>();
}

traffic::Intersection intersection_from(const json& j, traffic::Intersection in)
{
  read(j, "id", in.id);
  read(j, "stop_bar_m", in.stop_bar_m);
  read(j, "cycle_s", in.signal.cycle_s);
  read(j, "green_start_s", in.signal.green_start_s);
  read(j, "green_duration_s", in.signal.green_duration_s);
  read(j, "saturation_flow", in.saturation_flow);
  read(j, "jam_density", in.jam_density);
  read(j, "free_flow_speed", in.free_flow_speed);
  return in;
}

traffic::Corridor corridor_from(const json& j)
{
  traffic::Corridor c;
  read(j, "length_m", c.length_m);
  read(j, "speed_limit_mps", c.speed_limit);
  traffic::Intersection base;
  base.free_flow_speed = c.speed_limit;
  if (j.contains("intersections"))
    for (const auto& e : j.at("intersections"))
      c.intersections.push_back(intersection_from(e, base));
  if (j.contains("repeat"))
  {
    // One intersection template repeated at a fixed spacing, with an
    // optional signal offset between consecutive copies.
    const auto& r = j.at("repeat");
    const auto tmpl = intersection_from(r, base);
    const int count = r.value("count", 1);
    const double first = r.value("first_stop_bar_m", tmpl.stop_bar_m);
    const double spacing = r.value("spacing_m", 500.0);
    const double offset = r.value("offset_step_s", 0.0);
    for (int i = 0; i < count; ++i)
    {
      auto in = tmpl;
      in.id = static_cast<int>(c.intersections.size()) + 1;
      in.stop_bar_m = first + spacing * i;
      const double gs = std::fmod(tmpl.signal.green_start_s + offset * i, tmpl.signal.cycle_s);
      in.signal.green_start_s = gs < 0 ? gs + tmpl.signal.cycle_s : gs;
      c.intersections.push_back(in);
    }
  }
  return c;
}

traffic::Arrival arrival_from(const json& j)
{
  traffic::Arrival a;
  read(j, "id", a.vehicle_id);
  read(j, "entry_time_s", a.entry_time_s);
  read(j, "entry_speed_mps", a.entry_speed);
  return a;
}

fs::path resolve(const fs::path& base, const std::string& file)
{
  fs::path p(file);
  return p.is_absolute() ? p : base / p;
}

thermal::ThermalPlantParams plant_from(const json& j, thermal::ThermalPlantParams p)
{
  read(j, "cabin_capacity", p.cabin_capacity);
  read(j, "interior_capacity", p.interior_capacity);
  read(j, "shell_capacity", p.shell_capacity);
  read(j, "ua_cabin_interior", p.ua_cabin_interior);
  read(j, "ua_cabin_shell", p.ua_cabin_shell);
  read(j, "ua_shell_ambient", p.ua_shell_ambient);
  read(j, "evaporator_tau_s", p.evaporator_tau_s);
  read(j, "air_cp", p.air_cp);
  read(j, "compressor_c1", p.compressor_c1);
  read(j, "compressor_c2", p.compressor_c2);
  read(j, "blower_b0", p.blower_b0);
  read(j, "blower_b1", p.blower_b1);
  return p;
}

void solver_from(const json& j, acmpc::SolverOptions& s)
{
  read(j, "beam_width", s.beam_width);
  read(j, "block_length", s.block_length);
  read(j, "refine_sweeps", s.refine_sweeps);
}

void ac_from(const json& j, acmpc::AcRunConfig& ac)
{
  if (j.contains("scheduling"))
  {
    const auto& s = j.at("scheduling");
    auto& c = ac.scheduling;
    read(s, "horizon", c.horizon);
    read(s, "cabin_lower", c.cabin_lower);
    read(s, "cabin_upper", c.cabin_upper);
    read(s, "evap_lower", c.evap_lower);
    read(s, "evap_upper", c.evap_upper);
    read(s, "eps_max", c.eps_max);
    read(s, "ioch_weight", c.ioch_weight);
    read(s, "ioch_offset", c.ioch_offset);
    read(s, "setpoint_weight", c.setpoint_weight);
    read(s, "cabin_setpoint", c.cabin_setpoint);
    read(s, "violation_penalty", c.violation_penalty);
    if (s.contains("grid"))
    {
      const auto& g = s.at("grid");
      c.grid = acmpc::ControlGrid::uniform(g.value("blower_levels", 5), g.value("setpoint_levels", 8),
                                           g.value("slack_levels", 7), c.eps_max);
    }
    else
    {
      c.grid = acmpc::ControlGrid::uniform(c.grid.blower.size(), c.grid.setpoint.size(),
                                           c.grid.slack.size(), c.eps_max);
    }
    if (s.contains("solver"))
      solver_from(s.at("solver"), c.solver);
  }
  if (j.contains("piloting"))
  {
    const auto& p = j.at("piloting");
    auto& c = ac.piloting;
    read(p, "horizon", c.horizon);
    read(p, "tracking_weight", c.tracking_weight);
    if (p.contains("grid"))
    {
      const auto& g = p.at("grid");
      c.grid = acmpc::ControlGrid::uniform(g.value("blower_levels", 5), g.value("setpoint_levels", 8), 0);
    }
    if (p.contains("solver"))
      solver_from(p.at("solver"), c.solver);
  }
  read(j, "reschedule_period_s", ac.reschedule_period);
  if (j.contains("plant"))
    ac.plant = plant_from(j.at("plant"), ac.plant);
}

Scenario parse(const json& j, const fs::path& base)
{
  Scenario s;
  if (!j.is_object())
    throw Error(ErrorKind::Config, "scenario must be a JSON object");
  for (const char* key : {"corridor", "ego", "background", "idm", "queue", "limits", "ambient", "cabin_init",
                          "ac", "vehicle", "soc_model", "fuel_map", "energy", "dp", "rule_based", "stages"})
    if (j.contains(key) && !j.at(key).is_object())
      throw Error(ErrorKind::Config, std::string("scenario section '") + key + "' must be an object");
  read(j, "name", s.name);
  read(j, "seed", s.seed);
  if (!j.contains("corridor"))
    throw Error(ErrorKind::Config, "scenario has no corridor");
  s.corridor = corridor_from(j.at("corridor"));
  if (j.contains("ego"))
    s.ego = arrival_from(j.at("ego"));

  if (j.contains("background"))
  {
    const auto& b = j.at("background");
    if (b.contains("arrivals"))
      for (const auto& a : b.at("arrivals"))
        s.background.push_back(arrival_from(a));
    if (b.contains("generated"))
    {
      const auto& g = b.at("generated");
      const int first = s.background.empty() ? 1000 : s.background.back().vehicle_id + 1;
      auto more = traffic::scripted_arrivals(
          s.seed, g.value("rate_veh_s", 0.05), g.value("t_begin_s", 0.0), g.value("t_end_s", 900.0),
          g.value("min_headway_s", 2.0), g.value("entry_speed_mps", s.corridor.speed_limit), first);
      s.background.insert(s.background.end(), more.begin(), more.end());
    }
  }

  if (j.contains("idm"))
  {
    const auto& d = j.at("idm");
    read(d, "max_accel", s.idm.max_accel);
    read(d, "comfort_decel", s.idm.comfort_decel);
    read(d, "min_gap", s.idm.min_gap);
    read(d, "time_headway", s.idm.time_headway);
    read(d, "exponent", s.idm.exponent);
    read(d, "max_decel", s.idm.max_decel);
    read(d, "vehicle_length", s.idm.vehicle_length);
  }
  if (j.contains("queue"))
  {
    const auto& q = j.at("queue");
    read(q, "decel", s.queue.decel);
    read(q, "accel", s.queue.accel);
    read(q, "launch_reaction_s", s.queue.launch_reaction_s);
  }
  if (j.contains("limits"))
  {
    const auto& l = j.at("limits");
    read(l, "a_max", s.limits.a_max);
    read(l, "a_min", s.limits.a_min);
    read(l, "jerk_max", s.limits.jerk_max);
  }
  read(j, "headway_s", s.headway_s);

  if (j.contains("ambient"))
  {
    const auto& a = j.at("ambient");
    if (a.contains("file"))
      s.ambient = io::ambient_from_csv(io::read_csv(resolve(base, a.at("file").get<std::string>())));
    else
      s.ambient = thermal::AmbientProfile(
          thermal::Ambient{a.value("temperature_c", 35.0), a.value("solar_w", 700.0)});
  }
  if (j.contains("cabin_init"))
  {
    const auto& c = j.at("cabin_init");
    read(c, "cabin_c", s.cabin_init.cabin_c);
    read(c, "interior_c", s.cabin_init.interior_c);
    read(c, "shell_c", s.cabin_init.shell_c);
    read(c, "evaporator_c", s.cabin_init.evaporator_c);
  }
  if (j.contains("ac"))
    ac_from(j.at("ac"), s.ac);

  if (j.contains("vehicle"))
  {
    const auto& v = j.at("vehicle");
    read(v, "mass_kg", s.vehicle.mass_kg);
    read(v, "rolling_coeff", s.vehicle.rolling_coeff);
    read(v, "drag_coeff", s.vehicle.drag_coeff);
    read(v, "frontal_area_m2", s.vehicle.frontal_area_m2);
    read(v, "air_density", s.vehicle.air_density);
    read(v, "driveline_efficiency", s.vehicle.driveline_efficiency);
  }
  if (j.contains("soc_model"))
  {
    const auto& m = j.at("soc_model");
    if (m.contains("xi"))
    {
      const auto xi = m.at("xi").get<std::vector<double>>();
      if (xi.size() != 9)
        throw Error(ErrorKind::Config, "soc_model.xi needs nine coefficients");
      std::copy(xi.begin(), xi.end(), s.powertrain.soc.xi.begin());
    }
    read(m, "soc_min", s.powertrain.soc.soc_min);
    read(m, "soc_max", s.powertrain.soc.soc_max);
  }
  if (j.contains("fuel_map"))
  {
    const auto& f = j.at("fuel_map");
    if (f.contains("file"))
    {
      s.powertrain.fuel = io::fuel_map_from_csv(io::read_csv(resolve(base, f.at("file").get<std::string>())));
    }
    else
    {
      vehicle::WillansParams w;
      read(f, "idle_power_w", w.idle_power_w);
      read(f, "marginal_ratio", w.marginal_ratio);
      read(f, "max_power_w", w.max_power_w);
      read(f, "grid_step_w", w.grid_step_w);
      read(f, "lhv_j_per_g", w.lhv_j_per_g);
      s.powertrain.fuel = vehicle::FuelMap::willans(w);
    }
  }
  if (j.contains("energy"))
  {
    const auto& e = j.at("energy");
    read(e, "lhv_j_per_g", s.powertrain.energy.lhv_j_per_g);
    read(e, "battery_energy_j", s.powertrain.energy.battery_energy_j);
    read(e, "charge_equivalence", s.powertrain.energy.charge_equivalence);
  }
  read(j, "soc0", s.soc0);
  if (j.contains("dp"))
  {
    const auto& d = j.at("dp");
    const double spacing = d.value("soc_spacing", 0.25);
    s.dp.soc_grid = split::DpConfig::uniform_soc_grid(d.value("soc_min", 30.0), d.value("soc_max", 90.0), spacing);
    s.dp.pbat_grid = split::DpConfig::uniform_pbat_grid(d.value("charge_limit_w", 25000.0),
                                                        d.value("discharge_limit_w", 25000.0),
                                                        d.value("pbat_levels", std::size_t{21}));
    read(d, "terminal_weight", s.dp.terminal_weight);
    read(d, "hard_terminal", s.dp.hard_terminal);
    if (d.contains("soc_target"))
      s.dp.soc_target = d.at("soc_target").get<double>();
  }
  if (j.contains("rule_based"))
  {
    const auto& r = j.at("rule_based");
    read(r, "soc_high", s.rule.soc_high);
    read(r, "soc_low", s.rule.soc_low);
    read(r, "engine_level_w", s.rule.engine_level_w);
    read(r, "engine_on_threshold_w", s.rule.engine_on_threshold_w);
    read(r, "charge_limit_w", s.rule.charge_limit_w);
    read(r, "discharge_limit_w", s.rule.discharge_limit_w);
  }
  if (j.contains("stages"))
  {
    const auto& t = j.at("stages");
    read(t, "speed", s.stages.speed);
    read(t, "eco_cool", s.stages.eco_cool);
    read(t, "dp", s.stages.dp);
  }
  read(j, "cooldown_s", s.cooldown_s);
  s.validate();
  return s;
}

}  // namespace

void Scenario::validate() const
{
  corridor.validate();
  if (!(ego.entry_time_s >= 0) || ego.entry_speed < 0 || ego.entry_speed > corridor.speed_limit)
    throw Error(ErrorKind::Config, "ego entry state out of range");
  for (const auto& b : background)
    if (b.vehicle_id == ego.vehicle_id)
      throw Error(ErrorKind::Config, "background vehicle id collides with the ego id");
  vehicle.validate();
  powertrain.soc.validate();
  dp.validate(powertrain.soc);
  rule.validate();
  ac.scheduling.validate();
  ac.piloting.validate(ac.scheduling);
  ac.plant.validate();
  if (!(soc0 >= powertrain.soc.soc_min && soc0 <= powertrain.soc.soc_max))
    throw Error(ErrorKind::Config, "initial SOC outside the admissible range");
  if (!(headway_s > 0) || cooldown_s < 0)
    throw Error(ErrorKind::Config, "headway must be positive and cooldown nonnegative");
}

Scenario scenario_from_json_text(const std::string& text, const fs::path& base_dir)
{
  try
  {
    return parse(json::parse(text), base_dir);
  }
  catch (const json::exception& e)
  {
    throw Error(ErrorKind::Config, std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const fs::path& path)
{
  return scenario_from_json_text(io::read_text(path), path.parent_path());
}

StageToggles parse_stages(const std::string& list)
{
  StageToggles t{false, false, false};
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ','))
  {
    if (item == "speed")
      t.speed = true;
    else if (item == "ac" || item == "eco-cool")
      t.eco_cool = true;
    else if (item == "dp")
      t.dp = true;
    else if (item == "none" || item.empty())
      continue;
    else
      throw Error(ErrorKind::Usage, "unknown stage '" + item + "' (expected speed, ac, dp)");
  }
  return t;
}

}  // namespace hev
