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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hev/ac_mpc.hpp"
#include "hev/cabin_thermal.hpp"
#include "hev/microsim.hpp"
#include "hev/power_split.hpp"
#include "hev/speed_planner.hpp"
#include "hev/vehicle_model.hpp"

namespace hev
{

struct StageToggles
{
  bool speed = true;
  bool eco_cool = true;
  bool dp = true;
};

struct Scenario
{
  std::string name = "scenario";
  std::uint64_t seed = 1;

  traffic::Corridor corridor;
  traffic::Arrival ego{0, 0.0, 0.0};
  std::vector<traffic::Arrival> background;
  traffic::IdmParams idm;
  traffic::QueueKinematics queue;

  speed::KinematicLimits limits;
  double headway_s = 2.0;

  thermal::AmbientProfile ambient;
  thermal::ThermalState cabin_init;
  acmpc::AcRunConfig ac;

  vehicle::VehicleParams vehicle;
  split::Powertrain powertrain;
  double soc0 = 60.0;
  split::DpConfig dp = split::DpConfig::defaults();
  split::RuleBasedConfig rule;

  StageToggles stages;
  double cooldown_s = 80.0;  // excluded from comfort statistics

  void validate() const;
};

/// Parses a scenario document. Relative file references resolve against
/// `base_dir`.
Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json_text(const std::string& text, const std::filesystem::path& base_dir);

/// Parses "speed,ac,dp" style lists; unknown names are a usage error.
StageToggles parse_stages(const std::string& list);

}  // namespace hev
