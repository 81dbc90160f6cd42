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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hev/ac_mpc.hpp"
#include "hev/cabin_thermal.hpp"
#include "hev/power_split.hpp"
#include "hev/speed_planner.hpp"
#include "hev/traffic.hpp"
#include "hev/vehicle_model.hpp"

namespace hev::io
{

/// Numeric CSV with a header row.
struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  bool has(const std::string& name) const;
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text, const std::string& origin);
CsvTable read_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& content);

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

std::string trajectory_csv(const speed::Trajectory& tr);
speed::Trajectory trajectory_from_csv(const CsvTable& t);

std::string bsm_csv(std::span<const traffic::BsmRecord> records);
std::vector<traffic::BsmRecord> bsm_from_csv(const CsvTable& t);

std::string ac_csv(const acmpc::AcLoadTrajectory& ac);
std::string schedule_csv(const split::PowerSplitSchedule& s, double dt);

vehicle::FuelMap fuel_map_from_csv(const CsvTable& t);
thermal::AmbientProfile ambient_from_csv(const CsvTable& t);

}  // namespace hev::io
