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
#include "hev/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hev/errors.hpp"

namespace hev::io
{

namespace
{

std::string trim(std::string s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ','))
    out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& origin, std::size_t line)
{
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorKind::Io, origin + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

void line(std::ostringstream& out, std::initializer_list<double> values)
{
  bool first = true;
  for (double v : values)
  {
    if (!first)
      out << ',';
    out << format_number(v);
    first = false;
  }
  out << '\n';
}

}  // namespace

bool CsvTable::has(const std::string& name) const
{
  return std::find(header.begin(), header.end(), name) != header.end();
}

std::size_t CsvTable::column(const std::string& name) const
{
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw Error(ErrorKind::Io, "CSV column '" + name + "' not found");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::values(const std::string& name) const
{
  const std::size_t c = column(name);
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows)
    v.push_back(r[c]);
  return v;
}

CsvTable parse_csv(const std::string& text, const std::string& origin)
{
  CsvTable t;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw))
  {
    ++lineno;
    const std::string l = trim(raw);
    if (l.empty() || l[0] == '#')
      continue;
    auto cells = split(l);
    if (t.header.empty())
    {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw Error(ErrorKind::Io, origin + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(t.header.size()) + " fields");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells)
      row.push_back(parse_double(c, origin, lineno));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty())
    throw Error(ErrorKind::Io, origin + ": empty CSV");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path)
{
  return parse_csv(read_text(path), path.string());
}

std::string read_text(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out)
    throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string format_number(double v)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc())
    throw Error(ErrorKind::Io, "number formatting failed");
  return std::string(buf, ptr);
}

std::string trajectory_csv(const speed::Trajectory& tr)
{
  std::ostringstream out;
  out << "time,speed,position,accel\n";
  for (std::size_t i = 0; i < tr.size(); ++i)
    line(out, {tr.time_at(i), tr.speed[i], tr.position[i], tr.accel[i]});
  return out.str();
}

speed::Trajectory trajectory_from_csv(const CsvTable& t)
{
  const auto time = t.values("time");
  auto speeds = t.values("speed");
  if (time.size() < 2)
    throw Error(ErrorKind::Io, "trajectory needs at least two samples");
  // Written times carry rounding from t_start + k*dt; recover the step on a
  // nanosecond grid so a written trajectory reads back with the same dt.
  const double span = time.back() - time.front();
  const double dt = std::round(span / static_cast<double>(time.size() - 1) * 1e9) / 1e9;
  if (!(dt > 0))
    throw Error(ErrorKind::Io, "trajectory time must increase");
  for (std::size_t i = 1; i < time.size(); ++i)
    if (std::abs(time[i] - time.front() - dt * static_cast<double>(i)) > 1e-6)
      throw Error(ErrorKind::Io, "trajectory must be uniformly sampled");
  for (double v : speeds)
    if (v < 0)
      throw Error(ErrorKind::Io, "trajectory speed must be nonnegative");
  return speed::Trajectory::from_speeds(dt, time.front(), std::move(speeds));
}

std::string bsm_csv(std::span<const traffic::BsmRecord> records)
{
  std::ostringstream out;
  out << "time,vehicle_id,position,speed\n";
  for (const auto& r : records)
    line(out, {r.time_s, static_cast<double>(r.vehicle_id), r.position_m, r.speed_mps});
  return out.str();
}

std::vector<traffic::BsmRecord> bsm_from_csv(const CsvTable& t)
{
  const auto ct = t.column("time");
  const auto cid = t.column("vehicle_id");
  const auto cp = t.column("position");
  const auto cs = t.column("speed");
  std::vector<traffic::BsmRecord> out;
  for (const auto& r : t.rows)
  {
    if (r[cs] < 0)
      throw Error(ErrorKind::Io, "BSM speed must be nonnegative");
    out.push_back({static_cast<int>(r[cid]), r[ct], r[cp], r[cs]});
  }
  return out;
}

std::string ac_csv(const acmpc::AcLoadTrajectory& ac)
{
  std::ostringstream out;
  out << "time,t_cab,t_evap,w_bl,t_evap_sp,p_comp,p_bl,p_ac,bound\n";
  for (const auto& s : ac.steps)
    line(out, {s.time_s, s.state.cabin_c, s.state.evaporator_c, s.command.blower_kg_s,
               s.command.evap_setpoint_c, s.compressor_w, s.blower_w, s.ac_w, s.bound});
  return out.str();
}

std::string schedule_csv(const split::PowerSplitSchedule& s, double dt)
{
  std::ostringstream out;
  out << "time,mode,p_bat,p_eng,w_f,soc\n";
  for (std::size_t k = 0; k < s.steps.size(); ++k)
  {
    const auto& st = s.steps[k];
    line(out, {dt * static_cast<double>(k), static_cast<double>(static_cast<int>(st.mode)), st.p_bat,
               st.p_eng, st.fuel_g_s, st.soc});
  }
  return out.str();
}

vehicle::FuelMap fuel_map_from_csv(const CsvTable& t)
{
  const auto p = t.values("power_w");
  const auto w = t.values("omega_rad_s");
  const auto f = t.values("fuel_g_s");
  std::vector<vehicle::FuelMap::Point> pts;
  for (std::size_t i = 0; i < p.size(); ++i)
    pts.push_back({p[i], w[i], f[i]});
  return vehicle::FuelMap(std::move(pts));
}

thermal::AmbientProfile ambient_from_csv(const CsvTable& t)
{
  const auto time = t.values("time");
  const auto temp = t.values("temperature_c");
  const auto solar = t.values("solar_w");
  std::vector<thermal::AmbientProfile::Sample> s;
  for (std::size_t i = 0; i < time.size(); ++i)
    s.push_back({time[i], {temp[i], solar[i]}});
  return thermal::AmbientProfile(std::move(s));
}

}  // namespace hev::io
