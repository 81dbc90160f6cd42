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
#include "hev/microsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hev/errors.hpp"

namespace hev::traffic
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxTrip = 3600.0;

double uniform01(std::mt19937_64& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t frame_index(double t, double dt) { return static_cast<std::size_t>(std::floor(t / dt + 1e-9)); }

}  // namespace

void Corridor::validate() const
{
  if (!(length_m > 0 && speed_limit > 0))
    throw Error(ErrorKind::Config, "corridor length and speed limit must be positive");
  double last = -kInf;
  for (const auto& in : intersections)
  {
    in.validate();
    if (!(in.stop_bar_m > last) || in.stop_bar_m >= length_m)
      throw Error(ErrorKind::Config, "stop bars must be increasing and inside the corridor");
    last = in.stop_bar_m;
  }
}

double IdmParams::acceleration(double v, double v_desired, double gap, double dv) const
{
  const double free = 1.0 - std::pow(v / v_desired, exponent);
  if (!std::isfinite(gap))
    return max_accel * free;
  const double desired =
      min_gap + std::max(0.0, v * time_headway + v * dv / (2.0 * std::sqrt(max_accel * comfort_decel)));
  const double s = std::max(gap, 0.1);
  return max_accel * (free - (desired / s) * (desired / s));
}

std::vector<Arrival> scripted_arrivals(std::uint64_t seed, double rate_veh_s, double t_begin, double t_end,
                                       double min_headway_s, double entry_speed, int first_id)
{
  if (!(rate_veh_s > 0) || min_headway_s < 0)
    throw Error(ErrorKind::Config, "arrival rate must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Arrival> out;
  double t = t_begin;
  int id = first_id;
  while (true)
  {
    t += std::max(min_headway_s, -std::log(1.0 - uniform01(rng)) / rate_veh_s);
    if (t >= t_end)
      break;
    out.push_back({id++, t, entry_speed});
  }
  return out;
}

double red_light_gap(const Corridor& corridor, const IdmParams& idm, double x, double v, double t)
{
  for (const auto& in : corridor.intersections)
  {
    if (in.stop_bar_m <= x)
      continue;
    if (in.signal.is_green(t))
      return kInf;
    const double dist = in.stop_bar_m - x;
    if (v * v / (2.0 * dist) > idm.max_decel)
      return kInf;
    return dist;
  }
  return kInf;
}

Microsim::Microsim(const Corridor& corridor, std::vector<Arrival> arrivals, const IdmParams& idm, double dt)
  : corridor_(corridor), pending_(std::move(arrivals)), idm_(idm), dt_(dt)
{
  corridor_.validate();
  if (!(dt_ > 0))
    throw Error(ErrorKind::Config, "simulation step must be positive");
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const Arrival& a, const Arrival& b) { return a.entry_time_s < b.entry_time_s; });
  frames_.emplace_back();
}

double Microsim::signal_gap(double x, double v, double t) const
{
  return red_light_gap(corridor_, idm_, x, v, t);
}

void Microsim::step()
{
  const double t = time();
  std::vector<Vehicle> next = active_;
  for (std::size_t i = 0; i < active_.size(); ++i)
  {
    const auto& me = active_[i];
    double gap = signal_gap(me.x, me.v, t);
    double dv = me.v;
    if (i > 0)
    {
      const auto& lead = active_[i - 1];
      const double g = lead.x - me.x - idm_.vehicle_length;
      if (g < gap)
      {
        gap = g;
        dv = me.v - lead.v;
      }
    }
    const double a = idm_.acceleration(me.v, corridor_.speed_limit, gap, dv);
    const double v1 = std::max(0.0, me.v + a * dt_);
    next[i].v = v1;
    next[i].x = me.x + 0.5 * (me.v + v1) * dt_;
  }
  active_ = std::move(next);
  std::erase_if(active_, [&](const Vehicle& v) { return v.x > corridor_.length_m; });

  const double now = t + dt_;
  while (next_arrival_ < pending_.size() && pending_[next_arrival_].entry_time_s <= now + 1e-9)
  {
    // Entry waits until the tail of the platoon has cleared the entrance.
    if (!active_.empty() && active_.back().x < idm_.vehicle_length + idm_.min_gap)
      break;
    const auto& a = pending_[next_arrival_++];
    double v = a.entry_speed;
    if (!active_.empty())
      v = std::min(v, active_.back().v + 0.5 * (active_.back().x - idm_.vehicle_length));
    active_.push_back({a.vehicle_id, 0.0, std::max(0.0, v)});
  }

  std::vector<BsmRecord> frame;
  frame.reserve(active_.size());
  for (const auto& v : active_)
    frame.push_back({v.id, now, v.x, v.v});
  frames_.push_back(std::move(frame));
}

void Microsim::run_until(double t_end)
{
  while (time() + 0.5 * dt_ < t_end)
    step();
}

std::span<const BsmRecord> Microsim::frame_at(double t) const
{
  if (t < 0)
    return {};
  const std::size_t i = std::min(frame_index(t, dt_), frames_.size() - 1);
  return frames_[i];
}

std::vector<double> drive_idm(const Corridor& corridor, const Microsim& traffic, const Arrival& ego,
                              const IdmParams& idm)
{
  const double dt = traffic.dt();
  std::vector<double> speeds{ego.entry_speed};
  double x = 0.0;
  double v = ego.entry_speed;
  double t = ego.entry_time_s;
  while (x < corridor.length_m)
  {
    if (t - ego.entry_time_s > kMaxTrip)
      throw Error(ErrorKind::InfeasibleProfile, "baseline driver did not reach the corridor end");
    double gap = red_light_gap(corridor, idm, x, v, t);
    double dv = v;
    // Nearest background vehicle ahead.
    for (const auto& b : traffic.frame_at(t))
    {
      if (b.position_m <= x)
        continue;
      const double g = b.position_m - x - idm.vehicle_length;
      if (g < gap)
      {
        gap = g;
        dv = v - b.speed_mps;
      }
    }
    const double a = idm.acceleration(v, corridor.speed_limit, gap, dv);
    const double v1 = std::max(0.0, v + a * dt);
    x += 0.5 * (v + v1) * dt;
    v = v1;
    t += dt;
    speeds.push_back(v);
  }
  return speeds;
}

}  // namespace hev::traffic
