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
#include "hev/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "hev/errors.hpp"

namespace hev::traffic
{

namespace
{

double positive_mod(double x, double m)
{
  double r = std::fmod(x, m);
  if (r < 0)
    r += m;
  return r;
}

}  // namespace

void SignalTiming::validate() const
{
  if (!(cycle_s > 0 && green_start_s >= 0 && green_start_s < cycle_s))
    throw Error(ErrorKind::Config, "signal green_start must lie in [0, cycle)");
  if (!(green_duration_s > 0 && green_duration_s <= cycle_s))
    throw Error(ErrorKind::Config, "signal green_duration must lie in (0, cycle]");
}

bool SignalTiming::is_green(double t) const
{
  return positive_mod(t - green_start_s, cycle_s) < green_duration_s;
}

GreenPhase SignalTiming::green_at_or_after(double t) const
{
  const double phase = positive_mod(t - green_start_s, cycle_s);
  double start = t - phase;
  if (phase >= green_duration_s)
    start += cycle_s;
  return {start, start + green_duration_s};
}

double SignalTiming::red_start_before(double t) const
{
  const double phase = positive_mod(t - green_start_s, cycle_s);
  return t - phase + green_duration_s;
}

void Intersection::validate() const
{
  signal.validate();
  if (!(stop_bar_m >= 0 && saturation_flow > 0 && jam_density > 0 && free_flow_speed > 0))
    throw Error(ErrorKind::Config, "intersection parameters out of range");
}

double shockwave_speed(double flow_a, double density_a, double flow_b, double density_b)
{
  const double dk = density_b - density_a;
  if (dk == 0.0)
    throw Error(ErrorKind::DegenerateShockwave, "shockwave between states of equal density");
  return (flow_b - flow_a) / dk;
}

double launch_travel_time(double distance, double accel, double v_max)
{
  if (distance <= 0)
    return 0.0;
  const double ramp = v_max * v_max / (2.0 * accel);
  if (distance <= ramp)
    return std::sqrt(2.0 * distance / accel);
  return v_max / accel + (distance - ramp) / v_max;
}

namespace
{

/// Time for a vehicle at speed v to cover d while accelerating toward v_free
/// and, when `stop` is set, braking to rest exactly at d.
double approach_time(double d, double v, double v_free, const QueueKinematics& k, bool stop)
{
  if (d <= 0)
    return 0.0;
  const double a = k.accel;
  const double b = k.decel;
  if (!stop)
  {
    if (v >= v_free)
      return d / v;
    const double ramp = (v_free * v_free - v * v) / (2.0 * a);
    if (d <= ramp)
      return (std::sqrt(v * v + 2.0 * a * d) - v) / a;
    return (v_free - v) / a + (d - ramp) / v_free;
  }
  const double braking = v * v / (2.0 * b);
  if (d <= braking)
    return 2.0 * d / v;
  if (v >= v_free)
    return (d - braking) / v + v / b;
  const double full = (v_free * v_free - v * v) / (2.0 * a) + v_free * v_free / (2.0 * b);
  if (d >= full)
    return (v_free - v) / a + (d - full) / v_free + v_free / b;
  const double peak = std::sqrt((d + v * v / (2.0 * a)) / (1.0 / (2.0 * a) + 1.0 / (2.0 * b)));
  return (peak - v) / a + peak / b;
}

}  // namespace

QueueForecast predict_queue(const Intersection& ix, std::span<const BsmRecord> bsms, double t0,
                            const QueueKinematics& kin)
{
  const double spacing = ix.jam_spacing();
  const double reaction = kin.launch_reaction_s;

  std::vector<BsmRecord> approaching;
  for (const auto& b : bsms)
    if (b.position_m < ix.stop_bar_m)
      approaching.push_back(b);
  // closest to the stop bar first
  std::sort(approaching.begin(), approaching.end(), [](const BsmRecord& a, const BsmRecord& b) {
    if (a.position_m != b.position_m)
      return a.position_m > b.position_m;
    return a.vehicle_id < b.vehicle_id;
  });

  struct Queued
  {
    double stop_time;
    double launch_time;
  };
  std::vector<Queued> queue;
  double serve_green = 0.0;

  for (const auto& veh : approaching)
  {
    const auto n = static_cast<double>(queue.size());
    const double slot = ix.stop_bar_m - n * spacing;
    const double to_slot = slot - veh.position_m;

    if (veh.speed_mps < kin.stopped_speed)
    {
      if (queue.empty())
        serve_green = ix.signal.green_at_or_after(t0).start;
      queue.push_back({t0, std::max(serve_green + (n + 1) * reaction, t0)});
      continue;
    }

    const double v = veh.speed_mps;
    if (queue.empty())
    {
      const double arrival =
          t0 + approach_time(ix.stop_bar_m - veh.position_m, v, ix.free_flow_speed, kin, false);
      if (ix.signal.is_green(arrival))
        continue;
      serve_green = ix.signal.green_at_or_after(arrival).start;
    }

    const double stop_time = t0 + approach_time(to_slot, v, ix.free_flow_speed, kin, true);

    const double launch = std::max(serve_green + (n + 1) * reaction, t0);
    if (stop_time < launch)
      queue.push_back({stop_time, launch});
  }

  QueueForecast f;
  f.t0 = t0;
  f.queued_vehicles = static_cast<int>(queue.size());
  if (queue.empty())
  {
    f.t3 = std::max(t0, ix.signal.green_at_or_after(t0).start);
    f.t1 = t0;
    f.t2 = f.t3;
    return f;
  }

  const auto count = queue.size();
  const Queued& tail = queue.back();
  f.q_max = static_cast<double>(count) * spacing;
  f.t1 = std::max(t0, tail.stop_time);
  f.t2 = std::max(f.t1, tail.launch_time);
  f.t3 = f.t2 + launch_travel_time(static_cast<double>(count - 1) * spacing, kin.accel,
                                   ix.free_flow_speed);

  // queue already standing at t0
  const auto standing = static_cast<double>(
      std::count_if(queue.begin(), queue.end(), [&](const Queued& q) { return q.stop_time <= t0; }));
  if (standing > 0 && !ix.signal.is_green(t0))
  {
    const double red_start = ix.signal.red_start_before(t0);
    if (t0 > red_start)
      f.w0 = -standing * spacing / (t0 - red_start);
  }
  if (f.t1 > t0)
    f.w1 = -(f.q_max - standing * spacing) / (f.t1 - t0);

  const double launch_span = tail.launch_time - queue.front().launch_time;
  if (count >= 2 && launch_span > 0)
    f.w2 = -static_cast<double>(count - 1) * spacing / launch_span;
  else
    f.w2 = shockwave_speed(0.0, ix.jam_density, ix.saturation_flow,
                           ix.saturation_flow / ix.free_flow_speed);
  if (f.t3 > f.t2)
    f.w3 = static_cast<double>(count - 1) * spacing / (f.t3 - f.t2);
  return f;
}

GreenWindow green_window(const QueueForecast& forecast, const SignalTiming& signal, double t0)
{
  const double ref = std::max(forecast.t3, t0);
  const GreenPhase phase = signal.green_at_or_after(ref);
  return {std::max(ref, phase.start), phase.end};
}

}  // namespace hev::traffic
