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
#include "hev/speed_planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "hev/errors.hpp"

namespace hev::speed
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxSamples = 2'000'000;

/// Duration of a raised-cosine speed change of magnitude dv under the limits.
double transition_time(double dv, double accel_limit, double jerk_max)
{
  dv = std::abs(dv);
  if (dv == 0.0)
    return 0.0;
  return std::max(kPi * dv / (2.0 * accel_limit), kPi * std::sqrt(dv / (2.0 * jerk_max)));
}

double raised_cosine(double from, double to, double t, double duration)
{
  if (duration <= 0.0 || t >= duration)
    return to;
  if (t <= 0.0)
    return from;
  return from + (to - from) * 0.5 * (1.0 - std::cos(kPi * t / duration));
}

/// Samples speed_at(k*dt) until the trapezoidal distance reaches `distance`.
Trajectory sample_until(const std::function<double(double)>& speed_at, double distance, double dt,
                        double t_start)
{
  std::vector<double> speeds{speed_at(0.0)};
  double pos = 0.0;
  for (std::size_t k = 1; pos < distance; ++k)
  {
    if (k > kMaxSamples)
      throw Error(ErrorKind::InfeasibleProfile, "profile never reaches the stop bar");
    const double v = speed_at(dt * static_cast<double>(k));
    pos += 0.5 * dt * (speeds.back() + v);
    speeds.push_back(v);
  }
  return Trajectory::from_speeds(dt, t_start, std::move(speeds));
}

double snap_duration(double duration, double dt, double limit)
{
  double n = std::ceil(duration / dt - 1e-9);
  if (n * dt > limit + 1e-9)
    n = std::floor(duration / dt + 1e-9);
  return std::max(n, 1.0) * dt;
}

}  // namespace

const char* to_string(StrategyKind kind)
{
  switch (kind)
  {
    case StrategyKind::SlowDown: return "slow_down";
    case StrategyKind::SpeedUp: return "speed_up";
    case StrategyKind::Cruise: return "cruise";
    case StrategyKind::Stop: return "stop";
  }
  return "unknown";
}

Trajectory Trajectory::from_speeds(double dt, double t_start, std::vector<double> speeds)
{
  Trajectory tr;
  tr.dt = dt;
  tr.t_start = t_start;
  tr.speed = std::move(speeds);
  const std::size_t n = tr.speed.size();
  tr.position.assign(n, 0.0);
  tr.accel.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
  {
    tr.position[i] = tr.position[i - 1] + 0.5 * dt * (tr.speed[i - 1] + tr.speed[i]);
    tr.accel[i - 1] = (tr.speed[i] - tr.speed[i - 1]) / dt;
  }
  return tr;
}

void Trajectory::append(const Trajectory& next)
{
  if (next.size() == 0)
    return;
  if (size() == 0)
  {
    *this = next;
    return;
  }
  const double offset = position.back();
  accel.back() = next.size() > 1 ? next.accel.front() : 0.0;
  for (std::size_t i = 1; i < next.size(); ++i)
  {
    speed.push_back(next.speed[i]);
    position.push_back(offset + next.position[i]);
    accel.push_back(next.accel[i]);
  }
}

double trig_speed(double t, const ProfileParams& p)
{
  if (!(t >= 0.0 && t <= p.t_arr))
    throw Error(ErrorKind::OutOfDomain, "time outside the profile horizon");
  const double vp = p.mean_speed();
  const double vr = p.speed_offset();
  if (t < p.t_p)
    return p.v0 + vr * (1.0 - std::cos(p.m * t));
  if (t < p.t_q)
    return vp - vr * (p.m / p.n) * std::cos(p.n * (t + kPi / (2.0 * p.n) - p.t_p));
  return vp + vr * (p.m / p.n);
}

Calibration calibrate_mn(const ProfileParams& p, double a_max, double a_min, double jerk_max)
{
  if (!(a_max > 0 && a_min < 0 && jerk_max > 0))
    throw Error(ErrorKind::InfeasibleProfile, "kinematic limits must satisfy a_max > 0 > a_min, jerk > 0");
  if (!(p.d_stop > 0 && p.t_arr > 0 && p.v0 >= 0))
    throw Error(ErrorKind::InfeasibleProfile, "profile needs positive distance and horizon");

  const double vr = p.speed_offset();
  if (std::abs(vr) < 1e-12)
    return {1.0, 1.0, 0.0, 0.0};

  const double amp = std::abs(vr);
  const double accel_limit = vr > 0 ? a_max : -a_min;
  const double m = std::min(accel_limit / amp, std::sqrt(jerk_max / amp));

  // Distance closure: with c = m/n the profile covers d_stop iff
  // (1 - pi/2) c^2 + (m t_arr - pi/2) c - 1 = 0. Take the small root.
  const double b = m * p.t_arr - kPi / 2.0;
  const double disc = b * b + 4.0 * (1.0 - kPi / 2.0);
  if (b <= 0 || disc < 0)
    throw Error(ErrorKind::InfeasibleProfile, "horizon too short for the kinematic limits");
  const double c = 2.0 / (b + std::sqrt(disc));
  const double n = m / c;
  const double t_p = kPi / (2.0 * m);
  const double t_q = t_p + kPi / (2.0 * n);
  if (!(t_q < p.t_arr))
    throw Error(ErrorKind::InfeasibleProfile, "no room for a cruise segment");
  if (p.mean_speed() + vr * c < 0)
    throw Error(ErrorKind::InfeasibleProfile, "profile would reverse");
  return {m, n, t_p, t_q};
}

ProfileParams make_profile(double v0, double d_stop, double t_arr, const KinematicLimits& limits)
{
  ProfileParams p;
  p.v0 = v0;
  p.d_stop = d_stop;
  p.t_arr = t_arr;
  const Calibration c = calibrate_mn(p, limits.a_max, limits.a_min, limits.jerk_max);
  p.m = c.m;
  p.n = c.n;
  p.t_p = c.t_p;
  p.t_q = c.t_q;
  return p;
}

StrategyKind select_strategy(const traffic::GreenWindow& w, double v0, double d_stop,
                             double speed_limit, double t_now)
{
  const double min_cruise = kMinCruiseRatio * speed_limit;
  if (v0 > 0 && v0 >= min_cruise)
  {
    const double arrival = t_now + d_stop / v0;
    if (arrival >= w.earliest && arrival <= w.latest)
      return StrategyKind::Cruise;
  }
  if (w.latest <= t_now)
    return StrategyKind::Stop;

  // Average speeds that land in the window: [d/(latest-t), d/(earliest-t)].
  const double v_slowest = d_stop / (w.latest - t_now);
  const double v_fastest =
      w.earliest > t_now ? d_stop / (w.earliest - t_now) : std::numeric_limits<double>::infinity();

  if (v_slowest <= speed_limit && std::min(v_fastest, speed_limit) > v0)
    return StrategyKind::SpeedUp;
  if (v_slowest < v0 && std::min(v_fastest, v0) >= min_cruise)
    return StrategyKind::SlowDown;
  return StrategyKind::Stop;
}

namespace
{

Plan plan_trig(const PlanRequest& r, StrategyKind kind)
{
  const double min_cruise = kMinCruiseRatio * r.speed_limit;
  const double e = r.window.earliest;
  const double l = r.window.latest;
  double target;
  if (kind == StrategyKind::SpeedUp)
    target = std::min(std::max(e + r.headway, r.t_now + r.d_stop / r.speed_limit), l);
  else
    target = std::max(std::min({e + r.headway, l, r.t_now + r.d_stop / min_cruise}), e);

  ProfileParams p = make_profile(r.v0, r.d_stop, snap_duration(target - r.t_now, r.dt, l - r.t_now),
                                 r.limits);
  // keep the cruise segment inside [0.7 v_lim, v_lim] when the window allows it
  for (int guard = 0; guard < 200; ++guard)
  {
    double next = target;
    if (kind == StrategyKind::SpeedUp && p.cruise_speed() > r.speed_limit && target + 0.5 <= l)
      next = target + 0.5;
    else if (kind == StrategyKind::SlowDown && p.cruise_speed() < min_cruise && target - 0.5 >= e)
      next = target - 0.5;
    if (next == target)
      break;
    target = next;
    p = make_profile(r.v0, r.d_stop, snap_duration(target - r.t_now, r.dt, l - r.t_now), r.limits);
  }

  const auto steps = static_cast<std::size_t>(std::llround(p.t_arr / r.dt));
  std::vector<double> speeds(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k)
    speeds[k] = trig_speed(std::min(r.dt * static_cast<double>(k), p.t_arr), p);

  Plan plan;
  plan.strategy = kind;
  plan.trajectory = Trajectory::from_speeds(r.dt, r.t_now, std::move(speeds));
  plan.arrival_time = r.t_now + plan.trajectory.duration();
  return plan;
}

Plan plan_stop(const PlanRequest& r)
{
  const double v0 = r.v0;
  const double launch_speed = kMinCruiseRatio * r.speed_limit;
  const double stop_point = r.d_stop > r.stop_gap ? r.d_stop - r.stop_gap : 0.5 * r.d_stop;
  const double decel_limit = -r.limits.a_min;

  // Distance used by accelerating from v0 to v and then stopping from v.
  auto approach_distance = [&](double v) {
    const double ta = v > v0 ? transition_time(v - v0, r.limits.a_max, r.limits.jerk_max) : 0.0;
    const double td = transition_time(v, decel_limit, r.limits.jerk_max);
    return 0.5 * (v0 + v) * ta + 0.5 * v * td;
  };

  // Approach speed: at least v0, brought up to the minimum cruise speed when
  // the distance allows.
  double approach = std::max(v0, launch_speed);
  if (approach_distance(approach) > stop_point)
  {
    if (v0 > 0 && approach_distance(v0) > stop_point + 1e-9)
      throw Error(ErrorKind::InfeasibleProfile, "cannot stop before the stop bar");
    double lo = v0;
    double hi = approach;
    for (int i = 0; i < 60; ++i)
    {
      const double mid = 0.5 * (lo + hi);
      (approach_distance(mid) <= stop_point ? lo : hi) = mid;
    }
    approach = lo;
  }

  const double accel_time =
      approach > v0 ? transition_time(approach - v0, r.limits.a_max, r.limits.jerk_max) : 0.0;
  const double remaining = stop_point - 0.5 * (v0 + approach) * accel_time;

  double cruise_time = 0.0;
  double decel_time = 0.0;
  if (approach > 0)
  {
    // Stretch the deceleration so the vehicle comes to rest about a second
    // before the window opens, within comfort and distance limits.
    const double comfortable = transition_time(approach, decel_limit, r.limits.jerk_max);
    const double gentlest = 2.0 * remaining / approach;
    const double available = r.window.earliest - r.t_now - 1.0 - accel_time;
    decel_time = std::clamp(2.0 * (available - remaining / approach), comfortable,
                            std::max(comfortable, gentlest));
    cruise_time = std::max(0.0, (remaining - 0.5 * approach * decel_time) / approach);
  }
  const double braking_at = accel_time + cruise_time;
  const double stopped_at = braking_at + decel_time;
  const double idle_until =
      std::max(stopped_at, std::ceil((r.window.earliest - r.t_now) / r.dt - 1e-9) * r.dt);
  const double launch_time = transition_time(launch_speed, r.limits.a_max, r.limits.jerk_max);

  auto speed_at = [&](double t) {
    if (t < accel_time)
      return raised_cosine(v0, approach, t, accel_time);
    if (t < braking_at)
      return approach;
    if (t < stopped_at)
      return raised_cosine(approach, 0.0, t - braking_at, decel_time);
    if (t < idle_until)
      return 0.0;
    return raised_cosine(0.0, launch_speed, t - idle_until, launch_time);
  };

  Plan plan;
  plan.strategy = StrategyKind::Stop;
  plan.trajectory = sample_until(speed_at, r.d_stop, r.dt, r.t_now);
  plan.arrival_time = r.t_now + plan.trajectory.duration();
  return plan;
}

Plan plan_cruise(const PlanRequest& r)
{
  const double steps = std::max(1.0, std::round(r.d_stop / (r.v0 * r.dt)));
  const double v = r.d_stop / (steps * r.dt);
  Plan plan;
  plan.strategy = StrategyKind::Cruise;
  plan.trajectory = Trajectory::from_speeds(
      r.dt, r.t_now, std::vector<double>(static_cast<std::size_t>(steps) + 1, v));
  plan.arrival_time = r.t_now + plan.trajectory.duration();
  return plan;
}

}  // namespace

Plan plan_with_strategy(const PlanRequest& r, StrategyKind kind)
{
  if (!(r.d_stop > 0))
    throw Error(ErrorKind::InfeasibleProfile, "distance to the stop bar must be positive");
  if (r.window.earliest > r.window.latest)
    throw Error(ErrorKind::InfeasibleProfile, "invalid green window");
  switch (kind)
  {
    case StrategyKind::Cruise:
      if (!(r.v0 > 0))
        throw Error(ErrorKind::InfeasibleProfile, "cannot cruise from standstill");
      return plan_cruise(r);
    case StrategyKind::SpeedUp:
    case StrategyKind::SlowDown:
      return plan_trig(r, kind);
    case StrategyKind::Stop:
      return plan_stop(r);
  }
  throw Error(ErrorKind::InfeasibleProfile, "unknown strategy");
}

Plan plan_trajectory(const PlanRequest& r)
{
  return plan_with_strategy(r, select_strategy(r.window, r.v0, r.d_stop, r.speed_limit, r.t_now));
}

Trajectory free_drive(double v0, double v_target, double distance, double t_start,
                      const KinematicLimits& limits, double dt)
{
  if (!(v_target > 0))
    throw Error(ErrorKind::InfeasibleProfile, "free drive needs a positive target speed");
  const double limit = v_target >= v0 ? limits.a_max : -limits.a_min;
  const double duration = transition_time(v_target - v0, limit, limits.jerk_max);
  return sample_until([&](double t) { return raised_cosine(v0, v_target, t, duration); }, distance,
                      dt, t_start);
}

}  // namespace hev::speed
