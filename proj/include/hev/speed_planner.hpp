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

#include <cstddef>
#include <vector>

#include "hev/traffic.hpp"

namespace hev::speed
{

/// Trigonometric approach profile. m, n, t_p and t_q come from calibrate_mn.
struct ProfileParams
{
  double v0 = 0.0;      // m/s
  double d_stop = 0.0;  // m
  double t_arr = 0.0;   // s, relative to the start of the profile
  double headway = 2.0; // s, saturation headway
  double m = 1.0;
  double n = 1.0;
  double t_p = 0.0;
  double t_q = 0.0;

  double mean_speed() const { return d_stop / t_arr; }
  double speed_offset() const { return mean_speed() - v0; }
  double cruise_speed() const { return mean_speed() + speed_offset() * (m / n); }
};

enum class StrategyKind
{
  SlowDown,
  SpeedUp,
  Cruise,
  Stop,
};

const char* to_string(StrategyKind kind);

struct KinematicLimits
{
  double a_max = 2.5;     // m/s^2
  double a_min = -3.0;    // m/s^2
  double jerk_max = 2.0;  // m/s^3
};

/// Uniformly sampled speed trace. position is the cumulative trapezoidal
/// integral of speed (starting at 0); accel is the forward difference of speed
/// with the last entry held at zero.
struct Trajectory
{
  double dt = 0.1;
  double t_start = 0.0;
  std::vector<double> speed;
  std::vector<double> position;
  std::vector<double> accel;

  std::size_t size() const { return speed.size(); }
  double duration() const { return size() > 1 ? dt * static_cast<double>(size() - 1) : 0.0; }
  double time_at(std::size_t i) const { return t_start + dt * static_cast<double>(i); }

  static Trajectory from_speeds(double dt, double t_start, std::vector<double> speeds);
  /// Appends `next`, dropping its first sample (shared with our last one).
  void append(const Trajectory& next);
};

struct Calibration
{
  double m;
  double n;
  double t_p;
  double t_q;
};

double trig_speed(double t, const ProfileParams& p);

Calibration calibrate_mn(const ProfileParams& p, double a_max, double a_min, double jerk_max);

/// Builds a calibrated profile for the given boundary conditions.
ProfileParams make_profile(double v0, double d_stop, double t_arr, const KinematicLimits& limits);

constexpr double kMinCruiseRatio = 0.7;

StrategyKind select_strategy(const traffic::GreenWindow& window, double v0, double d_stop,
                             double speed_limit, double t_now);

struct PlanRequest
{
  traffic::GreenWindow window;
  double v0 = 0.0;
  double d_stop = 0.0;
  double speed_limit = 13.9;
  double headway = 2.0;
  double t_now = 0.0;
  KinematicLimits limits;
  double dt = 0.1;
  double stop_gap = 2.0;  // standstill point ahead of the stop bar, m
};

struct Plan
{
  StrategyKind strategy = StrategyKind::Cruise;
  Trajectory trajectory;
  double arrival_time = 0.0;  // absolute
};

Plan plan_trajectory(const PlanRequest& request);

/// Plans a given strategy, bypassing selection.
Plan plan_with_strategy(const PlanRequest& request, StrategyKind kind);

/// Raised-cosine acceleration from v0 to v_target, then cruise, covering
/// `distance`. Used for unsignalized stretches.
Trajectory free_drive(double v0, double v_target, double distance, double t_start,
                      const KinematicLimits& limits, double dt);

}  // namespace hev::speed
