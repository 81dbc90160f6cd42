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

#include <span>
#include <vector>

namespace hev::traffic
{

struct GreenPhase
{
  double start;
  double end;
};

/// Fixed-time signal. Green phases are [k*cycle + green_start,
/// k*cycle + green_start + green_duration) in absolute time.
struct SignalTiming
{
  double cycle_s = 90.0;
  double green_start_s = 0.0;
  double green_duration_s = 40.0;

  void validate() const;
  bool is_green(double t) const;
  /// The green phase containing t, or the first one starting after t.
  GreenPhase green_at_or_after(double t) const;
  /// Start of the most recent red phase at or before t (t must be in red).
  double red_start_before(double t) const;
};

struct Intersection
{
  int id = 0;
  double stop_bar_m = 0.0;
  SignalTiming signal;
  double saturation_flow = 0.5;   // veh/s
  double jam_density = 0.15;      // veh/m
  double free_flow_speed = 13.9;  // m/s

  void validate() const;
  double jam_spacing() const { return 1.0 / jam_density; }
};

struct BsmRecord
{
  int vehicle_id = 0;
  double time_s = 0.0;
  double position_m = 0.0;
  double speed_mps = 0.0;
};

struct QueueForecast
{
  double t0 = 0.0;
  double t1 = 0.0;  // max queue reached
  double t2 = 0.0;  // queue tail launches
  double t3 = 0.0;  // queue tail departs the stop bar
  double q_max = 0.0;
  double w0 = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  double w3 = 0.0;
  int queued_vehicles = 0;
};

struct GreenWindow
{
  double earliest = 0.0;
  double latest = 0.0;
};

/// Per-vehicle stop and launch kinematics applied before fitting wave fronts.
struct QueueKinematics
{
  double decel = 2.5;                // m/s^2, stopping
  double accel = 2.0;                // m/s^2, launch
  double launch_reaction_s = 1.0;    // per queue position
  double stopped_speed = 0.1;        // below this a BSM counts as stopped
  double sample_period_s = 0.1;
};

/// LWR interface speed between two traffic states.
double shockwave_speed(double flow_a, double density_a, double flow_b, double density_b);

/// Time to cover `distance` from standstill at constant acceleration, capped at v_max.
double launch_travel_time(double distance, double accel, double v_max);

QueueForecast predict_queue(const Intersection& intersection, std::span<const BsmRecord> bsms,
                            double t0, const QueueKinematics& kin = {});

GreenWindow green_window(const QueueForecast& forecast, const SignalTiming& signal, double t0);

}  // namespace hev::traffic
