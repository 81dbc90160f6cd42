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
#include <span>
#include <vector>

#include "hev/traffic.hpp"

namespace hev::traffic
{

struct Corridor
{
  double length_m = 1000.0;
  double speed_limit = 13.9;  // m/s
  std::vector<Intersection> intersections;  // ordered by stop bar

  void validate() const;
};

struct IdmParams
{
  double max_accel = 1.5;     // m/s^2
  double comfort_decel = 2.0; // m/s^2
  double min_gap = 2.0;       // m
  double time_headway = 1.5;  // s
  double exponent = 4.0;
  double max_decel = 6.0;     // beyond this a driver runs the signal instead of stopping
  double vehicle_length = 5.0;

  double acceleration(double v, double v_desired, double gap, double dv) const;
};

struct Arrival
{
  int vehicle_id = 0;
  double entry_time_s = 0.0;
  double entry_speed = 0.0;
};

/// Exponential headways with a floor, from a seeded generator.
std::vector<Arrival> scripted_arrivals(std::uint64_t seed, double rate_veh_s, double t_begin,
                                       double t_end, double min_headway_s, double entry_speed,
                                       int first_id = 1);

/// Single-lane IDM simulation of background traffic, sampled every dt.
class Microsim
{
public:
  Microsim(const Corridor& corridor, std::vector<Arrival> arrivals, const IdmParams& idm = {},
           double dt = 0.1);

  void run_until(double t_end);

  double dt() const { return dt_; }
  double time() const { return static_cast<double>(frames_.size() - 1) * dt_; }
  /// Vehicles on the corridor at the last frame at or before t.
  std::span<const BsmRecord> frame_at(double t) const;

private:
  struct Vehicle
  {
    int id;
    double x;
    double v;
  };

  void step();
  double signal_gap(double x, double v, double t) const;

  Corridor corridor_;
  std::vector<Arrival> pending_;
  IdmParams idm_;
  double dt_;
  std::size_t next_arrival_ = 0;
  std::vector<Vehicle> active_;  // front-most first
  std::vector<std::vector<BsmRecord>> frames_;
};

/// Distance to the stop bar a driver must respect at time t, or +inf when the
/// signal ahead is green or cannot be stopped for.
double red_light_gap(const Corridor& corridor, const IdmParams& idm, double x, double v, double t);

/// Human-driver baseline: the ego follows IDM behind the background traffic
/// and stops at red lights. Returns speeds sampled every dt from entry until
/// the corridor end is reached.
std::vector<double> drive_idm(const Corridor& corridor, const Microsim& traffic, const Arrival& ego,
                              const IdmParams& idm = {});

}  // namespace hev::traffic
