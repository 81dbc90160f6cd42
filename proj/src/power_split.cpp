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
#include "hev/power_split.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "hev/errors.hpp"

namespace hev::split
{

using vehicle::EngineMode;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBalanceTol = 1e-6;  // W
constexpr double kSocTol = 1e-9;      // percent

template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn)
{
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n));
  if (threads == 1)
  {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t)
  {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi)
      break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i)
        fn(i);
    });
  }
  for (auto& th : pool)
    th.join();
}

void check_strictly_increasing(const std::vector<double>& v, const char* what)
{
  if (v.size() < 2)
    throw Error(ErrorKind::Config, std::string(what) + " needs at least two points");
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    if (!std::isfinite(v[i]))
      throw Error(ErrorKind::Config, std::string(what) + " has a non-finite entry");
    if (i > 0 && !(v[i] > v[i - 1]))
      throw Error(ErrorKind::Config, std::string(what) + " must be strictly increasing");
  }
}

}  // namespace

void DemandSeries::validate() const
{
  if (ac_w.size() != traction_w.size() || ac_on.size() != traction_w.size())
    throw Error(ErrorKind::Usage, "demand series must have equal length");
  for (std::size_t k = 0; k < traction_w.size(); ++k)
    if (!std::isfinite(traction_w[k]) || !std::isfinite(ac_w[k]) || ac_w[k] < 0)
      throw Error(ErrorKind::Usage, "demand series has an invalid entry at step " + std::to_string(k));
}

std::vector<double> DpConfig::uniform_soc_grid(double lo, double hi, double spacing)
{
  if (!(spacing > 0) || !(hi > lo))
    throw Error(ErrorKind::Config, "invalid SOC grid specification");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / spacing)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + spacing * static_cast<double>(i);
  g.back() = hi;
  return g;
}

std::vector<double> DpConfig::uniform_pbat_grid(double charge_max_w, double discharge_max_w,
                                                std::size_t levels)
{
  if (levels < 2)
    throw Error(ErrorKind::Config, "battery power grid needs at least two levels");
  std::vector<double> g(levels);
  for (std::size_t i = 0; i < levels; ++i)
    g[i] = -charge_max_w +
           (charge_max_w + discharge_max_w) * static_cast<double>(i) / static_cast<double>(levels - 1);
  g.back() = discharge_max_w;
  return g;
}

DpConfig DpConfig::defaults()
{
  DpConfig c;
  c.soc_grid = uniform_soc_grid(30.0, 90.0, 0.25);
  c.pbat_grid = uniform_pbat_grid(25000.0, 25000.0, 21);
  return c;
}

void DpConfig::validate(const vehicle::SocModel& model) const
{
  check_strictly_increasing(soc_grid, "SOC grid");
  check_strictly_increasing(pbat_grid, "battery power grid");
  if (soc_grid.front() < model.soc_min || soc_grid.back() > model.soc_max)
    throw Error(ErrorKind::Config, "SOC grid must lie within the admissible SOC range");
  if (pbat_grid.front() > 0 || pbat_grid.back() < 0)
    throw Error(ErrorKind::Config, "battery power grid must span zero");
  if (!(terminal_weight >= 0))
    throw Error(ErrorKind::Config, "terminal weight must be nonnegative");
}

void RuleBasedConfig::validate() const
{
  if (!(soc_low < soc_high) || soc_low < 30.0 || soc_high > 90.0)
    throw Error(ErrorKind::Config, "rule-based SOC band must satisfy 30 <= low < high <= 90");
  if (!(engine_level_w > 0) || engine_on_threshold_w < 0 || !(charge_limit_w > 0) ||
      !(discharge_limit_w > 0))
    throw Error(ErrorKind::Config, "rule-based powers must be positive");
}

double PowerSplitSchedule::fuel_grams() const
{
  double g = 0.0;
  for (const auto& s : steps)
    g += s.fuel_g_s;
  return g;
}

double ValueTable::at(std::size_t k, double soc) const
{
  const auto& v = value[k];
  if (soc < soc_grid.front() || soc > soc_grid.back())
    return kInf;
  auto it = std::upper_bound(soc_grid.begin(), soc_grid.end(), soc);
  std::size_t hi = it == soc_grid.end() ? soc_grid.size() - 1 : static_cast<std::size_t>(it - soc_grid.begin());
  const std::size_t lo = hi - 1;
  const double w = (soc - soc_grid[lo]) / (soc_grid[hi] - soc_grid[lo]);
  if (w <= 0.0)
    return v[lo];
  if (w >= 1.0)
    return v[hi];
  if (std::isinf(v[lo]) || std::isinf(v[hi]))
    return kInf;
  return (1.0 - w) * v[lo] + w * v[hi];
}

double terminal_cost(double soc, double target, const DpConfig& cfg)
{
  const double shortfall = std::max(0.0, target - soc);
  if (cfg.hard_terminal)
    return shortfall > kSocTol ? kInf : 0.0;
  return cfg.terminal_weight * shortfall * shortfall;
}

std::vector<Candidate> candidates(double p_trac, double p_ac, const DpConfig& cfg,
                                  const vehicle::FuelMap& map)
{
  std::vector<Candidate> out;
  out.reserve(cfg.pbat_grid.size() + 1);

  // Engine off: the battery carries the load; braking beyond the charge
  // limit goes to the friction brakes.
  {
    const double p_mg = std::max(p_trac, -cfg.charge_limit_w() - p_ac);
    const double p_bat = p_mg + p_ac;
    if (p_bat <= cfg.discharge_limit_w())
      out.push_back({EngineMode::Off, p_bat, 0.0, p_mg, p_trac - p_mg, 0.0});
  }
  for (double p_bat : cfg.pbat_grid)
  {
    const double p_mg = p_bat - p_ac;
    const double p_eng = p_trac - p_mg;
    if (p_eng > 0.0 && p_eng >= map.min_power() && p_eng <= map.max_power())
      out.push_back({EngineMode::On, p_bat, p_eng, p_mg, 0.0, map.fuel_rate(p_eng)});
  }
  return out;
}

DpResult dp_solve(const DemandSeries& demand, double soc0, const DpConfig& cfg, const Powertrain& pt)
{
  demand.validate();
  pt.soc.validate();
  cfg.validate(pt.soc);
  if (!(soc0 >= cfg.soc_grid.front() && soc0 <= cfg.soc_grid.back()))
    throw Error(ErrorKind::Usage, "initial SOC lies outside the SOC grid");

  const std::size_t horizon = demand.size();
  const std::size_t nodes = cfg.soc_grid.size();
  const double target = cfg.soc_target.value_or(soc0);
  const double dt = pt.soc.dt;

  DpResult result;
  ValueTable& table = result.table;
  table.soc_grid = cfg.soc_grid;
  table.value.assign(horizon + 1, std::vector<double>(nodes, kInf));
  for (std::size_t j = 0; j < nodes; ++j)
    table.value[horizon][j] = terminal_cost(cfg.soc_grid[j], target, cfg);

  std::vector<std::vector<Candidate>> options(horizon);
  for (std::size_t k = 0; k < horizon; ++k)
  {
    options[k] = candidates(demand.traction_w[k], demand.ac_w[k], cfg, pt.fuel);
    if (options[k].empty())
      throw InfeasibleInstance(k, "no admissible power split at step " + std::to_string(k));
  }

  // Best admissible candidate from `soc` at stage k; returns its index and
  // the stage-plus-continuation cost.
  auto best_from = [&](std::size_t k, double soc) {
    double best = kInf;
    std::size_t arg = options[k].size();
    for (std::size_t c = 0; c < options[k].size(); ++c)
    {
      const auto& u = options[k][c];
      const double next = soc + vehicle::soc_delta(u.p_mg, demand.ac_w[k], demand.ac_on[k], pt.soc);
      if (next < pt.soc.soc_min || next > pt.soc.soc_max)
        continue;
      const double v = u.fuel_g_s * dt + table.at(k + 1, next);
      if (v < best)
      {
        best = v;
        arg = c;
      }
    }
    return std::pair{arg, best};
  };

  for (std::size_t k = horizon; k-- > 0;)
  {
    auto& row = table.value[k];
    parallel_for(nodes, cfg.threads, [&](std::size_t j) { row[j] = best_from(k, cfg.soc_grid[j]).second; });
  }

  PowerSplitSchedule& sched = result.schedule;
  sched.steps.reserve(horizon);
  double soc = soc0;
  for (std::size_t k = 0; k < horizon; ++k)
  {
    const auto [arg, value] = best_from(k, soc);
    if (arg == options[k].size() || std::isinf(value))
      throw InfeasibleInstance(k, "no admissible power split at step " + std::to_string(k));
    if (k == 0)
      sched.predicted_cost = value;
    const auto& u = options[k][arg];
    sched.steps.push_back({u.mode, u.p_bat, u.p_eng, u.p_mg, u.friction_w, u.fuel_g_s, soc});
    soc += vehicle::soc_delta(u.p_mg, demand.ac_w[k], demand.ac_on[k], pt.soc);
  }
  sched.soc_end = soc;
  if (horizon == 0)
    sched.predicted_cost = terminal_cost(soc0, target, cfg);
  return result;
}

PowerSplitSchedule rule_based(const DemandSeries& demand, double soc0, const RuleBasedConfig& cfg,
                              const Powertrain& pt)
{
  demand.validate();
  cfg.validate();
  pt.soc.validate();

  PowerSplitSchedule sched;
  sched.steps.reserve(demand.size());
  double soc = soc0;
  bool engine_on = false;
  for (std::size_t k = 0; k < demand.size(); ++k)
  {
    const double p_trac = demand.traction_w[k];
    const double p_ac = demand.ac_w[k];
    if (engine_on)
    {
      if (soc > cfg.soc_high && p_trac <= cfg.engine_on_threshold_w)
        engine_on = false;
    }
    else if (soc < cfg.soc_low || p_trac > cfg.engine_on_threshold_w)
    {
      engine_on = true;
    }

    SplitStep step;
    step.soc = soc;
    // Engine power range that keeps the battery within its limits.
    const double eng_lo = p_trac + p_ac - cfg.discharge_limit_w;
    const double eng_hi = p_trac + p_ac + cfg.charge_limit_w;
    const bool run_engine = (engine_on && eng_hi > 0.0) || eng_lo > 0.0;
    if (run_engine)
    {
      double p_eng = std::clamp(cfg.engine_level_w, std::max(eng_lo, 0.0), eng_hi);
      p_eng = std::clamp(p_eng, 1.0, pt.fuel.max_power());
      step.mode = EngineMode::On;
      step.p_eng = p_eng;
      step.p_mg = p_trac - p_eng;
      step.fuel_g_s = pt.fuel.fuel_rate(p_eng);
    }
    else
    {
      step.mode = EngineMode::Off;
      step.p_mg = std::max(p_trac, -cfg.charge_limit_w - p_ac);
      step.friction_w = p_trac - step.p_mg;
    }
    step.p_bat = step.p_mg + p_ac;
    sched.steps.push_back(step);
    soc = vehicle::soc_step(soc, step.p_mg, p_ac, demand.ac_on[k], pt.soc).soc;
  }
  sched.soc_end = soc;
  return sched;
}

vehicle::EnergyReport simulate_schedule(const PowerSplitSchedule& schedule, const DemandSeries& demand,
                                        const Powertrain& pt)
{
  demand.validate();
  if (schedule.steps.size() != demand.size())
    throw Error(ErrorKind::InconsistentSchedule, "schedule length differs from the demand series");

  auto fail = [](std::size_t k, const std::string& what) {
    throw Error(ErrorKind::InconsistentSchedule, what + " at step " + std::to_string(k));
  };

  vehicle::EnergyReport r;
  const double dt = pt.soc.dt;
  double soc = schedule.steps.empty() ? schedule.soc_end : schedule.steps.front().soc;
  r.soc_start = soc;
  for (std::size_t k = 0; k < demand.size(); ++k)
  {
    const auto& s = schedule.steps[k];
    const double p_trac = demand.traction_w[k];
    const double p_ac = demand.ac_w[k];
    if (std::abs(s.soc - soc) > kSocTol)
      fail(k, "recorded SOC diverges from re-simulation");
    if (std::abs(s.p_bat - (s.p_mg + p_ac)) > kBalanceTol)
      fail(k, "battery power does not equal P_mg + P_ac");
    if (std::abs(s.p_eng + s.p_mg + s.friction_w - p_trac) > kBalanceTol)
      fail(k, "power balance violated");
    if (s.friction_w > kBalanceTol)
      fail(k, "friction brakes cannot propel");
    if (s.mode == EngineMode::Off)
    {
      if (s.p_eng != 0.0 || s.fuel_g_s != 0.0)
        fail(k, "engine off with nonzero power or fuel");
    }
    else
    {
      if (!(s.p_eng > 0.0))
        fail(k, "engine on without positive power");
      if (std::abs(s.fuel_g_s - pt.fuel.fuel_rate(s.p_eng)) > 1e-12)
        fail(k, "fuel rate disagrees with the fuel map");
    }
    r.fuel_grams += s.fuel_g_s * dt;
    r.traction_energy_j += std::max(0.0, p_trac) * dt;
    if (demand.ac_on[k])
      r.ac_energy_j += p_ac * dt;
    soc = vehicle::soc_step(soc, s.p_mg, p_ac, demand.ac_on[k], pt.soc).soc;
  }
  if (std::abs(schedule.soc_end - soc) > kSocTol)
    fail(demand.size(), "final SOC diverges from re-simulation");

  r.soc_end = soc;
  r.delta_soc = r.soc_end - r.soc_start;
  r.fuel_energy_j = r.fuel_grams * pt.energy.lhv_j_per_g;
  r.equivalent_energy_j = vehicle::equivalent_energy(r.fuel_grams, r.delta_soc, pt.energy);
  r.soc_correction_j = r.equivalent_energy_j - r.fuel_energy_j;
  r.duration_s = static_cast<double>(demand.size()) * dt;
  return r;
}

}  // namespace hev::split
