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
#include "hev/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "hev/errors.hpp"
#include "hev/io.hpp"

namespace hev
{

namespace
{

using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr double kPlanDt = 0.1;

const char* const kMetrics[] = {
    "fuel_grams",       "soc_start",          "soc_end",           "delta_soc",
    "fuel_energy_j",    "soc_correction_j",   "equivalent_energy_j", "traction_energy_j",
    "ac_energy_j",      "duration_s",         "savings_pct",       "mean_cabin_c",
    "seconds_above_upper", "max_cabin_c",
};

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Runs `fn` and re-raises failures with the stage name prepended.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn())
{
  try
  {
    return fn();
  }
  catch (const InfeasibleInstance& e)
  {
    throw InfeasibleInstance(e.blocked_step(), std::string(name) + ": " + e.what());
  }
  catch (const Error& e)
  {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  }
}

speed::Plan plan_approach(const speed::PlanRequest& req)
{
  try
  {
    return speed::plan_trajectory(req);
  }
  catch (const Error& e)
  {
    if (e.kind() != ErrorKind::InfeasibleProfile && e.kind() != ErrorKind::OutOfDomain)
      throw;
    return speed::plan_with_strategy(req, speed::StrategyKind::Stop);
  }
}

split::DemandSeries demand_of(const DriveCycle& c, const acmpc::AcLoadTrajectory& ac)
{
  split::DemandSeries d;
  d.traction_w = c.traction_w;
  d.ac_w.reserve(ac.steps.size());
  for (const auto& s : ac.steps)
    d.ac_w.push_back(s.ac_w);
  d.ac_on.assign(d.traction_w.size(), true);
  return d;
}

std::vector<double> metric_values(const ConfigurationResult& c)
{
  const auto& e = c.energy;
  return {e.fuel_grams,       e.soc_start,        e.soc_end,          e.delta_soc,
          e.fuel_energy_j,    e.soc_correction_j, e.equivalent_energy_j, e.traction_energy_j,
          e.ac_energy_j,      e.duration_s,       c.savings_pct,      c.mean_cabin_c,
          c.seconds_above_upper, c.max_cabin_after_c};
}

void set_metric(ConfigurationResult& c, const std::string& name, double v)
{
  auto& e = c.energy;
  double* slots[] = {&e.fuel_grams,       &e.soc_start,        &e.soc_end,          &e.delta_soc,
                     &e.fuel_energy_j,    &e.soc_correction_j, &e.equivalent_energy_j, &e.traction_energy_j,
                     &e.ac_energy_j,      &e.duration_s,       &c.savings_pct,      &c.mean_cabin_c,
                     &c.seconds_above_upper, &c.max_cabin_after_c};
  for (std::size_t i = 0; i < std::size(kMetrics); ++i)
    if (name == kMetrics[i])
    {
      *slots[i] = v;
      return;
    }
  throw Error(ErrorKind::Io, "unknown report metric '" + name + "'");
}

double json_number(const ojson& j)
{
  return j.is_null() ? std::nan("") : j.get<double>();
}

}  // namespace

std::span<const char* const> report_metrics() { return kMetrics; }

DriveCycle to_drive_cycle(speed::Trajectory fine, const vehicle::VehicleParams& params)
{
  DriveCycle c;
  const auto per_second = static_cast<std::size_t>(std::llround(1.0 / fine.dt));
  if (per_second == 0 || std::abs(per_second * fine.dt - 1.0) > 1e-9)
    throw Error(ErrorKind::Usage, "trajectory sample period must divide one second");
  const std::size_t n = fine.size();
  const std::size_t seconds = n > 1 ? (n - 2) / per_second + 1 : 0;
  c.speed.resize(seconds);
  c.traction_w.resize(seconds);
  for (std::size_t k = 0; k < seconds; ++k)
  {
    const std::size_t lo = k * per_second;
    const std::size_t hi = std::min(lo + per_second, n - 1);
    double v = 0.0;
    double p = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
    {
      v += fine.speed[i];
      p += vehicle::traction_power(fine.speed[i], fine.accel[i], params);
    }
    const double count = static_cast<double>(hi - lo);
    c.speed[k] = v / count;
    c.traction_w[k] = p / count;
  }
  c.fine = std::move(fine);
  return c;
}

traffic::Microsim simulate_background(const Scenario& s)
{
  traffic::Microsim sim(s.corridor, s.background, s.idm, kPlanDt);
  sim.run_until(s.ego.entry_time_s + 6.0 * s.corridor.length_m / s.corridor.speed_limit + 600.0);
  return sim;
}

DriveCycle baseline_cycle(const Scenario& s, const traffic::Microsim& traffic)
{
  auto speeds = traffic::drive_idm(s.corridor, traffic, s.ego, s.idm);
  return to_drive_cycle(speed::Trajectory::from_speeds(traffic.dt(), s.ego.entry_time_s, std::move(speeds)),
                        s.vehicle);
}

DriveCycle eco_cycle(const Scenario& s, const traffic::Microsim& traffic)
{
  speed::Trajectory full;
  std::vector<speed::StrategyKind> strategies;
  double t = s.ego.entry_time_s;
  double x = 0.0;
  double v = s.ego.entry_speed;
  full = speed::Trajectory::from_speeds(kPlanDt, t, {v});

  for (const auto& in : s.corridor.intersections)
  {
    if (in.stop_bar_m <= x)
      continue;
    std::vector<traffic::BsmRecord> bsms;
    for (const auto& b : traffic.frame_at(t))
      if (b.position_m > x)
        bsms.push_back(b);
    const auto forecast = traffic::predict_queue(in, bsms, t, s.queue);
    speed::PlanRequest req;
    req.window = traffic::green_window(forecast, in.signal, t);
    // A window that closes before the vehicle could get there at the speed
    // limit is skipped in favour of the next green.
    while ((in.stop_bar_m - x) / (req.window.latest - t) > s.corridor.speed_limit || req.window.latest <= t)
    {
      const auto next = in.signal.green_at_or_after(req.window.latest);
      req.window = {next.start, next.end};
    }
    req.v0 = v;
    req.d_stop = in.stop_bar_m - x;
    req.speed_limit = s.corridor.speed_limit;
    req.headway = s.headway_s;
    req.t_now = t;
    req.limits = s.limits;
    req.dt = kPlanDt;
    const auto plan = plan_approach(req);
    strategies.push_back(plan.strategy);
    full.append(plan.trajectory);
    t = full.time_at(full.size() - 1);
    v = full.speed.back();
    x = in.stop_bar_m;
  }
  if (s.corridor.length_m > x)
    full.append(speed::free_drive(v, s.corridor.speed_limit, s.corridor.length_m - x, t, s.limits, kPlanDt));

  auto cycle = to_drive_cycle(std::move(full), s.vehicle);
  cycle.strategies = std::move(strategies);
  return cycle;
}

const ConfigurationResult& StageReport::at(const std::string& name) const
{
  for (const auto& c : configurations)
    if (c.name == name)
      return c;
  throw Error(ErrorKind::Usage, "no configuration named '" + name + "'");
}

StageReport run_pipeline(const Scenario& s, const RunOptions& opt)
{
  s.validate();
  const auto t_start = Clock::now();
  const auto traffic = stage("traffic", [&] { return simulate_background(s); });

  auto t0 = Clock::now();
  const DriveCycle base = stage("baseline driver", [&] { return baseline_cycle(s, traffic); });
  const double t_base = seconds_since(t0);
  t0 = Clock::now();
  const DriveCycle eco = s.stages.speed ? stage("stage I (speed)", [&] { return eco_cycle(s, traffic); }) : base;
  const double t_speed = s.stages.speed ? seconds_since(t0) : 0.0;
  const double t_traffic = seconds_since(t_start) - t_base - t_speed;

  auto run_ac = [&](const DriveCycle& c, acmpc::AcMode mode, const char* name) {
    return stage(name, [&] {
      const auto t = Clock::now();
      auto r = acmpc::run_ac_controller(c.speed, s.cabin_init, s.ambient, s.ac, mode);
      return std::pair{std::move(r), seconds_since(t)};
    });
  };

  using AcRun = std::pair<acmpc::AcLoadTrajectory, double>;
  std::vector<std::function<AcRun()>> ac_jobs;
  ac_jobs.push_back([&] { return run_ac(base, acmpc::AcMode::ConstantSetpoint, "baseline A/C"); });
  if (s.stages.speed)
    ac_jobs.push_back([&] { return run_ac(eco, acmpc::AcMode::ConstantSetpoint, "stage I A/C"); });
  if (s.stages.eco_cool)
    ac_jobs.push_back([&] { return run_ac(eco, acmpc::AcMode::EcoCool, "stage II (eco-cool)"); });

  std::vector<AcRun> ac_runs;
  if (opt.threads > 1)
  {
    std::vector<std::future<AcRun>> futures;
    for (auto& job : ac_jobs)
      futures.push_back(std::async(std::launch::async, job));
    for (auto& f : futures)
      ac_runs.push_back(f.get());
  }
  else
  {
    for (auto& job : ac_jobs)
      ac_runs.push_back(job());
  }
  const AcRun& ac_base = ac_runs[0];
  const AcRun& ac_eco_const = s.stages.speed ? ac_runs[1] : ac_base;
  const AcRun& ac_eco_cool = s.stages.eco_cool ? ac_runs.back() : ac_eco_const;

  struct Config
  {
    const char* name;
    const char* speed_name;
    const char* ac_name;
    const DriveCycle* cycle;
    const AcRun* ac;
    bool dp;
    double upstream_s;
  };
  const char* eco_speed = s.stages.speed ? "eco" : "idm";
  const char* eco_ac = s.stages.eco_cool ? "eco-cool" : "constant";
  const double t_cycle_eco = s.stages.speed ? t_speed : t_base;
  const Config configs[] = {
      {"baseline", "idm", "constant", &base, &ac_base, false, t_traffic + t_base + ac_base.second},
      {"speed", eco_speed, "constant", &eco, &ac_eco_const, false, t_traffic + t_cycle_eco + ac_eco_const.second},
      {"speed+ac", eco_speed, eco_ac, &eco, &ac_eco_cool, false, t_traffic + t_cycle_eco + ac_eco_cool.second},
      {"speed+ac+dp", eco_speed, eco_ac, &eco, &ac_eco_cool, s.stages.dp,
       t_traffic + t_cycle_eco + ac_eco_cool.second},
  };

  StageReport report;
  report.scenario = s.name;
  for (const auto& c : configs)
  {
    const auto t = Clock::now();
    const auto demand = demand_of(*c.cycle, c.ac->first);
    split::PowerSplitSchedule sched;
    if (c.dp)
    {
      sched = stage("stage III (dp)", [&] {
        auto cfg = s.dp;
        cfg.threads = std::max<std::size_t>(1, opt.threads);
        return split::dp_optimize(demand, s.soc0, cfg, s.powertrain);
      });
    }
    else
    {
      sched = stage("rule-based split", [&] { return split::rule_based(demand, s.soc0, s.rule, s.powertrain); });
    }
    ConfigurationResult r;
    r.name = c.name;
    r.speed = c.speed_name;
    r.ac = c.ac_name;
    r.split = c.dp ? "dp" : "rule";
    r.energy = stage("accounting", [&] { return split::simulate_schedule(sched, demand, s.powertrain); });
    const auto& ac = c.ac->first;
    r.mean_cabin_c = ac.mean_cabin_after(s.cooldown_s);
    r.seconds_above_upper =
        static_cast<double>(ac.seconds_above(s.ac.scheduling.cabin_upper, s.cooldown_s));
    double peak = -std::numeric_limits<double>::infinity();
    for (const auto& st : ac.steps)
      if (st.time_s >= s.cooldown_s)
        peak = std::max(peak, st.state.cabin_c);
    r.max_cabin_after_c = std::isfinite(peak) ? peak : std::nan("");
    if (opt.timing)
      r.runtime_s = c.upstream_s + seconds_since(t);
    report.configurations.push_back(std::move(r));
    if (opt.traces)
      opt.traces->push_back({*c.cycle, ac, std::move(sched)});
  }

  const double e0 = report.configurations.front().energy.equivalent_energy_j;
  for (auto& c : report.configurations)
    c.savings_pct = 100.0 * (e0 - c.energy.equivalent_energy_j) / e0;
  return report;
}

FleetSummary run_fleet(std::span<const Scenario> scenarios, std::size_t threads)
{
  if (scenarios.empty())
    throw Error(ErrorKind::Usage, "fleet needs at least one scenario");
  FleetSummary out;
  out.entries.resize(scenarios.size());

  auto work = [&](std::size_t i) {
    FleetEntry& e = out.entries[i];
    e.scenario = scenarios[i].name;
    try
    {
      Scenario s = scenarios[i];
      s.stages = StageToggles{true, false, false};
      e.report = run_pipeline(s);
      e.savings_pct = e.report.at("speed").savings_pct;
      e.ok = true;
    }
    catch (const std::exception& ex)
    {
      e.error = ex.what();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, scenarios.size());
  if (workers == 1)
  {
    for (std::size_t i = 0; i < scenarios.size(); ++i)
      work(i);
  }
  else
  {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++)
          work(i);
      });
    for (auto& th : pool)
      th.join();
  }

  double sum = 0.0;
  out.min_savings_pct = std::numeric_limits<double>::infinity();
  out.max_savings_pct = -std::numeric_limits<double>::infinity();
  for (const auto& e : out.entries)
  {
    if (!e.ok)
      continue;
    ++out.succeeded;
    sum += e.savings_pct;
    out.min_savings_pct = std::min(out.min_savings_pct, e.savings_pct);
    out.max_savings_pct = std::max(out.max_savings_pct, e.savings_pct);
  }
  if (out.succeeded == 0)
  {
    out.min_savings_pct = out.max_savings_pct = std::nan("");
    out.mean_savings_pct = std::nan("");
  }
  else
  {
    out.mean_savings_pct = sum / static_cast<double>(out.succeeded);
  }
  return out;
}

std::string report_json(const StageReport& r)
{
  ojson j;
  j["scenario"] = r.scenario;
  j["configurations"] = ojson::array();
  for (const auto& c : r.configurations)
  {
    const auto& e = c.energy;
    ojson cj;
    cj["name"] = c.name;
    cj["speed"] = c.speed;
    cj["ac"] = c.ac;
    cj["split"] = c.split;
    cj["energy"] = {{"fuel_grams", e.fuel_grams},
                    {"soc_start", e.soc_start},
                    {"soc_end", e.soc_end},
                    {"delta_soc", e.delta_soc},
                    {"fuel_energy_j", e.fuel_energy_j},
                    {"soc_correction_j", e.soc_correction_j},
                    {"equivalent_energy_j", e.equivalent_energy_j},
                    {"traction_energy_j", e.traction_energy_j},
                    {"ac_energy_j", e.ac_energy_j},
                    {"duration_s", e.duration_s}};
    cj["savings_pct"] = c.savings_pct;
    cj["comfort"] = {{"mean_cabin_c", c.mean_cabin_c},
                     {"seconds_above_upper", c.seconds_above_upper},
                     {"max_cabin_c", c.max_cabin_after_c}};
    if (c.runtime_s)
      cj["runtime_s"] = *c.runtime_s;
    j["configurations"].push_back(std::move(cj));
  }
  return j.dump(2) + "\n";
}

StageReport report_from_json(const std::string& text)
{
  try
  {
    const auto j = ojson::parse(text);
    StageReport r;
    r.scenario = j.at("scenario").get<std::string>();
    for (const auto& cj : j.at("configurations"))
    {
      ConfigurationResult c;
      c.name = cj.at("name").get<std::string>();
      c.speed = cj.at("speed").get<std::string>();
      c.ac = cj.at("ac").get<std::string>();
      c.split = cj.at("split").get<std::string>();
      for (const auto& [k, v] : cj.at("energy").items())
        set_metric(c, k, json_number(v));
      c.savings_pct = json_number(cj.at("savings_pct"));
      for (const auto& [k, v] : cj.at("comfort").items())
        set_metric(c, k, json_number(v));
      if (cj.contains("runtime_s"))
        c.runtime_s = cj.at("runtime_s").get<double>();
      r.configurations.push_back(std::move(c));
    }
    return r;
  }
  catch (const nlohmann::json::exception& e)
  {
    throw Error(ErrorKind::Io, std::string("report: ") + e.what());
  }
}

std::string report_csv(const StageReport& r)
{
  std::ostringstream out;
  out << "configuration,metric,value\n";
  for (const auto& c : r.configurations)
  {
    const auto values = metric_values(c);
    for (std::size_t i = 0; i < values.size(); ++i)
      out << c.name << ',' << kMetrics[i] << ',' << (std::isnan(values[i]) ? "nan" : io::format_number(values[i]))
          << '\n';
  }
  return out.str();
}

StageReport report_from_csv(const std::string& text, const std::string& scenario_name)
{
  StageReport r;
  r.scenario = scenario_name;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line))
  {
    if (line.empty())
      continue;
    if (header)
    {
      header = false;
      continue;
    }
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    if (a == std::string::npos || b == std::string::npos)
      throw Error(ErrorKind::Io, "malformed report row: " + line);
    const std::string name = line.substr(0, a);
    const std::string metric = line.substr(a + 1, b - a - 1);
    const std::string value = line.substr(b + 1);
    if (r.configurations.empty() || r.configurations.back().name != name)
    {
      r.configurations.emplace_back();
      r.configurations.back().name = name;
    }
    set_metric(r.configurations.back(), metric, value == "nan" ? std::nan("") : std::stod(value));
  }
  return r;
}

std::string fleet_json(const FleetSummary& f)
{
  ojson j;
  j["succeeded"] = f.succeeded;
  j["mean_savings_pct"] = f.mean_savings_pct;
  j["min_savings_pct"] = f.min_savings_pct;
  j["max_savings_pct"] = f.max_savings_pct;
  j["vehicles"] = ojson::array();
  for (const auto& e : f.entries)
  {
    ojson v;
    v["scenario"] = e.scenario;
    v["ok"] = e.ok;
    if (e.ok)
    {
      v["savings_pct"] = e.savings_pct;
      v["baseline_equivalent_energy_j"] = e.report.at("baseline").energy.equivalent_energy_j;
      v["speed_equivalent_energy_j"] = e.report.at("speed").energy.equivalent_energy_j;
    }
    else
    {
      v["error"] = e.error;
    }
    j["vehicles"].push_back(std::move(v));
  }
  return j.dump(2) + "\n";
}

}  // namespace hev
