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

// Power-split instances whose SOC transitions land exactly on grid nodes, so
// the DP value function carries no interpolation error.

#include <random>

#include "hev/power_split.hpp"

namespace hev::testing
{

struct SplitInstance
{
  split::DemandSeries demand;
  split::DpConfig cfg;
  split::Powertrain pt;
  double soc0 = 60.0;
};

inline SplitInstance aligned_instance(std::mt19937_64& rng, std::size_t steps, std::size_t nodes,
                                      std::size_t levels)
{
  constexpr double kPowerStep = 4096.0;
  const double spacings[] = {0.5, 1.0, 2.0};
  const double spacing = spacings[std::uniform_int_distribution<int>(0, 2)(rng)];

  SplitInstance in;
  in.pt.soc.xi = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -spacing / kPowerStep, 0.0,
                  std::uniform_int_distribution<int>(0, 1)(rng) ? -spacing : 0.0};
  // SOC grid around 60 with soc0 on a node
  const auto below = std::uniform_int_distribution<std::size_t>(0, nodes - 1)(rng);
  for (std::size_t j = 0; j < nodes; ++j)
    in.cfg.soc_grid.push_back(60.0 + spacing * (static_cast<double>(j) - static_cast<double>(below)));
  // battery levels spanning zero
  const auto charge = std::uniform_int_distribution<std::size_t>(levels == 2 ? 0 : 1, levels - 2)(rng);
  for (std::size_t i = 0; i < levels; ++i)
    in.cfg.pbat_grid.push_back(kPowerStep * (static_cast<double>(i) - static_cast<double>(charge)));
  in.cfg.terminal_weight = std::uniform_real_distribution<double>(0.0, 10.0)(rng);
  in.cfg.hard_terminal = std::uniform_int_distribution<int>(0, 4)(rng) == 0;

  std::uniform_int_distribution<int> demand(-3, 4);
  for (std::size_t k = 0; k < steps; ++k)
  {
    in.demand.traction_w.push_back(kPowerStep * demand(rng));
    in.demand.ac_w.push_back(0.0);
    in.demand.ac_on.push_back(false);
  }
  return in;
}

}  // namespace hev::testing
