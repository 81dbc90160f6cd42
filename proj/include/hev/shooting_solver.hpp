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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace hev::acmpc
{

struct SolverOptions
{
  std::size_t beam_width = 6;
  std::size_t block_length = 1;   // steps per decision (move blocking)
  std::size_t refine_sweeps = 3;
};

struct ShootingResult
{
  std::vector<std::uint16_t> controls;  // one index per horizon step
  double cost = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

/// Direct single shooting over a discrete control set.
///
/// Decisions are made per block of `block_length` steps. A beam of partial
/// block sequences is grown stage by stage; every partial sequence is ranked by
/// the full-horizon cost of its completion with the last control held. With a
/// beam at least as wide as the number of block sequences nothing is pruned and
/// the search is exhaustive. A coordinate sweep over blocks then refines the
/// best sequence. Ties go to the lexicographically smaller sequence.
///
/// `cost(controls)` evaluates a full-length sequence of per-step indices.
template <typename CostFn>
ShootingResult solve_shooting(std::size_t horizon, std::size_t num_controls, const SolverOptions& opt,
                              CostFn&& cost)
{
  ShootingResult result;
  if (horizon == 0 || num_controls == 0)
    return result;
  const std::size_t block = std::max<std::size_t>(1, opt.block_length);
  const std::size_t stages = (horizon + block - 1) / block;

  std::vector<std::uint16_t> steps(horizon);
  auto expand = [&](const std::vector<std::uint16_t>& blocks) {
    for (std::size_t i = 0; i < horizon; ++i)
    {
      const std::size_t b = std::min(i / block, blocks.size() - 1);
      steps[i] = blocks[b];
    }
    ++result.evaluations;
    return cost(steps);
  };

  struct Candidate
  {
    std::vector<std::uint16_t> blocks;
    double cost;
  };
  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.cost != b.cost)
      return a.cost < b.cost;
    return a.blocks < b.blocks;
  };

  std::vector<Candidate> beam{{{}, 0.0}};
  std::vector<Candidate> next;
  for (std::size_t stage = 0; stage < stages; ++stage)
  {
    next.clear();
    for (const auto& cand : beam)
    {
      for (std::size_t c = 0; c < num_controls; ++c)
      {
        Candidate child{cand.blocks, 0.0};
        child.blocks.push_back(static_cast<std::uint16_t>(c));
        child.cost = expand(child.blocks);
        next.push_back(std::move(child));
      }
    }
    const std::size_t keep = std::min(std::max<std::size_t>(1, opt.beam_width), next.size());
    std::partial_sort(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(keep), next.end(), better);
    next.resize(keep);
    std::swap(beam, next);
  }

  Candidate best = beam.front();
  for (std::size_t sweep = 0; sweep < opt.refine_sweeps; ++sweep)
  {
    bool improved = false;
    for (std::size_t b = 0; b < stages; ++b)
    {
      const std::uint16_t original = best.blocks[b];
      std::uint16_t chosen = original;
      double chosen_cost = best.cost;
      for (std::size_t c = 0; c < num_controls; ++c)
      {
        if (c == original)
          continue;
        best.blocks[b] = static_cast<std::uint16_t>(c);
        const double v = expand(best.blocks);
        if (v < chosen_cost || (v == chosen_cost && c < chosen))
        {
          chosen_cost = v;
          chosen = static_cast<std::uint16_t>(c);
        }
      }
      best.blocks[b] = chosen;
      if (chosen != original)
      {
        improved = improved || chosen_cost < best.cost;
        best.cost = chosen_cost;
      }
    }
    if (!improved)
      break;
  }

  result.cost = expand(best.blocks);
  result.controls = steps;
  return result;
}

}  // namespace hev::acmpc
