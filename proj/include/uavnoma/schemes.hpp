// Copyright 2026 The uavnoma Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uavnoma/noma.hpp"
#include "uavnoma/scenario.hpp"

namespace uavnoma {

/// Water-filling over parallel channels: maximize sum log2(1 + p_n g_n)
/// subject to sum p_n = budget, p_n >= 0. A zero gain excludes the channel.
struct WaterFillProblem {
  std::vector<double> gains;  // per RB, 1/W
  double budget_w = 0.0;
};

/// p_n = max(0, 1/(lambda ln 2) - 1/g_n) with the water level found by
/// bisection so the budget is met within 1e-10 relative (<= 200 iterations).
std::vector<double> water_fill(const WaterFillProblem& prob);

struct SolverInfo {
  int outer_iters = 0;
  int inner_iters_total = 0;
  bool hit_cap = false;
};

struct SchemeResult {
  UavAllocation alloc;
  NomaSets sets;
  RateReport report;
  SolverInfo info;
};

/// Maximizes the UAV rate alone: associate with the best normalized gain
/// per RB and water-fill over F_u(n). Independent of mu and M.
SchemeResult egoistic_solve(const Scenario& s);

/// Preserves the full ground sum-rate: every occupied cell gets a decodable
/// BS within M tiers, and the UAV water-fills over the resulting
/// min-of-maxima gains T_u(n).
SchemeResult altruistic_solve(const Scenario& s);

/// Smallest M such that every occupied cell of every RB lies within M tiers
/// of the egoistic association; nullopt if no M up to the topology diameter
/// works (cannot happen on full layouts).
std::optional<int> m0_threshold(const Scenario& s, const std::vector<CellId>& egoistic_assoc);

/// UAV transmits only on RBs no ground UE occupies.
SchemeResult oma_solve(const Scenario& s);

enum class NonOrthMode { Egoistic, General };

/// Benchmark without interference cancellation: the association is limited
/// to unoccupied cells and every occupied cell always suffers the UAV's
/// interference. General mode runs the AO solver on that restricted problem.
SchemeResult non_orthogonal_solve(const Scenario& s, NonOrthMode mode);

}  // namespace uavnoma
