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

#include <string>
#include <vector>

#include "uavnoma/noma.hpp"
#include "uavnoma/scenario.hpp"

namespace uavnoma {

/// First-order surrogate of the interference-limited ground term at the
/// current powers: sum_n R_g-complement >= a_const - sum_n b_coeff[n] *
/// (p_n - p_current[n]), tight at p_current. b_coeff entries are >= 0.
struct ScaLinearization {
  double a_const = 0.0;
  std::vector<double> b_coeff;
};

/// Per-RB sets of cells still suffering the UAV (complement handled inside);
/// `omega[n]` must be a sorted subset of the occupied cells of RB n.
ScaLinearization sca_linearize(const Scenario& s, const std::vector<std::vector<CellId>>& omega,
                               const std::vector<double>& p_current);

/// Closed-form KKT maximizer of the surrogate objective
///   sum_n [log2(1 + p_n * Fnorm(assoc_n, n)) - mu * b_n * p_n]
/// under the power budget. A zero mu*b_n makes the unconstrained optimum
/// unbounded, which forces the budget-binding branch.
std::vector<double> sca_inner_step(const Scenario& s, const std::vector<CellId>& assoc,
                                   const ScaLinearization& lin);

struct ScaState {
  int iterations = 0;
  std::vector<double> objective_trace;  // true objective, non-decreasing
  bool hit_cap = false;
};

/// Iterates linearize/step until the fractional increase of the true
/// objective (never the surrogate) drops below eps.
std::vector<double> sca_power_alloc(const Scenario& s, const std::vector<CellId>& assoc,
                                    const std::vector<std::vector<CellId>>& omega,
                                    std::vector<double> p_init, double eps, int max_iter,
                                    ScaState* state = nullptr);

/// True objective of the fixed-association power subproblem (UAV rates via
/// the associations, ground rates via the fixed omegas).
double power_subproblem_objective(const Scenario& s, const std::vector<CellId>& assoc,
                                  const std::vector<std::vector<CellId>>& omega,
                                  const std::vector<double>& p);

struct AssocChoice {
  CellId cell = 0;
  double utility = 0.0;  // log2(1 + p Fnorm) + mu * per-RB ground rate
};

/// Best association for one RB at the given power via partial enumeration:
/// walk cells by descending normalized gain, growing the cancelling set,
/// and stop once it covers every occupied cell. Ties keep the earlier cell.
AssocChoice associate_rb(const Scenario& s, int rb, double power_w);

/// Utility of a specific association (used for incumbent-keeping ties and
/// as the full-enumeration reference).
double assoc_utility(const Scenario& s, int rb, double power_w, CellId assoc);

struct AoState {
  std::vector<double> q_trace;  // Q after init, then after each outer pass
  std::vector<int> inner_iters_per_outer;
  bool hit_outer_cap = false;
  bool hit_inner_cap = false;

  int outer_iters() const { return static_cast<int>(inner_iters_per_outer.size()); }
};

struct AoOptions {
  double eps_outer = 1e-4;
  double eps_inner = 1e-4;
  int max_outer = 50;
  int max_inner = 100;
  /// Benchmark restriction: associate only with unoccupied cells and apply
  /// no interference cancellation anywhere.
  bool restrict_to_unoccupied = false;
  bool use_ic = true;
};

struct AoResult {
  UavAllocation alloc;
  NomaSets sets;
  RateReport report;
  AoState state;
};

/// Alternating optimization for the weighted sum-rate: SCA power allocation
/// and per-RB association in turn, initialized from the egoistic solution.
/// The objective trace is non-decreasing.
AoResult ao_solve(const Scenario& s, const AoOptions& opts = {});

/// Solver diagnostics as a JSON text: {outer_iters, inner_iters_per_outer,
/// q_trace, flags}.
std::string ao_diagnostics_json(const AoState& state);

}  // namespace uavnoma
