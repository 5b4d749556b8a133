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
#include <utility>
#include <vector>

#include "uavnoma/scenario.hpp"

namespace uavnoma {

/// Absolute tolerance on rate comparisons when testing decodability. Keeps
/// an associated BS inside its own decodable set despite float rounding.
inline constexpr double kRateTol = 1e-12;

/// Per-RB UAV transmit powers and rates, plus (optionally) the associated
/// BS of each RB. `assoc` is either empty (not chosen yet) or full-length.
struct UavAllocation {
  std::vector<double> power_w;
  std::vector<double> rate_bpshz;
  std::vector<CellId> assoc;

  bool has_assoc() const { return !assoc.empty(); }
};

/// Decodable set Lambda_n and cancelling set Omega_n per RB (sorted).
struct NomaSets {
  std::vector<std::vector<CellId>> decodable;
  std::vector<std::vector<CellId>> cancelling;
};

struct RateReport {
  std::vector<double> uav_rate_per_rb;
  std::vector<double> ground_rate_per_rb;
  double uav_total = 0.0;
  double ground_total = 0.0;
  double objective_q = 0.0;                           // uav_total + mu * ground_total
  std::vector<std::pair<int, double>> per_ue_rate;    // (ue id, bps/Hz), sorted by id
};

/// UAV rate at BS j: log2(1 + p * F_j(n)/(1+gamma_j(n))).
double uav_rate_at_bs(const Scenario& s, CellId j, int rb, double power_w);

/// Largest normalized gain on the RB and the lowest-id cell attaining it
/// (the egoistic association).
struct BestGain {
  double gain = 0.0;
  CellId cell = 0;
};
BestGain best_norm_gain(const Scenario& s, int rb);

/// Cells that can decode rate `rate` at power `power`: all cells whose UAV
/// rate is >= rate - kRateTol. rate = 0 yields every cell.
std::vector<CellId> decodable_set(const Scenario& s, int rb, double power_w, double rate);

/// Decodable set induced by an association: cells whose normalized gain is
/// >= that of the associated BS. Always contains `assoc`.
std::vector<CellId> decodable_set_from_assoc(const Scenario& s, int rb, CellId assoc);

/// Omega_n: occupied cells reachable from some decodable cell within M tiers.
std::vector<CellId> cancelling_set(const Scenario& s, int rb, const std::vector<CellId>& decodable);

/// Ground sum-rate on the RB when the cells in `omega` cancel the UAV and
/// the rest treat it as noise. `omega` must be a sorted subset of J(n).
double ground_sum_rate_ic(const Scenario& s, int rb, double power_w,
                          const std::vector<CellId>& omega);

/// Ground sum-rate with no cancellation anywhere (omega empty).
double ground_sum_rate_no_ic(const Scenario& s, int rb, double power_w);

/// Builds the decodable/cancelling sets implied by an allocation, using the
/// association when present and the (power, rate) threshold otherwise.
NomaSets build_noma_sets(const Scenario& s, const UavAllocation& alloc);

/// Full report for an allocation. Checks the allocation invariants first
/// and throws ContractViolation naming the violated one.
RateReport evaluate(const Scenario& s, const UavAllocation& alloc);

/// Same, with caller-provided sets (schemes construct theirs analytically).
RateReport evaluate_with_sets(const Scenario& s, const UavAllocation& alloc,
                              const NomaSets& sets);

/// Throws ContractViolation if the allocation violates its invariants.
void check_allocation(const Scenario& s, const UavAllocation& alloc);

/// Report serialization: JSON object and CSV rows
/// (rb, p_w, r_bpshz, assoc, ground_rate, |lambda|, |omega|).
std::string report_to_json(const Scenario& s, const UavAllocation& alloc, const NomaSets& sets,
                           const RateReport& report);
std::string report_to_csv(const UavAllocation& alloc, const NomaSets& sets,
                          const RateReport& report);

}  // namespace uavnoma
