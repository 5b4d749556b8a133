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

#include <cstdint>
#include <string>
#include <vector>

#include "uavnoma/channel.hpp"
#include "uavnoma/hexgrid.hpp"
#include "uavnoma/types.hpp"

namespace uavnoma {

/// Dense per-(cell, RB) table of doubles. Cells are 1-based, RBs 0-based.
class CellRbTable {
 public:
  CellRbTable() = default;
  CellRbTable(int num_cells, int num_rb, double fill = 0.0)
      : cells_(num_cells), rbs_(num_rb), v_(static_cast<std::size_t>(num_cells) * num_rb, fill) {}

  int num_cells() const { return cells_; }
  int num_rb() const { return rbs_; }
  double operator()(CellId j, int rb) const { return v_[index(j, rb)]; }
  double& operator()(CellId j, int rb) { return v_[index(j, rb)]; }

 private:
  std::size_t index(CellId j, int rb) const {
    return static_cast<std::size_t>(rb) * cells_ + (j - 1);
  }
  int cells_ = 0;
  int rbs_ = 0;
  std::vector<double> v_;
};

struct UePlacement {
  int ue_id = 0;  // 1-based
  CellId home_cell = 0;
  Vec2 pos;
};

/// Which cells serve a ground UE on each RB, and which UE it is.
struct RbAssignment {
  int num_rb = 0;
  std::vector<std::vector<CellId>> occupied;    // per RB, sorted cell ids
  std::vector<std::vector<int>> serving_ue;     // aligned with `occupied`
  std::vector<int> blocked_ues;                 // UEs with no feasible RB

  bool is_occupied(CellId j, int rb) const;
  /// Serving UE of cell j on the RB, or 0 if the pair is unoccupied.
  int ue_at(CellId j, int rb) const;
  int scheduled_count() const;
};

/// Places one UE uniformly inside every cell first, then the remaining
/// K - J UEs into uniformly random cells (at least 10 m from the BS).
/// UE i's draw depends only on (seed, i), so growing K extends a placement
/// without disturbing the existing UEs.
std::vector<UePlacement> place_ues(const HexTopology& topo, int total_ues, std::uint64_t seed);

/// Terrestrial ICIC: a UE of cell j may take RB n only if no cell of
/// C_j(q) already occupies n. UEs are processed in a randomized arrival
/// order (appending UEs never reorders earlier ones) and each UE scans RBs
/// in its own random order; UEs that find no feasible RB are left blocked.
RbAssignment icic_assign(const HexTopology& topo, const NeighborSets& sets,
                         const std::vector<UePlacement>& ues, int num_rb, int icic_tiers,
                         std::uint64_t seed);

/// One fully-normalized network realization: everything the solvers need.
/// Immutable by convention after assembly; share freely across threads.
struct Scenario {
  HexTopology topology;
  NeighborSets rings;
  int num_rb = 0;
  RbAssignment assignment;
  CellRbTable ground_snr;      // gamma_j(n), 0 when (j, n) unoccupied
  CellRbTable uav_gain;        // F_j(n) in 1/W
  CellRbTable uav_gain_norm;   // F_j(n) / (1 + gamma_j(n))
  double p_max_w = 0.1;
  double mu = 1.0;
  int cancel_tiers = 1;  // M
  int icic_tiers = 1;    // q (kept for validation)
  std::uint64_t seed = 0;

  int cell_count() const { return topology.cell_count(); }
  const std::vector<CellId>& occupied(int rb) const { return assignment.occupied[rb]; }
  bool is_occupied(CellId j, int rb) const { return assignment.is_occupied(j, rb); }
  const std::vector<CellId>& coop(CellId j, int tiers) const { return rings.coop(j, tiers); }
};

/// Builds a Scenario from raw tables, recomputing the normalized gains and
/// checking the structural invariants. Used by generation, deserialization
/// and synthetic test fixtures alike.
Scenario make_scenario(HexTopology topo, int num_rb, RbAssignment assignment,
                       CellRbTable ground_snr, CellRbTable uav_gain, double p_max_w, double mu,
                       int cancel_tiers, std::uint64_t seed, int icic_tiers = 1);

/// Throws ContractViolation naming the violated invariant.
void validate_scenario(const Scenario& s);

/// R_g without the UAV: sum over occupied (j, n) of log2(1 + gamma).
double baseline_ground_sum_rate(const Scenario& s);
/// Same restricted to one RB.
double baseline_ground_rate_rb(const Scenario& s, int rb);

struct GenConfig {
  std::uint64_t seed = 1;
  int num_tiers = 3;
  double cell_radius_m = 800.0;
  int num_rb = 30;
  int total_ues = 150;
  int icic_tiers = 1;
  ChannelConfig channel;
  double ue_power_dbm = 23.0;
  Vec2 uav_xy{150.0, 420.0};
  double p_max_dbm = 20.0;
  double mu = 1.0;
  int cancel_tiers = 1;
};

/// Scenario plus the raw draws behind it (kept for recomputation oracles).
struct GeneratedScenario {
  Scenario scenario;
  std::vector<UePlacement> ues;
  std::vector<double> a2g_gain_lin;   // per cell, composite |f_j|^2
  std::vector<double> terr_gain_lin;  // per UE id ([0] unused), 0 if unscheduled
  double noise_w = 0.0;
  double ue_power_w = 0.0;
};

GeneratedScenario generate_scenario(const GenConfig& cfg);

/// Scenario file I/O. The JSON carries linear-unit tables and is the
/// contract between the generation and solving stages.
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);
void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace uavnoma
