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

#include "uavnoma/types.hpp"

namespace uavnoma {

/// Lattice coordinates of a cell center: position = a*u + b*v with
/// u = (sqrt(3)R, 0) and v = (sqrt(3)R/2, 3R/2). Adjacent centers are
/// sqrt(3)*R apart; cell 2 sits on the +x axis.
struct AxialCoord {
  int a = 0;
  int b = 0;
};

/// Hexagonal multi-cell layout. Cells are numbered by a counterclockwise
/// spiral: id 1 at the origin, each ring starting from its +x-axis cell.
/// This numbering reproduces the worked cooperation-set examples used by the
/// validation suite, so treat it as canonical.
class HexTopology {
 public:
  HexTopology() = default;

  int cell_count() const { return static_cast<int>(centers_.size()); }
  int num_tiers() const { return num_tiers_; }
  double cell_radius() const { return cell_radius_; }

  const Vec2& center(CellId j) const { return centers_[check_id(j)]; }
  const std::vector<Vec2>& centers() const { return centers_; }

  /// Ring index of the cell (center cell = 0).
  int tier_of(CellId j) const { return tier_of_[check_id(j)]; }

  AxialCoord axial(CellId j) const { return axial_[check_id(j)]; }

  /// Lattice (graph) distance between two cell centers; adjacent cells are
  /// at distance 1.
  int hex_distance(CellId a, CellId b) const;

  /// True if the point lies inside (or on the boundary of) cell j's hexagon.
  bool contains(CellId j, const Vec2& p) const;

  friend HexTopology build_topology(int num_tiers, double cell_radius);

 private:
  int check_id(CellId j) const;

  int num_tiers_ = 0;
  double cell_radius_ = 0.0;
  std::vector<Vec2> centers_;
  std::vector<int> tier_of_;
  std::vector<AxialCoord> axial_;
};

/// Builds the spiral-indexed layout with 1 + 3t(t+1) cells.
HexTopology build_topology(int num_tiers, double cell_radius);

/// N_j(M): all cells within M tiers of cell j, excluding j, clipped to the
/// topology. Sorted ascending. M = 0 yields the empty set.
std::vector<CellId> neighbor_set(const HexTopology& topo, CellId j, int tiers);

/// C_j(M) = {j} union N_j(M). Sorted ascending.
std::vector<CellId> coop_set(const HexTopology& topo, CellId j, int tiers);

/// Precomputed neighbor rings and cumulative cooperation sets for every cell.
/// Immutable after construction; safe to share across threads.
class NeighborSets {
 public:
  NeighborSets() = default;
  explicit NeighborSets(const HexTopology& topo);

  /// Largest tier index with any members (the topology diameter, 2t).
  int max_tier() const { return max_tier_; }

  /// Cells at exactly lattice distance m from j (empty beyond max_tier).
  const std::vector<CellId>& ring(CellId j, int m) const;

  /// N_j(M), clamped to max_tier.
  const std::vector<CellId>& neighbors(CellId j, int tiers) const;

  /// C_j(M), clamped to max_tier.
  const std::vector<CellId>& coop(CellId j, int tiers) const;

 private:
  int cells_ = 0;
  int max_tier_ = 0;
  // [j-1][m] -> sorted cell list; m = 0..max_tier (ring 0 of j is {j}).
  std::vector<std::vector<std::vector<CellId>>> rings_;
  std::vector<std::vector<std::vector<CellId>>> neighbors_cum_;
  std::vector<std::vector<std::vector<CellId>>> coop_cum_;
};

/// Topology manifest: {J, radius_m, centers, neighbor_rings} as a JSON text.
/// Records the canonical numbering so downstream tooling never has to guess.
std::string topology_manifest_json(const HexTopology& topo, const NeighborSets& sets);

}  // namespace uavnoma
