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

#include "uavnoma/hexgrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <json.hpp>

#include "uavnoma/errors.hpp"

namespace uavnoma {

namespace {

// Unit lattice steps counterclockwise from the +x axis, in (a, b)
// coordinates: u, v, v-u, -u, -v, u-v.
constexpr int kStepA[6] = {1, 0, -1, -1, 0, 1};
constexpr int kStepB[6] = {0, 1, 1, 0, -1, -1};

Vec2 lattice_to_xy(const AxialCoord& c, double radius) {
  const double s = std::sqrt(3.0) * radius;
  return Vec2{s * (c.a + 0.5 * c.b), s * (std::sqrt(3.0) / 2.0) * c.b};
}

int axial_distance(const AxialCoord& p, const AxialCoord& q) {
  const int da = p.a - q.a;
  const int db = p.b - q.b;
  return (std::abs(da) + std::abs(db) + std::abs(da + db)) / 2;
}

}  // namespace

int HexTopology::check_id(CellId j) const {
  if (j < 1 || j > cell_count()) {
    throw InputDomainError("unknown cell id " + std::to_string(j) + " (topology has " +
                           std::to_string(cell_count()) + " cells)");
  }
  return j - 1;
}

int HexTopology::hex_distance(CellId a, CellId b) const {
  return axial_distance(axial_[check_id(a)], axial_[check_id(b)]);
}

bool HexTopology::contains(CellId j, const Vec2& p) const {
  const Vec2& c = centers_[check_id(j)];
  const double dx = p.x - c.x;
  const double dy = p.y - c.y;
  // Voronoi cell of the lattice: intersection of three slabs whose normals
  // point along the neighbor directions (0, 60, 120 degrees).
  const double apothem = std::sqrt(3.0) * cell_radius_ / 2.0;
  const double eps = 1e-9 * cell_radius_;
  const double half = 0.5;
  const double root3half = std::sqrt(3.0) / 2.0;
  if (std::abs(dx) > apothem + eps) return false;
  if (std::abs(half * dx + root3half * dy) > apothem + eps) return false;
  if (std::abs(-half * dx + root3half * dy) > apothem + eps) return false;
  return true;
}

HexTopology build_topology(int num_tiers, double cell_radius) {
  if (num_tiers < 0) throw InputDomainError("num_tiers must be >= 0");
  if (!(cell_radius > 0.0)) throw InputDomainError("cell_radius must be positive");

  HexTopology topo;
  topo.num_tiers_ = num_tiers;
  topo.cell_radius_ = cell_radius;

  topo.axial_.push_back(AxialCoord{0, 0});
  topo.tier_of_.push_back(0);
  for (int ring = 1; ring <= num_tiers; ++ring) {
    AxialCoord c{ring, 0};  // the ring's +x-axis cell
    for (int side = 0; side < 6; ++side) {
      // Walk starts sideways (direction index 2) so the first step leaves
      // the +x cell counterclockwise.
      const int dir = (side + 2) % 6;
      for (int step = 0; step < ring; ++step) {
        topo.axial_.push_back(c);
        topo.tier_of_.push_back(ring);
        c.a += kStepA[dir];
        c.b += kStepB[dir];
      }
    }
  }
  topo.centers_.reserve(topo.axial_.size());
  for (const AxialCoord& c : topo.axial_) {
    topo.centers_.push_back(lattice_to_xy(c, cell_radius));
  }
  return topo;
}

std::vector<CellId> neighbor_set(const HexTopology& topo, CellId j, int tiers) {
  if (tiers < 0) throw InputDomainError("tier count must be >= 0");
  std::vector<CellId> out;
  for (CellId l = 1; l <= topo.cell_count(); ++l) {
    const int d = topo.hex_distance(j, l);
    if (d >= 1 && d <= tiers) out.push_back(l);
  }
  return out;
}

std::vector<CellId> coop_set(const HexTopology& topo, CellId j, int tiers) {
  std::vector<CellId> out = neighbor_set(topo, j, tiers);
  out.insert(std::lower_bound(out.begin(), out.end(), j), j);
  return out;
}

NeighborSets::NeighborSets(const HexTopology& topo) {
  cells_ = topo.cell_count();
  max_tier_ = 2 * topo.num_tiers();
  rings_.resize(cells_);
  neighbors_cum_.resize(cells_);
  coop_cum_.resize(cells_);
  for (CellId j = 1; j <= cells_; ++j) {
    auto& ring = rings_[j - 1];
    ring.assign(max_tier_ + 1, {});
    for (CellId l = 1; l <= cells_; ++l) {
      ring[topo.hex_distance(j, l)].push_back(l);
    }
    auto& ncum = neighbors_cum_[j - 1];
    auto& ccum = coop_cum_[j - 1];
    ncum.resize(max_tier_ + 1);
    ccum.resize(max_tier_ + 1);
    ccum[0] = {j};
    for (int m = 1; m <= max_tier_; ++m) {
      ncum[m] = ncum[m - 1];
      ncum[m].insert(ncum[m].end(), ring[m].begin(), ring[m].end());
      std::sort(ncum[m].begin(), ncum[m].end());
      ccum[m] = ncum[m];
      ccum[m].insert(std::lower_bound(ccum[m].begin(), ccum[m].end(), j), j);
    }
  }
}

const std::vector<CellId>& NeighborSets::ring(CellId j, int m) const {
  static const std::vector<CellId> kEmpty;
  if (j < 1 || j > cells_) throw InputDomainError("unknown cell id " + std::to_string(j));
  if (m < 0 || m > max_tier_) return kEmpty;
  return rings_[j - 1][m];
}

const std::vector<CellId>& NeighborSets::neighbors(CellId j, int tiers) const {
  if (j < 1 || j > cells_) throw InputDomainError("unknown cell id " + std::to_string(j));
  if (tiers < 0) throw InputDomainError("tier count must be >= 0");
  return neighbors_cum_[j - 1][std::min(tiers, max_tier_)];
}

const std::vector<CellId>& NeighborSets::coop(CellId j, int tiers) const {
  if (j < 1 || j > cells_) throw InputDomainError("unknown cell id " + std::to_string(j));
  if (tiers < 0) throw InputDomainError("tier count must be >= 0");
  return coop_cum_[j - 1][std::min(tiers, max_tier_)];
}

std::string topology_manifest_json(const HexTopology& topo, const NeighborSets& sets) {
  nlohmann::ordered_json m;
  m["J"] = topo.cell_count();
  m["radius_m"] = topo.cell_radius();
  auto centers = nlohmann::ordered_json::array();
  for (const Vec2& c : topo.centers()) centers.push_back({c.x, c.y});
  m["centers"] = std::move(centers);
  nlohmann::ordered_json ringsj;
  for (CellId j = 1; j <= topo.cell_count(); ++j) {
    nlohmann::ordered_json per_tier;
    for (int t = 1; t <= sets.max_tier(); ++t) {
      const auto& r = sets.ring(j, t);
      if (!r.empty()) per_tier[std::to_string(t)] = r;
    }
    ringsj[std::to_string(j)] = std::move(per_tier);
  }
  m["neighbor_rings"] = std::move(ringsj);
  return m.dump(2) + "\n";
}

}  // namespace uavnoma
