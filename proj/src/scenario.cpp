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

#include "uavnoma/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "uavnoma/errors.hpp"
#include "uavnoma/rng.hpp"

namespace uavnoma {

namespace {

// Substream tags; changing these re-randomizes every stored scenario.
enum : std::uint64_t {
  kTagUePos = 1,
  kTagUeCell = 2,
  kTagIcicOrder = 3,
  kTagRbScan = 4,
  kTagTerrChan = 5,
  kTagA2gChan = 6,
};

constexpr double kMinUeBsDistM = 10.0;

Vec2 sample_point_in_cell(const HexTopology& topo, CellId j, RngStream& rng) {
  const double r = topo.cell_radius();
  const Vec2 c = topo.center(j);
  const double half_w = std::sqrt(3.0) / 2.0 * r;
  for (;;) {
    Vec2 p{c.x + rng.uniform(-half_w, half_w), c.y + rng.uniform(-r, r)};
    if (!topo.contains(j, p)) continue;
    if (distance2d(p, c) < kMinUeBsDistM) continue;
    return p;
  }
}

}  // namespace

bool RbAssignment::is_occupied(CellId j, int rb) const {
  const auto& occ = occupied[rb];
  return std::binary_search(occ.begin(), occ.end(), j);
}

int RbAssignment::ue_at(CellId j, int rb) const {
  const auto& occ = occupied[rb];
  const auto it = std::lower_bound(occ.begin(), occ.end(), j);
  if (it == occ.end() || *it != j) return 0;
  return serving_ue[rb][static_cast<std::size_t>(it - occ.begin())];
}

int RbAssignment::scheduled_count() const {
  int n = 0;
  for (const auto& occ : occupied) n += static_cast<int>(occ.size());
  return n;
}

std::vector<UePlacement> place_ues(const HexTopology& topo, int total_ues, std::uint64_t seed) {
  const int j_cells = topo.cell_count();
  if (total_ues < j_cells) {
    throw InputDomainError("need at least one UE per cell: K=" + std::to_string(total_ues) +
                           " < J=" + std::to_string(j_cells));
  }
  if (std::sqrt(3.0) / 2.0 * topo.cell_radius() <= kMinUeBsDistM) {
    throw ConfigError("cell radius too small for the 10 m UE-BS separation");
  }
  std::vector<UePlacement> ues;
  ues.reserve(total_ues);
  for (int i = 1; i <= total_ues; ++i) {
    CellId home;
    if (i <= j_cells) {
      home = i;
    } else {
      RngStream cell_rng = RngStream::derive(seed, kTagUeCell, static_cast<std::uint64_t>(i));
      home = 1 + static_cast<CellId>(cell_rng.uniform_int(j_cells));
    }
    RngStream pos_rng = RngStream::derive(seed, kTagUePos, static_cast<std::uint64_t>(i));
    ues.push_back(UePlacement{i, home, sample_point_in_cell(topo, home, pos_rng)});
  }
  return ues;
}

RbAssignment icic_assign(const HexTopology& topo, const NeighborSets& sets,
                         const std::vector<UePlacement>& ues, int num_rb, int icic_tiers,
                         std::uint64_t seed) {
  if (icic_tiers < 1) throw InputDomainError("icic_tiers must be >= 1");
  if (num_rb < 1) throw InputDomainError("num_rb must be >= 1");

  RbAssignment asg;
  asg.num_rb = num_rb;
  asg.occupied.assign(num_rb, {});
  asg.serving_ue.assign(num_rb, {});

  // Processing order: the first J UEs (one per cell) in shuffled order, then
  // later arrivals as placed. Appending UEs never reorders earlier ones, so
  // occupancy is nested across K for a fixed seed.
  const int j_cells = topo.cell_count();
  std::vector<int> order;
  order.reserve(ues.size());
  {
    std::vector<int> first(std::min<std::size_t>(ues.size(), j_cells));
    std::iota(first.begin(), first.end(), 0);
    RngStream shuffle_rng = RngStream::derive(seed, kTagIcicOrder);
    shuffle_rng.shuffle(first);
    order = first;
    for (std::size_t i = j_cells; i < ues.size(); ++i) order.push_back(static_cast<int>(i));
  }

  std::vector<std::vector<char>> cell_occupies(num_rb, std::vector<char>(j_cells + 1, 0));
  std::vector<int> scan(num_rb);
  for (int idx : order) {
    const UePlacement& ue = ues[idx];
    RngStream scan_rng = RngStream::derive(seed, kTagRbScan, static_cast<std::uint64_t>(ue.ue_id));
    std::iota(scan.begin(), scan.end(), 0);
    scan_rng.shuffle(scan);
    const std::vector<CellId>& guard = sets.coop(ue.home_cell, icic_tiers);
    int chosen = -1;
    for (int rb : scan) {
      bool free = true;
      for (CellId l : guard) {
        if (cell_occupies[rb][l]) {
          free = false;
          break;
        }
      }
      if (free) {
        chosen = rb;
        break;
      }
    }
    if (chosen < 0) {
      asg.blocked_ues.push_back(ue.ue_id);
      continue;
    }
    cell_occupies[chosen][ue.home_cell] = 1;
    auto& occ = asg.occupied[chosen];
    auto& srv = asg.serving_ue[chosen];
    const auto it = std::lower_bound(occ.begin(), occ.end(), ue.home_cell);
    srv.insert(srv.begin() + (it - occ.begin()), ue.ue_id);
    occ.insert(it, ue.home_cell);
  }
  std::sort(asg.blocked_ues.begin(), asg.blocked_ues.end());
  return asg;
}

Scenario make_scenario(HexTopology topo, int num_rb, RbAssignment assignment,
                       CellRbTable ground_snr, CellRbTable uav_gain, double p_max_w, double mu,
                       int cancel_tiers, std::uint64_t seed, int icic_tiers) {
  Scenario s;
  s.rings = NeighborSets(topo);
  s.topology = std::move(topo);
  s.num_rb = num_rb;
  s.assignment = std::move(assignment);
  s.ground_snr = std::move(ground_snr);
  s.uav_gain = std::move(uav_gain);
  s.p_max_w = p_max_w;
  s.mu = mu;
  s.cancel_tiers = cancel_tiers;
  s.icic_tiers = icic_tiers;
  s.seed = seed;
  s.uav_gain_norm = CellRbTable(s.cell_count(), num_rb);
  for (int n = 0; n < num_rb; ++n) {
    for (CellId j = 1; j <= s.cell_count(); ++j) {
      s.uav_gain_norm(j, n) = s.uav_gain(j, n) / (1.0 + s.ground_snr(j, n));
    }
  }
  validate_scenario(s);
  return s;
}

void validate_scenario(const Scenario& s) {
  const int j_cells = s.cell_count();
  auto fail = [](const std::string& what) { throw ContractViolation("scenario: " + what); };
  if (s.num_rb < 1) fail("N must be >= 1");
  if (s.cancel_tiers < 0) fail("cancellation size M must be >= 0");
  if (!(s.mu >= 0.0)) fail("weight mu must be >= 0");
  if (!(s.p_max_w > 0.0)) fail("p_max_w must be positive");
  if (s.ground_snr.num_cells() != j_cells || s.ground_snr.num_rb() != s.num_rb ||
      s.uav_gain.num_cells() != j_cells || s.uav_gain.num_rb() != s.num_rb ||
      s.uav_gain_norm.num_cells() != j_cells || s.uav_gain_norm.num_rb() != s.num_rb) {
    fail("gain table dimensions do not match (J, N)");
  }
  if (static_cast<int>(s.assignment.occupied.size()) != s.num_rb ||
      static_cast<int>(s.assignment.serving_ue.size()) != s.num_rb) {
    fail("assignment tables do not cover all RBs");
  }
  std::vector<char> seen_ue;
  for (int n = 0; n < s.num_rb; ++n) {
    const auto& occ = s.assignment.occupied[n];
    if (occ.size() != s.assignment.serving_ue[n].size()) fail("occupied/serving_ue misaligned");
    if (!std::is_sorted(occ.begin(), occ.end())) fail("occupied cell lists must be sorted");
    if (std::adjacent_find(occ.begin(), occ.end()) != occ.end()) {
      fail("a cell serves two UEs on one RB");
    }
    for (CellId j : occ) {
      if (j < 1 || j > j_cells) fail("occupied cell id out of range");
    }
    for (int ue : s.assignment.serving_ue[n]) {
      if (ue <= 0) fail("serving UE ids must be positive");
      if (ue >= static_cast<int>(seen_ue.size())) seen_ue.resize(ue + 1, 0);
      if (seen_ue[ue]) fail("UE " + std::to_string(ue) + " appears on two (cell, RB) pairs");
      seen_ue[ue] = 1;
    }
    for (CellId j = 1; j <= j_cells; ++j) {
      const double g = s.ground_snr(j, n);
      const double f = s.uav_gain(j, n);
      const double fn = s.uav_gain_norm(j, n);
      if (!std::isfinite(g) || !std::isfinite(f) || !std::isfinite(fn)) {
        fail("non-finite gain entry");
      }
      if (!(f > 0.0)) fail("UAV gain must be strictly positive");
      if (s.is_occupied(j, n)) {
        if (!(g > 0.0)) fail("occupied (cell, RB) must have positive ground SNR");
      } else if (g != 0.0) {
        fail("unoccupied (cell, RB) must have zero ground SNR");
      }
      if (fn != f / (1.0 + g)) fail("normalized gain cache out of date");
    }
  }
  // ICIC feasibility: co-channel cells are mutually outside q tiers.
  for (int n = 0; n < s.num_rb; ++n) {
    const auto& occ = s.assignment.occupied[n];
    for (std::size_t i = 0; i < occ.size(); ++i) {
      for (std::size_t k = i + 1; k < occ.size(); ++k) {
        if (s.topology.hex_distance(occ[i], occ[k]) <= s.icic_tiers) {
          fail("ICIC violation: cells " + std::to_string(occ[i]) + " and " +
               std::to_string(occ[k]) + " share RB " + std::to_string(n));
        }
      }
    }
  }
}

double baseline_ground_rate_rb(const Scenario& s, int rb) {
  double sum = 0.0;
  for (CellId j : s.occupied(rb)) sum += std::log2(1.0 + s.ground_snr(j, rb));
  return sum;
}

double baseline_ground_sum_rate(const Scenario& s) {
  double sum = 0.0;
  for (int n = 0; n < s.num_rb; ++n) sum += baseline_ground_rate_rb(s, n);
  return sum;
}

GeneratedScenario generate_scenario(const GenConfig& cfg) {
  HexTopology topo = build_topology(cfg.num_tiers, cfg.cell_radius_m);
  NeighborSets sets(topo);
  GeneratedScenario out;
  out.ues = place_ues(topo, cfg.total_ues, cfg.seed);
  RbAssignment asg = icic_assign(topo, sets, out.ues, cfg.num_rb, cfg.icic_tiers, cfg.seed);

  out.noise_w = noise_power_w(cfg.channel);
  out.ue_power_w = dbm_to_watts(cfg.ue_power_dbm);

  const int j_cells = topo.cell_count();
  const Vec3 uav{cfg.uav_xy.x, cfg.uav_xy.y, cfg.channel.uav_altitude_m};
  out.a2g_gain_lin.assign(j_cells + 1, 0.0);
  CellRbTable uav_gain(j_cells, cfg.num_rb);
  for (CellId j = 1; j <= j_cells; ++j) {
    const Vec2 c = topo.center(j);
    RngStream rng = RngStream::derive(cfg.seed, kTagA2gChan, static_cast<std::uint64_t>(j));
    const double g = a2g_gain(cfg.channel, uav, Vec3{c.x, c.y, cfg.channel.bs_height_m}, rng)
                         .power_gain;
    out.a2g_gain_lin[j] = g;
    for (int n = 0; n < cfg.num_rb; ++n) uav_gain(j, n) = g / out.noise_w;  // frequency flat
  }

  out.terr_gain_lin.assign(cfg.total_ues + 1, 0.0);
  CellRbTable gamma(j_cells, cfg.num_rb, 0.0);
  for (int n = 0; n < cfg.num_rb; ++n) {
    const auto& occ = asg.occupied[n];
    for (std::size_t i = 0; i < occ.size(); ++i) {
      const CellId j = occ[i];
      const int ue_id = asg.serving_ue[n][i];
      const UePlacement& ue = out.ues[ue_id - 1];
      const Vec2 c = topo.center(j);
      RngStream rng = RngStream::derive(cfg.seed, kTagTerrChan, static_cast<std::uint64_t>(ue_id));
      const double h = terrestrial_gain(cfg.channel, Vec3{ue.pos.x, ue.pos.y, cfg.channel.ue_height_m},
                                        Vec3{c.x, c.y, cfg.channel.bs_height_m}, rng)
                           .power_gain;
      out.terr_gain_lin[ue_id] = h;
      gamma(j, n) = out.ue_power_w * h / out.noise_w;
    }
  }

  out.scenario = make_scenario(std::move(topo), cfg.num_rb, std::move(asg), std::move(gamma),
                               std::move(uav_gain), dbm_to_watts(cfg.p_max_dbm), cfg.mu,
                               cfg.cancel_tiers, cfg.seed, cfg.icic_tiers);
  return out;
}

std::string scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["topology_ref"] = {{"num_tiers", s.topology.num_tiers()},
                       {"cell_radius_m", s.topology.cell_radius()}};
  j["N"] = s.num_rb;
  j["occupied"] = s.assignment.occupied;
  j["serving_ue"] = s.assignment.serving_ue;
  auto dense = [&](const CellRbTable& t) {
    auto rows = nlohmann::ordered_json::array();
    for (int n = 0; n < s.num_rb; ++n) {
      auto row = nlohmann::ordered_json::array();
      for (CellId c = 1; c <= s.cell_count(); ++c) row.push_back(t(c, n));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["gamma"] = dense(s.ground_snr);
  j["F"] = dense(s.uav_gain);
  j["p_max_w"] = s.p_max_w;
  j["mu"] = s.mu;
  j["M"] = s.cancel_tiers;
  j["icic_tiers"] = s.icic_tiers;
  j["seed"] = s.seed;
  return j.dump(1) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
  }
  try {
    HexTopology topo = build_topology(j.at("topology_ref").at("num_tiers").get<int>(),
                                      j.at("topology_ref").at("cell_radius_m").get<double>());
    const int num_rb = j.at("N").get<int>();
    RbAssignment asg;
    asg.num_rb = num_rb;
    asg.occupied = j.at("occupied").get<std::vector<std::vector<CellId>>>();
    asg.serving_ue = j.at("serving_ue").get<std::vector<std::vector<int>>>();
    const int j_cells = topo.cell_count();
    auto parse_dense = [&](const nlohmann::json& rows) {
      CellRbTable t(j_cells, num_rb);
      if (static_cast<int>(rows.size()) != num_rb) {
        throw ConfigError("scenario JSON: gain table does not have N rows");
      }
      for (int n = 0; n < num_rb; ++n) {
        const auto& row = rows[n];
        if (static_cast<int>(row.size()) != j_cells) {
          throw ConfigError("scenario JSON: gain row does not have J entries");
        }
        for (CellId c = 1; c <= j_cells; ++c) t(c, n) = row[c - 1].get<double>();
      }
      return t;
    };
    return make_scenario(std::move(topo), num_rb, std::move(asg), parse_dense(j.at("gamma")),
                         parse_dense(j.at("F")), j.at("p_max_w").get<double>(),
                         j.at("mu").get<double>(), j.at("M").get<int>(),
                         j.at("seed").get<std::uint64_t>(), j.value("icic_tiers", 1));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  f << scenario_to_json(s);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return scenario_from_json(ss.str());
}

}  // namespace uavnoma
