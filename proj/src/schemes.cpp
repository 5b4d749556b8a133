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

#include "uavnoma/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavnoma/errors.hpp"
#include "uavnoma/optimizer.hpp"

namespace uavnoma {

std::vector<double> water_fill(const WaterFillProblem& prob) {
  if (!(prob.budget_w > 0.0)) throw InputDomainError("water_fill: budget must be positive");
  double g_max = 0.0;
  double g_min = std::numeric_limits<double>::infinity();
  for (double g : prob.gains) {
    if (g < 0.0 || !std::isfinite(g)) throw InputDomainError("water_fill: gains must be finite and >= 0");
    if (g > 0.0) {
      g_max = std::max(g_max, g);
      g_min = std::min(g_min, g);
    }
  }
  if (g_max == 0.0) throw InputDomainError("water_fill: at least one gain must be positive");

  const auto fill = [&](double level, std::vector<double>& p) {
    double sum = 0.0;
    for (std::size_t n = 0; n < prob.gains.size(); ++n) {
      p[n] = prob.gains[n] > 0.0 ? std::max(0.0, level - 1.0 / prob.gains[n]) : 0.0;
      sum += p[n];
    }
    return sum;
  };

  // Bisection on the water level 1/(lambda ln 2): the spent power is
  // continuous and increasing in the level.
  double lo = 1.0 / g_max;                  // spends 0
  double hi = 1.0 / g_min + prob.budget_w;  // spends >= budget
  std::vector<double> p(prob.gains.size(), 0.0);
  const double tol = 1e-10 * prob.budget_w;
  double spent = fill(0.5 * (lo + hi), p);
  for (int it = 0; it < 200 && std::abs(spent - prob.budget_w) > tol; ++it) {
    (spent > prob.budget_w ? hi : lo) = 0.5 * (lo + hi);
    spent = fill(0.5 * (lo + hi), p);
  }
  if (spent > prob.budget_w * (1.0 + 1e-9)) fill(lo, p);  // stay feasible
  return p;
}

SchemeResult egoistic_solve(const Scenario& s) {
  SchemeResult res;
  WaterFillProblem wf;
  wf.budget_w = s.p_max_w;
  wf.gains.resize(s.num_rb);
  res.alloc.assoc.resize(s.num_rb);
  for (int n = 0; n < s.num_rb; ++n) {
    const BestGain best = best_norm_gain(s, n);
    wf.gains[n] = best.gain;
    res.alloc.assoc[n] = best.cell;
  }
  res.alloc.power_w = water_fill(wf);
  res.alloc.rate_bpshz.resize(s.num_rb);
  res.sets.decodable.resize(s.num_rb);
  res.sets.cancelling.resize(s.num_rb);
  for (int n = 0; n < s.num_rb; ++n) {
    res.alloc.rate_bpshz[n] = std::log2(1.0 + res.alloc.power_w[n] * wf.gains[n]);
    res.sets.decodable[n] = {res.alloc.assoc[n]};
    res.sets.cancelling[n] = cancelling_set(s, n, res.sets.decodable[n]);
  }
  res.report = evaluate_with_sets(s, res.alloc, res.sets);
  return res;
}

SchemeResult altruistic_solve(const Scenario& s) {
  SchemeResult res;
  WaterFillProblem wf;
  wf.budget_w = s.p_max_w;
  wf.gains.resize(s.num_rb);
  res.alloc.assoc.resize(s.num_rb);
  res.sets.decodable.resize(s.num_rb);
  res.sets.cancelling.resize(s.num_rb);
  for (int n = 0; n < s.num_rb; ++n) {
    const auto& occ = s.occupied(n);
    if (occ.empty()) {
      const BestGain best = best_norm_gain(s, n);
      wf.gains[n] = best.gain;
      res.alloc.assoc[n] = best.cell;
      res.sets.decodable[n] = {best.cell};
    } else {
      // One decodable BS per occupied cell: the best normalized gain within
      // its cooperation range. The weakest of those caps the UAV's rate.
      double t_u = std::numeric_limits<double>::infinity();
      CellId assoc = 0;
      std::vector<CellId> lambda;
      for (CellId j : occ) {
        double best_g = -1.0;
        CellId best_l = 0;
        for (CellId l : s.coop(j, s.cancel_tiers)) {
          const double g = s.uav_gain_norm(l, n);
          if (g > best_g) {
            best_g = g;
            best_l = l;
          }
        }
        lambda.push_back(best_l);
        if (best_g < t_u) {
          t_u = best_g;
          assoc = best_l;
        }
      }
      std::sort(lambda.begin(), lambda.end());
      lambda.erase(std::unique(lambda.begin(), lambda.end()), lambda.end());
      wf.gains[n] = t_u;
      res.alloc.assoc[n] = assoc;
      res.sets.decodable[n] = std::move(lambda);
    }
    res.sets.cancelling[n] = cancelling_set(s, n, res.sets.decodable[n]);
  }
  res.alloc.power_w = water_fill(wf);
  res.alloc.rate_bpshz.resize(s.num_rb);
  for (int n = 0; n < s.num_rb; ++n) {
    res.alloc.rate_bpshz[n] = std::log2(1.0 + res.alloc.power_w[n] * wf.gains[n]);
  }
  res.report = evaluate_with_sets(s, res.alloc, res.sets);
  return res;
}

std::optional<int> m0_threshold(const Scenario& s, const std::vector<CellId>& egoistic_assoc) {
  if (static_cast<int>(egoistic_assoc.size()) != s.num_rb) {
    throw InputDomainError("m0_threshold: association must cover all RBs");
  }
  const int max_m = 2 * s.topology.num_tiers();
  for (int m = 0; m <= max_m; ++m) {
    bool ok = true;
    for (int n = 0; n < s.num_rb && ok; ++n) {
      const auto& coop = s.coop(egoistic_assoc[n], m);
      for (CellId j : s.occupied(n)) {
        if (!std::binary_search(coop.begin(), coop.end(), j)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return m;
  }
  return std::nullopt;
}

SchemeResult oma_solve(const Scenario& s) {
  SchemeResult res;
  WaterFillProblem wf;
  wf.budget_w = s.p_max_w;
  wf.gains.assign(s.num_rb, 0.0);
  res.alloc.assoc.resize(s.num_rb);
  bool any_free = false;
  for (int n = 0; n < s.num_rb; ++n) {
    const BestGain best = best_norm_gain(s, n);
    res.alloc.assoc[n] = best.cell;
    if (s.occupied(n).empty()) {
      wf.gains[n] = best.gain;
      any_free = true;
    }
  }
  res.alloc.power_w = any_free ? water_fill(wf) : std::vector<double>(s.num_rb, 0.0);
  res.alloc.rate_bpshz.resize(s.num_rb);
  res.sets.decodable.resize(s.num_rb);
  res.sets.cancelling.resize(s.num_rb);
  for (int n = 0; n < s.num_rb; ++n) {
    res.alloc.rate_bpshz[n] = std::log2(1.0 + res.alloc.power_w[n] * wf.gains[n]);
    if (res.alloc.power_w[n] > 0.0) res.sets.decodable[n] = {res.alloc.assoc[n]};
    res.sets.cancelling[n] = cancelling_set(s, n, res.sets.decodable[n]);
  }
  res.report = evaluate_with_sets(s, res.alloc, res.sets);
  return res;
}

SchemeResult non_orthogonal_solve(const Scenario& s, NonOrthMode mode) {
  if (mode == NonOrthMode::General) {
    const AoResult ao = ao_solve(s, AoOptions{.restrict_to_unoccupied = true, .use_ic = false});
    SchemeResult res{ao.alloc, ao.sets, ao.report, {}};
    res.info.outer_iters = ao.state.outer_iters();
    res.info.hit_cap = ao.state.hit_outer_cap;
    for (int it : ao.state.inner_iters_per_outer) res.info.inner_iters_total += it;
    return res;
  }

  SchemeResult res;
  WaterFillProblem wf;
  wf.budget_w = s.p_max_w;
  wf.gains.assign(s.num_rb, 0.0);
  res.alloc.assoc.resize(s.num_rb);
  bool any_gain = false;
  for (int n = 0; n < s.num_rb; ++n) {
    // Best normalized gain among unoccupied cells; fully occupied RBs stay
    // silent.
    double best_g = 0.0;
    CellId best_j = best_norm_gain(s, n).cell;
    for (CellId j = 1; j <= s.cell_count(); ++j) {
      if (s.is_occupied(j, n)) continue;
      const double g = s.uav_gain_norm(j, n);
      if (g > best_g) {
        best_g = g;
        best_j = j;
      }
    }
    wf.gains[n] = best_g;
    res.alloc.assoc[n] = best_j;
    any_gain = any_gain || best_g > 0.0;
  }
  res.alloc.power_w = any_gain ? water_fill(wf) : std::vector<double>(s.num_rb, 0.0);
  res.alloc.rate_bpshz.resize(s.num_rb);
  res.sets.decodable.resize(s.num_rb);
  res.sets.cancelling.resize(s.num_rb);  // no IC anywhere: all empty
  for (int n = 0; n < s.num_rb; ++n) {
    res.alloc.rate_bpshz[n] = std::log2(1.0 + res.alloc.power_w[n] * wf.gains[n]);
    if (res.alloc.power_w[n] > 0.0) res.sets.decodable[n] = {res.alloc.assoc[n]};
  }
  res.report = evaluate_with_sets(s, res.alloc, res.sets);
  return res;
}

}  // namespace uavnoma
