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

#include "uavnoma/noma.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "uavnoma/errors.hpp"

namespace uavnoma {

double uav_rate_at_bs(const Scenario& s, CellId j, int rb, double power_w) {
  return std::log2(1.0 + power_w * s.uav_gain_norm(j, rb));
}

BestGain best_norm_gain(const Scenario& s, int rb) {
  BestGain best{s.uav_gain_norm(1, rb), 1};
  for (CellId j = 2; j <= s.cell_count(); ++j) {
    const double g = s.uav_gain_norm(j, rb);
    if (g > best.gain) best = BestGain{g, j};
  }
  return best;
}

std::vector<CellId> decodable_set(const Scenario& s, int rb, double power_w, double rate) {
  if (rate < 0.0) throw InputDomainError("rate must be >= 0");
  std::vector<CellId> out;
  for (CellId j = 1; j <= s.cell_count(); ++j) {
    if (uav_rate_at_bs(s, j, rb, power_w) >= rate - kRateTol) out.push_back(j);
  }
  return out;
}

std::vector<CellId> decodable_set_from_assoc(const Scenario& s, int rb, CellId assoc) {
  const double threshold = s.uav_gain_norm(assoc, rb);  // validates assoc
  std::vector<CellId> out;
  for (CellId j = 1; j <= s.cell_count(); ++j) {
    if (s.uav_gain_norm(j, rb) >= threshold) out.push_back(j);
  }
  return out;
}

std::vector<CellId> cancelling_set(const Scenario& s, int rb,
                                   const std::vector<CellId>& decodable) {
  const auto& occ = s.occupied(rb);
  std::vector<char> covered(occ.size(), 0);
  for (CellId j : decodable) {
    const auto& coop = s.coop(j, s.cancel_tiers);
    for (std::size_t i = 0; i < occ.size(); ++i) {
      if (!covered[i] && std::binary_search(coop.begin(), coop.end(), occ[i])) covered[i] = 1;
    }
  }
  std::vector<CellId> out;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (covered[i]) out.push_back(occ[i]);
  }
  return out;
}

double ground_sum_rate_ic(const Scenario& s, int rb, double power_w,
                          const std::vector<CellId>& omega) {
  double sum = 0.0;
  for (CellId j : s.occupied(rb)) {
    const double snr = s.ground_snr(j, rb);
    if (std::binary_search(omega.begin(), omega.end(), j)) {
      sum += std::log2(1.0 + snr);
    } else {
      sum += std::log2(1.0 + snr / (1.0 + power_w * s.uav_gain(j, rb)));
    }
  }
  return sum;
}

double ground_sum_rate_no_ic(const Scenario& s, int rb, double power_w) {
  return ground_sum_rate_ic(s, rb, power_w, {});
}

NomaSets build_noma_sets(const Scenario& s, const UavAllocation& alloc) {
  NomaSets sets;
  sets.decodable.resize(s.num_rb);
  sets.cancelling.resize(s.num_rb);
  for (int n = 0; n < s.num_rb; ++n) {
    sets.decodable[n] = alloc.has_assoc()
                            ? decodable_set_from_assoc(s, n, alloc.assoc[n])
                            : decodable_set(s, n, alloc.power_w[n], alloc.rate_bpshz[n]);
    sets.cancelling[n] = cancelling_set(s, n, sets.decodable[n]);
  }
  return sets;
}

void check_allocation(const Scenario& s, const UavAllocation& alloc) {
  auto fail = [](const std::string& what) { throw ContractViolation("allocation: " + what); };
  const std::size_t n_rb = static_cast<std::size_t>(s.num_rb);
  if (alloc.power_w.size() != n_rb || alloc.rate_bpshz.size() != n_rb) {
    fail("power/rate vectors must cover all RBs");
  }
  if (alloc.has_assoc() && alloc.assoc.size() != n_rb) {
    fail("association vector must cover all RBs when present");
  }
  double total = 0.0;
  for (int n = 0; n < s.num_rb; ++n) {
    const double p = alloc.power_w[n];
    const double r = alloc.rate_bpshz[n];
    if (!(p >= 0.0) || !std::isfinite(p)) fail("power must be finite and >= 0");
    if (!(r >= 0.0) || !std::isfinite(r)) fail("rate must be finite and >= 0");
    total += p;
    const double cap = std::log2(1.0 + p * best_norm_gain(s, n).gain);
    if (r > cap + 1e-9) {
      fail("rate exceeds the decodability cap log2(1 + p*F_u) on RB " + std::to_string(n));
    }
    if (alloc.has_assoc()) {
      const CellId j = alloc.assoc[n];
      const double want = uav_rate_at_bs(s, j, n, p);
      if (std::abs(r - want) > 1e-9 * std::max(1.0, std::abs(want))) {
        fail("rate is not the associated-BS rate on RB " + std::to_string(n));
      }
    }
  }
  if (total > s.p_max_w * (1.0 + 1e-9)) fail("total power exceeds the budget");
}

RateReport evaluate_with_sets(const Scenario& s, const UavAllocation& alloc,
                              const NomaSets& sets) {
  check_allocation(s, alloc);
  RateReport rep;
  rep.uav_rate_per_rb.resize(s.num_rb);
  rep.ground_rate_per_rb.resize(s.num_rb);
  for (int n = 0; n < s.num_rb; ++n) {
    rep.uav_rate_per_rb[n] = alloc.rate_bpshz[n];
    rep.ground_rate_per_rb[n] = ground_sum_rate_ic(s, n, alloc.power_w[n], sets.cancelling[n]);
    rep.uav_total += rep.uav_rate_per_rb[n];
    rep.ground_total += rep.ground_rate_per_rb[n];
    for (std::size_t i = 0; i < s.occupied(n).size(); ++i) {
      const CellId j = s.occupied(n)[i];
      const int ue = s.assignment.serving_ue[n][i];
      const double snr = s.ground_snr(j, n);
      const bool cancelled = std::binary_search(sets.cancelling[n].begin(),
                                                sets.cancelling[n].end(), j);
      const double rate = cancelled
                              ? std::log2(1.0 + snr)
                              : std::log2(1.0 + snr / (1.0 + alloc.power_w[n] * s.uav_gain(j, n)));
      rep.per_ue_rate.emplace_back(ue, rate);
    }
  }
  std::sort(rep.per_ue_rate.begin(), rep.per_ue_rate.end());
  rep.objective_q = rep.uav_total + s.mu * rep.ground_total;
  return rep;
}

RateReport evaluate(const Scenario& s, const UavAllocation& alloc) {
  check_allocation(s, alloc);
  return evaluate_with_sets(s, alloc, build_noma_sets(s, alloc));
}

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string report_to_json(const Scenario& s, const UavAllocation& alloc, const NomaSets& sets,
                           const RateReport& report) {
  nlohmann::ordered_json j;
  j["uav_total_bpshz"] = report.uav_total;
  j["ground_total_bpshz"] = report.ground_total;
  j["baseline_ground_bpshz"] = baseline_ground_sum_rate(s);
  j["objective_q"] = report.objective_q;
  j["mu"] = s.mu;
  j["M"] = s.cancel_tiers;
  auto rows = nlohmann::ordered_json::array();
  for (int n = 0; n < s.num_rb; ++n) {
    rows.push_back({{"rb", n + 1},
                    {"p_w", alloc.power_w[n]},
                    {"r_bpshz", alloc.rate_bpshz[n]},
                    {"assoc", alloc.has_assoc() ? alloc.assoc[n] : 0},
                    {"ground_rate", report.ground_rate_per_rb[n]},
                    {"lambda", sets.decodable[n]},
                    {"omega", sets.cancelling[n]}});
  }
  j["per_rb"] = std::move(rows);
  nlohmann::ordered_json per_ue;
  for (const auto& [ue, rate] : report.per_ue_rate) per_ue[std::to_string(ue)] = rate;
  j["per_ue_rate"] = std::move(per_ue);
  return j.dump(1) + "\n";
}

std::string report_to_csv(const UavAllocation& alloc, const NomaSets& sets,
                          const RateReport& report) {
  std::string out = "rb,p_w,r_bpshz,assoc,ground_rate,lambda_size,omega_size\n";
  for (std::size_t n = 0; n < alloc.power_w.size(); ++n) {
    out += std::to_string(n + 1) + "," + fmt_g(alloc.power_w[n]) + "," +
           fmt_g(alloc.rate_bpshz[n]) + "," +
           std::to_string(alloc.has_assoc() ? alloc.assoc[n] : 0) + "," +
           fmt_g(report.ground_rate_per_rb[n]) + "," +
           std::to_string(sets.decodable[n].size()) + "," +
           std::to_string(sets.cancelling[n].size()) + "\n";
  }
  return out;
}

}  // namespace uavnoma
