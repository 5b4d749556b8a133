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

#include "uavnoma/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "uavnoma/errors.hpp"
#include "uavnoma/schemes.hpp"

namespace uavnoma {

namespace {

constexpr double kLn2 = 0.6931471805599453094;

/// Cells of the RB sorted by normalized gain (descending), id ascending on
/// ties.
std::vector<CellId> cells_by_gain(const Scenario& s, int rb) {
  std::vector<CellId> order(s.cell_count());
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](CellId a, CellId b) {
    return s.uav_gain_norm(a, rb) > s.uav_gain_norm(b, rb);
  });
  return order;
}

std::vector<double> gains_of_assoc(const Scenario& s, const std::vector<CellId>& assoc) {
  std::vector<double> gains(s.num_rb);
  for (int n = 0; n < s.num_rb; ++n) gains[n] = s.uav_gain_norm(assoc[n], n);
  return gains;
}

// The internal power machinery works on effective per-RB gains so the
// restricted benchmark can silence fully-occupied RBs with a zero gain.

double objective_impl(const Scenario& s, const std::vector<double>& gains,
                      const std::vector<std::vector<CellId>>& omega,
                      const std::vector<double>& p) {
  double obj = 0.0;
  for (int n = 0; n < s.num_rb; ++n) {
    obj += std::log2(1.0 + p[n] * gains[n]);
    obj += s.mu * ground_sum_rate_ic(s, n, p[n], omega[n]);
  }
  return obj;
}

std::vector<double> inner_step_impl(const Scenario& s, const std::vector<double>& gains,
                                    const ScaLinearization& lin) {
  const int n_rb = s.num_rb;
  std::vector<double> inv_gain(n_rb);  // (1 + gamma_{j_n}) / F_{j_n}; inf silences the RB
  for (int n = 0; n < n_rb; ++n) {
    inv_gain[n] = gains[n] > 0.0 ? 1.0 / gains[n] : std::numeric_limits<double>::infinity();
  }

  // Unconstrained stationary point; unbounded if any active RB has
  // mu * b = 0, which forces the budget-binding branch.
  bool unbounded = false;
  double total = 0.0;
  std::vector<double> p(n_rb, 0.0);
  for (int n = 0; n < n_rb; ++n) {
    if (gains[n] <= 0.0) continue;
    const double mb = s.mu * lin.b_coeff[n];
    if (mb <= 0.0) {
      unbounded = true;
      break;
    }
    p[n] = std::max(0.0, 1.0 / (mb * kLn2) - inv_gain[n]);
    total += p[n];
  }
  if (!unbounded && total <= s.p_max_w) return p;

  // Budget binds: bisect on nu > 0 so that the powers
  // max(0, 1/((mu b + nu) ln 2) - (1+gamma)/F) spend exactly P_max.
  const auto fill = [&](double nu) {
    double spent = 0.0;
    for (int n = 0; n < n_rb; ++n) {
      p[n] = std::max(0.0, 1.0 / ((s.mu * lin.b_coeff[n] + nu) * kLn2) - inv_gain[n]);
      spent += p[n];
    }
    return spent;
  };
  double lo = 0.0;  // spends > P_max (possibly infinite); never evaluated
  double hi = 1e-300;
  for (int n = 0; n < n_rb; ++n) {
    if (gains[n] > 0.0) hi = std::max(hi, gains[n] / kLn2);  // spends 0
  }
  const double tol = 1e-10 * s.p_max_w;
  double spent = fill(0.5 * (lo + hi));
  for (int it = 0; it < 200 && std::abs(spent - s.p_max_w) > tol; ++it) {
    (spent > s.p_max_w ? lo : hi) = 0.5 * (lo + hi);
    spent = fill(0.5 * (lo + hi));
  }
  if (spent > s.p_max_w * (1.0 + 1e-9)) fill(hi);  // stay feasible
  return p;
}

std::vector<double> power_alloc_impl(const Scenario& s, const std::vector<double>& gains,
                                     const std::vector<std::vector<CellId>>& omega,
                                     std::vector<double> p, double eps, int max_iter,
                                     ScaState* state) {
  double obj = objective_impl(s, gains, omega, p);
  ScaState local;
  ScaState& st = state ? *state : local;
  st = ScaState{};
  st.objective_trace.push_back(obj);
  for (int it = 1; it <= max_iter; ++it) {
    const ScaLinearization lin = sca_linearize(s, omega, p);
    p = inner_step_impl(s, gains, lin);
    const double next = objective_impl(s, gains, omega, p);
    st.objective_trace.push_back(next);
    st.iterations = it;
    if (next - obj <= eps * std::max(std::abs(obj), 1e-12)) return p;
    obj = next;
  }
  st.hit_cap = true;
  return p;
}

}  // namespace

ScaLinearization sca_linearize(const Scenario& s, const std::vector<std::vector<CellId>>& omega,
                               const std::vector<double>& p_current) {
  ScaLinearization lin;
  lin.b_coeff.assign(s.num_rb, 0.0);
  for (int n = 0; n < s.num_rb; ++n) {
    const double p = p_current[n];
    double b = 0.0;
    for (CellId j : s.occupied(n)) {
      if (std::binary_search(omega[n].begin(), omega[n].end(), j)) continue;
      const double f = s.uav_gain(j, n);
      const double g = s.ground_snr(j, n);
      lin.a_const += std::log2(1.0 + g / (1.0 + p * f));
      b += f * g / (kLn2 * (1.0 + p * f + g) * (1.0 + p * f));
    }
    lin.b_coeff[n] = b;
  }
  return lin;
}

std::vector<double> sca_inner_step(const Scenario& s, const std::vector<CellId>& assoc,
                                   const ScaLinearization& lin) {
  return inner_step_impl(s, gains_of_assoc(s, assoc), lin);
}

double power_subproblem_objective(const Scenario& s, const std::vector<CellId>& assoc,
                                  const std::vector<std::vector<CellId>>& omega,
                                  const std::vector<double>& p) {
  return objective_impl(s, gains_of_assoc(s, assoc), omega, p);
}

std::vector<double> sca_power_alloc(const Scenario& s, const std::vector<CellId>& assoc,
                                    const std::vector<std::vector<CellId>>& omega,
                                    std::vector<double> p_init, double eps, int max_iter,
                                    ScaState* state) {
  return power_alloc_impl(s, gains_of_assoc(s, assoc), omega, std::move(p_init), eps, max_iter,
                          state);
}

AssocChoice associate_rb(const Scenario& s, int rb, double power_w) {
  const auto& occ = s.occupied(rb);
  if (occ.empty()) {
    const BestGain best = best_norm_gain(s, rb);
    return AssocChoice{best.cell, std::log2(1.0 + power_w * best.gain)};
  }

  const std::vector<CellId> order = cells_by_gain(s, rb);
  std::vector<CellId> omega;  // cumulative, sorted
  AssocChoice best{0, -std::numeric_limits<double>::infinity()};
  const int j_cells = s.cell_count();
  int i = 0;
  while (i < j_cells) {
    // Handle equal-gain cells as one block so every candidate is scored
    // with the cancelling set its decodable set actually implies.
    int k = i;
    const double gain = s.uav_gain_norm(order[i], rb);
    while (k < j_cells && s.uav_gain_norm(order[k], rb) == gain) ++k;
    std::vector<CellId> scored;
    for (int t = i; t < k; ++t) {
      const CellId c = order[t];
      bool contributes = false;
      for (CellId l : s.coop(c, s.cancel_tiers)) {
        if (std::binary_search(occ.begin(), occ.end(), l)) {
          contributes = true;
          if (!std::binary_search(omega.begin(), omega.end(), l)) {
            omega.insert(std::lower_bound(omega.begin(), omega.end(), l), l);
          }
        }
      }
      if (contributes || t == 0) scored.push_back(c);
    }
    for (CellId c : scored) {
      const double u = std::log2(1.0 + power_w * s.uav_gain_norm(c, rb)) +
                       s.mu * ground_sum_rate_ic(s, rb, power_w, omega);
      if (u > best.utility) best = AssocChoice{c, u};
    }
    if (omega.size() == occ.size()) break;  // ground rate cannot grow further
    i = k;
  }
  return best;
}

double assoc_utility(const Scenario& s, int rb, double power_w, CellId assoc) {
  const std::vector<CellId> lambda = decodable_set_from_assoc(s, rb, assoc);
  const std::vector<CellId> omega = cancelling_set(s, rb, lambda);
  return std::log2(1.0 + power_w * s.uav_gain_norm(assoc, rb)) +
         s.mu * ground_sum_rate_ic(s, rb, power_w, omega);
}

namespace {

/// Best association among unoccupied cells (no-IC benchmark); a zero gain
/// marks an RB with no unoccupied cell, which must stay silent.
void restricted_assoc(const Scenario& s, int rb, CellId* cell, double* gain) {
  *gain = 0.0;
  *cell = best_norm_gain(s, rb).cell;
  for (CellId j = 1; j <= s.cell_count(); ++j) {
    if (s.is_occupied(j, rb)) continue;
    const double g = s.uav_gain_norm(j, rb);
    if (g > *gain) {
      *gain = g;
      *cell = j;
    }
  }
}

std::vector<std::vector<CellId>> omega_for_assoc(const Scenario& s,
                                                 const std::vector<CellId>& assoc, bool use_ic) {
  std::vector<std::vector<CellId>> omega(s.num_rb);
  if (!use_ic) return omega;
  for (int n = 0; n < s.num_rb; ++n) {
    omega[n] = cancelling_set(s, n, decodable_set_from_assoc(s, n, assoc[n]));
  }
  return omega;
}

}  // namespace

AoResult ao_solve(const Scenario& s, const AoOptions& raw_opts) {
  AoOptions opts = raw_opts;
  if (opts.restrict_to_unoccupied) opts.use_ic = false;  // the benchmark has no IC
  AoResult res;
  AoState& st = res.state;

  // Egoistic initialization (restricted to unoccupied cells for the
  // benchmark variant, where fully-occupied RBs start and stay silent).
  std::vector<CellId> assoc(s.num_rb);
  std::vector<double> gains(s.num_rb);
  bool any_gain = false;
  for (int n = 0; n < s.num_rb; ++n) {
    if (opts.restrict_to_unoccupied) {
      restricted_assoc(s, n, &assoc[n], &gains[n]);
    } else {
      const BestGain best = best_norm_gain(s, n);
      assoc[n] = best.cell;
      gains[n] = best.gain;
    }
    any_gain = any_gain || gains[n] > 0.0;
  }
  std::vector<double> p(s.num_rb, 0.0);
  if (any_gain) p = water_fill(WaterFillProblem{gains, s.p_max_w});

  auto objective = [&](const std::vector<double>& pw) {
    return objective_impl(s, gains, omega_for_assoc(s, assoc, opts.use_ic), pw);
  };
  double q = objective(p);
  st.q_trace.push_back(q);

  for (int m = 1; m <= opts.max_outer; ++m) {
    const auto omega = omega_for_assoc(s, assoc, opts.use_ic);
    ScaState sca;
    p = power_alloc_impl(s, gains, omega, std::move(p), opts.eps_inner, opts.max_inner, &sca);
    st.inner_iters_per_outer.push_back(sca.iterations);
    st.hit_inner_cap = st.hit_inner_cap || sca.hit_cap;

    if (opts.use_ic) {
      for (int n = 0; n < s.num_rb; ++n) {
        const AssocChoice pick = associate_rb(s, n, p[n]);
        // Keep the incumbent on ties so the trace cannot oscillate.
        if (pick.utility > assoc_utility(s, n, p[n], assoc[n])) {
          assoc[n] = pick.cell;
          gains[n] = s.uav_gain_norm(pick.cell, n);
        }
      }
    }
    const double next = objective(p);
    st.q_trace.push_back(next);
    if (next - q <= opts.eps_outer * std::max(std::abs(q), 1e-12)) break;
    q = next;
    if (m == opts.max_outer) st.hit_outer_cap = true;
  }

  res.alloc.power_w = p;
  res.alloc.assoc = assoc;
  res.alloc.rate_bpshz.resize(s.num_rb);
  for (int n = 0; n < s.num_rb; ++n) {
    // Silent RBs keep zero rate even though an association is reported.
    res.alloc.rate_bpshz[n] = std::log2(1.0 + p[n] * s.uav_gain_norm(assoc[n], n));
  }
  if (opts.use_ic) {
    res.sets = build_noma_sets(s, res.alloc);
  } else {
    res.sets.decodable.resize(s.num_rb);
    res.sets.cancelling.resize(s.num_rb);
    for (int n = 0; n < s.num_rb; ++n) {
      if (res.alloc.power_w[n] > 0.0) res.sets.decodable[n] = {assoc[n]};
    }
  }
  res.report = evaluate_with_sets(s, res.alloc, res.sets);
  return res;
}

std::string ao_diagnostics_json(const AoState& state) {
  nlohmann::ordered_json j;
  j["outer_iters"] = state.outer_iters();
  j["inner_iters_per_outer"] = state.inner_iters_per_outer;
  j["q_trace"] = state.q_trace;
  j["flags"] = {{"hit_outer_cap", state.hit_outer_cap}, {"hit_inner_cap", state.hit_inner_cap}};
  return j.dump(1) + "\n";
}

}  // namespace uavnoma
