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

#include "uavnoma/schemes.hpp"

namespace uavnoma {

/// Batch sweep description. Every field can be set from a flat key=value
/// config file using exactly these names; dBm values are converted to watts
/// at solve time.
struct SweepConfig {
  int trials = 10;
  std::uint64_t base_seed = 1;
  std::vector<int> k_values = {37, 74, 111, 148, 185, 222};
  std::vector<double> pmax_values_dbm = {0, 5, 10, 15, 20, 25, 30};
  std::vector<double> mu_values;  // empty -> {0} + logspace(-2, 2, 15)
  std::vector<int> m_values = {0, 1, 2, 3};
  std::vector<std::string> schemes = {"egoistic", "altruistic", "oma",
                                      "noncoop-noma", "coop-noma",
                                      "non-orth-egoistic", "non-orth-general"};
  std::string channel_mode = "3gpp";
  std::string output_dir = ".";
  // Scenario shape shared by all runs.
  int num_tiers = 3;
  double cell_radius_m = 800.0;
  int num_rb = 30;
  int icic_tiers = 1;
  int k_default = 150;
  double pmax_default_dbm = 20.0;
  double mu_default = 1.0;
  int m_default = 1;
  std::vector<int> ue_ids;  // fig6 selection; empty -> first 10 scheduled
  int jobs = 0;             // worker threads; 0 = hardware concurrency
  bool timing = false;      // emit measured wall_ms (breaks byte determinism)

  std::vector<double> effective_mu_values() const;
};

/// Parses `key = value` lines (# comments, blank lines allowed); lists are
/// comma separated. Unknown keys and malformed values raise ConfigError
/// naming the key.
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

/// One solver run. objective_q = uav_rate + mu * ground_rate.
struct ExperimentRow {
  std::uint64_t seed = 0;
  std::string scheme;
  int k = 0;
  double pmax_dbm = 0.0;
  double mu = 0.0;  // +inf encodes the altruistic endpoint
  int m = 0;
  double uav_rate = 0.0;
  double ground_rate = 0.0;
  double baseline_ground_rate = 0.0;
  double objective_q = 0.0;
  int outer_iters = 0;
  double wall_ms = 0.0;
};

std::string rows_to_csv(const std::vector<ExperimentRow>& rows);
/// Mean and standard error over trials, grouped by every column but seed.
std::string summary_to_csv(const std::vector<ExperimentRow>& rows);

/// Per-UE rate rows for the fairness study.
struct UeRateRow {
  std::uint64_t seed = 0;
  std::string scheme;
  double mu = 0.0;
  int ue_id = 0;
  double rate = 0.0;
  double baseline_rate = 0.0;
  bool protected_ue = false;  // rate equals baseline across the whole sweep
};

std::string ue_rows_to_csv(const std::vector<UeRateRow>& rows);

/// Scheme dispatch by CLI name: egoistic | altruistic | oma | noncoop-noma
/// (coop-noma with M = 0) | coop-noma | non-orth-egoistic | non-orth-general.
/// Returns the result and the outer iteration count (0 for closed forms).
SchemeResult solve_scheme(const Scenario& s, const std::string& scheme);
const std::vector<std::string>& known_schemes();

/// UAV rate versus ground-UE count for the altruistic family and OMA.
std::vector<ExperimentRow> run_figure3(const SweepConfig& cfg);
/// Network sum-rate versus the UAV power budget for the solver family.
std::vector<ExperimentRow> run_figure4(const SweepConfig& cfg);
/// Rate-region sweep over mu, with egoistic/altruistic endpoints.
std::vector<ExperimentRow> run_figure5(const SweepConfig& cfg);
/// Individual UE rates across mu.
std::vector<UeRateRow> run_figure6(const SweepConfig& cfg);
/// Full cross product of the configured axes.
std::vector<ExperimentRow> run_custom(const SweepConfig& cfg);

/// Entry point behind the command-line tool; safe to call repeatedly
/// in-process. Exit codes: 0 ok, 1 usage, 2 config/input, 3 internal
/// contract violation.
int cli_main(const std::vector<std::string>& args);

}  // namespace uavnoma
