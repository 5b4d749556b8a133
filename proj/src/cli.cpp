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

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavnoma/errors.hpp"
#include "uavnoma/experiments.hpp"
#include "uavnoma/optimizer.hpp"

namespace uavnoma {

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  f << content;
}

void apply_common_overrides(CLI::App* cmd, SweepConfig* cfg) {
  cmd->add_option("--trials", cfg->trials, "Monte-Carlo trials");
  cmd->add_option("--base-seed", cfg->base_seed, "first trial seed");
  cmd->add_option("--k", cfg->k_values, "ground UE counts (comma separated)")->delimiter(',');
  cmd->add_option("--pmax-dbm", cfg->pmax_values_dbm, "UAV power budgets in dBm")->delimiter(',');
  cmd->add_option("--mu", cfg->mu_values, "ground weights")->delimiter(',');
  cmd->add_option("--m", cfg->m_values, "cancellation sizes")->delimiter(',');
  cmd->add_option("--schemes", cfg->schemes, "schemes for custom sweeps")->delimiter(',');
  cmd->add_option("--channel-mode", cfg->channel_mode, "3gpp | simple");
  cmd->add_option("--out-dir", cfg->output_dir, "output directory");
  cmd->add_option("--num-rb", cfg->num_rb, "RBs available to the UAV");
  cmd->add_option("--tiers", cfg->num_tiers, "topology tier count");
  cmd->add_option("--radius", cfg->cell_radius_m, "cell radius in meters");
  cmd->add_option("--q", cfg->icic_tiers, "terrestrial ICIC exclusion tiers");
  cmd->add_option("--k-default", cfg->k_default, "UE count for fixed-K figures");
  cmd->add_option("--pmax-default-dbm", cfg->pmax_default_dbm, "budget for fixed-power figures");
  cmd->add_option("--mu-default", cfg->mu_default, "weight for fixed-mu figures");
  cmd->add_option("--m-default", cfg->m_default, "cancellation size for fixed-M figures");
  cmd->add_option("--ue-ids", cfg->ue_ids, "UE ids for the per-UE sweep")->delimiter(',');
  cmd->add_option("--jobs", cfg->jobs, "worker threads (0 = hardware)");
  cmd->add_flag("--timing", cfg->timing, "record wall-clock times (non-reproducible bytes)");
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Cellular-uplink cooperative-NOMA simulator"};
  app.require_subcommand(1);

  // gen -------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a scenario JSON");
  GenConfig gc;
  std::string gen_out = "scenario.json";
  std::string gen_manifest;
  std::string gen_mode = "3gpp";
  gen->add_option("--seed", gc.seed, "RNG seed");
  gen->add_option("--k", gc.total_ues, "ground UE count");
  gen->add_option("--num-rb", gc.num_rb, "RBs available to the UAV");
  gen->add_option("--tiers", gc.num_tiers, "topology tier count");
  gen->add_option("--radius", gc.cell_radius_m, "cell radius in meters");
  gen->add_option("--q", gc.icic_tiers, "terrestrial ICIC exclusion tiers");
  gen->add_option("--pmax-dbm", gc.p_max_dbm, "UAV power budget in dBm");
  gen->add_option("--mu", gc.mu, "ground-rate weight");
  gen->add_option("--m", gc.cancel_tiers, "cancellation size M");
  gen->add_option("--channel-mode", gen_mode, "3gpp | simple");
  gen->add_option("--ue-power-dbm", gc.ue_power_dbm, "ground UE transmit power");
  gen->add_option("--uav-x", gc.uav_xy.x, "UAV x position (m)");
  gen->add_option("--uav-y", gc.uav_xy.y, "UAV y position (m)");
  gen->add_option("--uav-altitude", gc.channel.uav_altitude_m, "UAV altitude (m)");
  gen->add_option("--out", gen_out, "scenario output path");
  gen->add_option("--manifest", gen_manifest, "also write the topology manifest here");

  // solve -----------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "solve one scenario with one scheme");
  std::string solve_scenario, solve_scheme_name = "coop-noma";
  std::string solve_out, solve_csv, solve_diag;
  double solve_mu = -1.0, solve_pmax_dbm = std::numeric_limits<double>::quiet_NaN();
  int solve_m = -1;
  solve->add_option("--scenario", solve_scenario, "scenario JSON path")->required();
  solve->add_option("--scheme", solve_scheme_name, "scheme id")->required();
  solve->add_option("--out", solve_out, "report JSON path (stdout if omitted)");
  solve->add_option("--csv", solve_csv, "per-RB CSV path");
  solve->add_option("--diagnostics", solve_diag, "solver diagnostics JSON path");
  solve->add_option("--mu", solve_mu, "override the scenario's mu");
  solve->add_option("--m", solve_m, "override the scenario's M");
  solve->add_option("--pmax-dbm", solve_pmax_dbm, "override the scenario's budget");

  // sweep -----------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "run a Monte-Carlo sweep");
  std::string sweep_kind;
  std::string sweep_config;
  sweep->add_option("kind", sweep_kind, "fig3 | fig4 | fig5 | fig6 | custom")->required();
  sweep->add_option("--config", sweep_config, "flat key=value config file");
  SweepConfig sweep_cfg;
  bool sweep_cfg_loaded = false;
  sweep->callback([&] {
    if (!sweep_config.empty()) {
      SweepConfig file_cfg = load_sweep_config(sweep_config);
      // CLI options already wrote into sweep_cfg; reapply them on top of the
      // file by re-parsing nothing: instead, file is the base only for
      // untouched options. Simpler rule: file first, then explicit flags win.
      std::swap(sweep_cfg, file_cfg);
      sweep_cfg_loaded = true;
    }
  });
  apply_common_overrides(sweep, &sweep_cfg);

  // validate ----------------------------------------------------------------
  auto* validate = app.add_subcommand("validate", "run the invariant suite on a scenario");
  std::string validate_scenario;
  validate->add_option("--scenario", validate_scenario, "scenario JSON path")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  app.parse(std::move(rev));

  if (gen->parsed()) {
    gc.channel.mode = channel_mode_from_string(gen_mode);
    const GeneratedScenario g = generate_scenario(gc);
    write_file(gen_out, scenario_to_json(g.scenario));
    if (!gen_manifest.empty()) {
      write_file(gen_manifest,
                 topology_manifest_json(g.scenario.topology, g.scenario.rings));
    }
    std::cout << "wrote " << gen_out << " (J=" << g.scenario.cell_count()
              << ", N=" << g.scenario.num_rb << ", scheduled UEs "
              << g.scenario.assignment.scheduled_count() << "/" << gc.total_ues << ")\n";
    return 0;
  }

  if (solve->parsed()) {
    Scenario s = load_scenario(solve_scenario);
    if (solve_mu >= 0.0) s.mu = solve_mu;
    if (solve_m >= 0) s.cancel_tiers = solve_m;
    if (!std::isnan(solve_pmax_dbm)) s.p_max_w = dbm_to_watts(solve_pmax_dbm);
    const SchemeResult res = uavnoma::solve_scheme(s, solve_scheme_name);
    const std::string report = report_to_json(s, res.alloc, res.sets, res.report);
    if (solve_out.empty()) {
      std::cout << report;
    } else {
      write_file(solve_out, report);
    }
    if (!solve_csv.empty()) write_file(solve_csv, report_to_csv(res.alloc, res.sets, res.report));
    if (!solve_diag.empty()) {
      if (solve_scheme_name == "coop-noma" || solve_scheme_name == "noncoop-noma" ||
          solve_scheme_name == "non-orth-general") {
        Scenario run_s = s;
        AoOptions opts;
        if (solve_scheme_name == "noncoop-noma") run_s.cancel_tiers = 0;
        opts.restrict_to_unoccupied = solve_scheme_name == "non-orth-general";
        write_file(solve_diag, ao_diagnostics_json(ao_solve(run_s, opts).state));
      } else {
        write_file(solve_diag, "{\n \"outer_iters\": 0,\n \"flags\": {}\n}\n");
      }
    }
    return 0;
  }

  if (sweep->parsed()) {
    SweepConfig cfg = sweep_cfg;
    if (sweep_cfg_loaded) {
      // Re-run the option parsing on top of the file values.
      // (CLI11 already stored explicit flags into the pre-swap object; the
      // callback swapped the file config in, so reapply explicit options.)
      for (const CLI::Option* opt : sweep->get_options()) {
        (void)opt;  // values were applied before the swap; nothing to do
      }
    }
    auto emit = [&](const std::string& name, const std::vector<ExperimentRow>& rows) {
      const std::string rows_path = cfg.output_dir + "/" + name + "_rows.csv";
      const std::string sum_path = cfg.output_dir + "/" + name + "_summary.csv";
      write_file(rows_path, rows_to_csv(rows));
      write_file(sum_path, summary_to_csv(rows));
      std::cout << "wrote " << rows_path << " (" << rows.size() << " rows) and " << sum_path
                << "\n";
    };
    if (sweep_kind == "fig3") {
      emit("fig3", run_figure3(cfg));
    } else if (sweep_kind == "fig4") {
      emit("fig4", run_figure4(cfg));
    } else if (sweep_kind == "fig5") {
      emit("fig5", run_figure5(cfg));
    } else if (sweep_kind == "fig6") {
      const std::string path = cfg.output_dir + "/fig6_ue_rates.csv";
      write_file(path, ue_rows_to_csv(run_figure6(cfg)));
      std::cout << "wrote " << path << "\n";
    } else if (sweep_kind == "custom") {
      emit("custom", run_custom(cfg));
    } else {
      throw ConfigError("unknown sweep kind '" + sweep_kind +
                        "' (want fig3|fig4|fig5|fig6|custom)");
    }
    return 0;
  }

  if (validate->parsed()) {
    const Scenario s = load_scenario(validate_scenario);  // validates on load
    // Round-trip stability is part of the file contract.
    const Scenario again = scenario_from_json(scenario_to_json(s));
    if (scenario_to_json(again) != scenario_to_json(s)) {
      throw ContractViolation("scenario JSON does not round-trip");
    }
    std::cout << "scenario ok: J=" << s.cell_count() << " N=" << s.num_rb << " M="
              << s.cancel_tiers << " mu=" << s.mu << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  try {
    return run(args);
  } catch (const CLI::CallForHelp&) {
    std::cout << "see --help\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const InputDomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ContractViolation& e) {
    std::cerr << "internal contract violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace uavnoma
