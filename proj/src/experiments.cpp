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

#include "uavnoma/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "uavnoma/errors.hpp"
#include "uavnoma/optimizer.hpp"

namespace uavnoma {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double_or_throw(const std::string& key, const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double x;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "': not a number: '" + v + "'");
  }
  if (used != v.size()) throw ConfigError("config: key '" + key + "': trailing junk in '" + v + "'");
  return x;
}

long long parse_int_or_throw(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "': not an integer: '" + v + "'");
  }
  if (used != v.size()) throw ConfigError("config: key '" + key + "': trailing junk in '" + v + "'");
  return x;
}

/// Runs the tasks on a small worker pool; each task owns its output slot,
/// so results merge in task order no matter how workers interleave.
void run_tasks(std::vector<std::function<void()>>& tasks, int jobs) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        tasks[i]();
      }
    });
  }
  for (auto& t : pool) t.join();
}

GenConfig gen_config_for(const SweepConfig& cfg, std::uint64_t seed, int k, double pmax_dbm,
                         double mu, int m) {
  GenConfig g;
  g.seed = seed;
  g.num_tiers = cfg.num_tiers;
  g.cell_radius_m = cfg.cell_radius_m;
  g.num_rb = cfg.num_rb;
  g.total_ues = k;
  g.icic_tiers = cfg.icic_tiers;
  g.channel.mode = channel_mode_from_string(cfg.channel_mode);
  g.p_max_dbm = pmax_dbm;
  g.mu = mu;
  g.cancel_tiers = m;
  return g;
}

Scenario with_params(Scenario s, double pmax_w, double mu, int m) {
  s.p_max_w = pmax_w;
  s.mu = mu;
  s.cancel_tiers = m;
  return s;
}

ExperimentRow make_row(std::uint64_t seed, const std::string& scheme, int k, double pmax_dbm,
                       double mu, int m, const Scenario& s, const SchemeResult& res,
                       double wall_ms) {
  ExperimentRow row;
  row.seed = seed;
  row.scheme = scheme;
  row.k = k;
  row.pmax_dbm = pmax_dbm;
  row.mu = mu;
  row.m = m;
  row.uav_rate = res.report.uav_total;
  row.ground_rate = res.report.ground_total;
  row.baseline_ground_rate = baseline_ground_sum_rate(s);
  row.objective_q = res.report.objective_q;
  row.outer_iters = res.info.outer_iters;
  row.wall_ms = wall_ms;
  return row;
}

class WallTimer {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

}  // namespace

std::vector<double> SweepConfig::effective_mu_values() const {
  if (!mu_values.empty()) return mu_values;
  std::vector<double> mu{0.0};
  for (int i = 0; i < 15; ++i) {
    mu.push_back(std::pow(10.0, -2.0 + 4.0 * i / 14.0));
  }
  return mu;
}

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "trials") {
      cfg.trials = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "base_seed") {
      cfg.base_seed = static_cast<std::uint64_t>(parse_int_or_throw(key, value));
    } else if (key == "k_values") {
      cfg.k_values.clear();
      for (const auto& v : split_list(value))
        cfg.k_values.push_back(static_cast<int>(parse_int_or_throw(key, v)));
    } else if (key == "pmax_values_dbm") {
      cfg.pmax_values_dbm.clear();
      for (const auto& v : split_list(value))
        cfg.pmax_values_dbm.push_back(parse_double_or_throw(key, v));
    } else if (key == "mu_values") {
      cfg.mu_values.clear();
      for (const auto& v : split_list(value)) cfg.mu_values.push_back(parse_double_or_throw(key, v));
    } else if (key == "m_values") {
      cfg.m_values.clear();
      for (const auto& v : split_list(value))
        cfg.m_values.push_back(static_cast<int>(parse_int_or_throw(key, v)));
    } else if (key == "schemes") {
      cfg.schemes = split_list(value);
    } else if (key == "channel_mode") {
      cfg.channel_mode = value;
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "num_tiers") {
      cfg.num_tiers = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "cell_radius_m") {
      cfg.cell_radius_m = parse_double_or_throw(key, value);
    } else if (key == "num_rb") {
      cfg.num_rb = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "icic_tiers") {
      cfg.icic_tiers = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "k_default") {
      cfg.k_default = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "pmax_default_dbm") {
      cfg.pmax_default_dbm = parse_double_or_throw(key, value);
    } else if (key == "mu_default") {
      cfg.mu_default = parse_double_or_throw(key, value);
    } else if (key == "m_default") {
      cfg.m_default = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "ue_ids") {
      cfg.ue_ids.clear();
      for (const auto& v : split_list(value))
        cfg.ue_ids.push_back(static_cast<int>(parse_int_or_throw(key, v)));
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "timing") {
      cfg.timing = value == "true" || value == "1";
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }

  if (cfg.trials < 1) throw ConfigError("config: key 'trials': must be >= 1");
  if (cfg.k_values.empty()) throw ConfigError("config: key 'k_values': must be non-empty");
  if (cfg.pmax_values_dbm.empty())
    throw ConfigError("config: key 'pmax_values_dbm': must be non-empty");
  if (cfg.m_values.empty()) throw ConfigError("config: key 'm_values': must be non-empty");
  if (cfg.schemes.empty()) throw ConfigError("config: key 'schemes': must be non-empty");
  for (const auto& s : cfg.schemes) {
    if (std::find(known_schemes().begin(), known_schemes().end(), s) == known_schemes().end()) {
      throw ConfigError("config: key 'schemes': unknown scheme '" + s + "'");
    }
  }
  channel_mode_from_string(cfg.channel_mode);  // validates
  if (cfg.num_rb < 1) throw ConfigError("config: key 'num_rb': must be >= 1");
  if (cfg.icic_tiers < 1) throw ConfigError("config: key 'icic_tiers': must be >= 1");
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_sweep_config(ss.str());
}

const std::vector<std::string>& known_schemes() {
  static const std::vector<std::string> kSchemes = {
      "egoistic",  "altruistic",        "oma",             "noncoop-noma",
      "coop-noma", "non-orth-egoistic", "non-orth-general"};
  return kSchemes;
}

SchemeResult solve_scheme(const Scenario& s, const std::string& scheme) {
  auto from_ao = [](const AoResult& ao) {
    SchemeResult res{ao.alloc, ao.sets, ao.report, {}};
    res.info.outer_iters = ao.state.outer_iters();
    res.info.hit_cap = ao.state.hit_outer_cap || ao.state.hit_inner_cap;
    for (int it : ao.state.inner_iters_per_outer) res.info.inner_iters_total += it;
    return res;
  };
  if (scheme == "egoistic") return egoistic_solve(s);
  if (scheme == "altruistic") return altruistic_solve(s);
  if (scheme == "oma") return oma_solve(s);
  if (scheme == "noncoop-noma") {
    return from_ao(ao_solve(with_params(s, s.p_max_w, s.mu, 0)));
  }
  if (scheme == "coop-noma") return from_ao(ao_solve(s));
  if (scheme == "non-orth-egoistic") return non_orthogonal_solve(s, NonOrthMode::Egoistic);
  if (scheme == "non-orth-general") return non_orthogonal_solve(s, NonOrthMode::General);
  throw InputDomainError("unknown scheme '" + scheme + "'");
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::string out =
      "seed,scheme,K,pmax_dbm,mu,M,uav_rate,ground_rate,baseline_ground_rate,objective_q,"
      "outer_iters,wall_ms\n";
  for (const ExperimentRow& r : rows) {
    out += std::to_string(r.seed) + "," + r.scheme + "," + std::to_string(r.k) + "," +
           fmt_g(r.pmax_dbm) + "," + fmt_g(r.mu) + "," + std::to_string(r.m) + "," +
           fmt_g(r.uav_rate) + "," + fmt_g(r.ground_rate) + "," + fmt_g(r.baseline_ground_rate) +
           "," + fmt_g(r.objective_q) + "," + std::to_string(r.outer_iters) + "," +
           fmt_g(r.wall_ms) + "\n";
  }
  return out;
}

std::string summary_to_csv(const std::vector<ExperimentRow>& rows) {
  struct Acc {
    int n = 0;
    double uav = 0, uav2 = 0, gnd = 0, gnd2 = 0, q = 0, q2 = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> acc;
  std::map<std::string, ExperimentRow> sample;
  for (const ExperimentRow& r : rows) {
    const std::string key = r.scheme + "|" + std::to_string(r.k) + "|" + fmt_g(r.pmax_dbm) + "|" +
                            fmt_g(r.mu) + "|" + std::to_string(r.m);
    if (!acc.count(key)) {
      order.push_back(key);
      sample.emplace(key, r);
    }
    Acc& a = acc[key];
    ++a.n;
    a.uav += r.uav_rate;
    a.uav2 += r.uav_rate * r.uav_rate;
    a.gnd += r.ground_rate;
    a.gnd2 += r.ground_rate * r.ground_rate;
    a.q += r.objective_q;
    a.q2 += r.objective_q * r.objective_q;
  }
  auto stderr_of = [](double sum, double sum2, int n) {
    if (n < 2) return 0.0;
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
  };
  std::string out =
      "scheme,K,pmax_dbm,mu,M,n_trials,uav_rate_mean,uav_rate_stderr,ground_rate_mean,"
      "ground_rate_stderr,objective_q_mean,objective_q_stderr\n";
  for (const std::string& key : order) {
    const Acc& a = acc[key];
    const ExperimentRow& r = sample.at(key);
    out += r.scheme + "," + std::to_string(r.k) + "," + fmt_g(r.pmax_dbm) + "," + fmt_g(r.mu) +
           "," + std::to_string(r.m) + "," + std::to_string(a.n) + "," + fmt_g(a.uav / a.n) + "," +
           fmt_g(stderr_of(a.uav, a.uav2, a.n)) + "," + fmt_g(a.gnd / a.n) + "," +
           fmt_g(stderr_of(a.gnd, a.gnd2, a.n)) + "," + fmt_g(a.q / a.n) + "," +
           fmt_g(stderr_of(a.q, a.q2, a.n)) + "\n";
  }
  return out;
}

std::string ue_rows_to_csv(const std::vector<UeRateRow>& rows) {
  std::string out = "seed,scheme,mu,ue_id,rate_bpshz,baseline_bpshz,protected\n";
  for (const UeRateRow& r : rows) {
    out += std::to_string(r.seed) + "," + r.scheme + "," + fmt_g(r.mu) + "," +
           std::to_string(r.ue_id) + "," + fmt_g(r.rate) + "," + fmt_g(r.baseline_rate) + "," +
           (r.protected_ue ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<ExperimentRow> run_figure3(const SweepConfig& cfg) {
  std::vector<std::vector<ExperimentRow>> per_trial(cfg.trials);
  std::vector<std::function<void()>> tasks;
  for (int t = 0; t < cfg.trials; ++t) {
    tasks.emplace_back([&, t] {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
      auto& rows = per_trial[t];
      for (int k : cfg.k_values) {
        const GenConfig gen = gen_config_for(cfg, seed, k, cfg.pmax_default_dbm,
                                             cfg.mu_default, cfg.m_default);
        const Scenario base = generate_scenario(gen).scenario;
        for (int m : cfg.m_values) {
          const Scenario s = with_params(base, base.p_max_w, base.mu, m);
          WallTimer timer;
          const SchemeResult res = altruistic_solve(s);
          rows.push_back(make_row(seed, "altruistic", k, cfg.pmax_default_dbm,
                                  std::numeric_limits<double>::infinity(), m, s, res,
                                  cfg.timing ? timer.elapsed_ms() : 0.0));
        }
        WallTimer timer;
        const SchemeResult res = oma_solve(base);
        rows.push_back(make_row(seed, "oma", k, cfg.pmax_default_dbm,
                                std::numeric_limits<double>::infinity(), 0, base, res,
                                cfg.timing ? timer.elapsed_ms() : 0.0));
      }
    });
  }
  run_tasks(tasks, cfg.jobs);
  std::vector<ExperimentRow> rows;
  for (auto& r : per_trial) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::vector<ExperimentRow> run_figure4(const SweepConfig& cfg) {
  std::vector<std::vector<ExperimentRow>> per_trial(cfg.trials);
  std::vector<std::function<void()>> tasks;
  for (int t = 0; t < cfg.trials; ++t) {
    tasks.emplace_back([&, t] {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
      auto& rows = per_trial[t];
      const GenConfig gen = gen_config_for(cfg, seed, cfg.k_default, cfg.pmax_default_dbm,
                                           cfg.mu_default, cfg.m_default);
      const Scenario base = generate_scenario(gen).scenario;
      for (double pmax_dbm : cfg.pmax_values_dbm) {
        const double pmax_w = dbm_to_watts(pmax_dbm);
        auto run = [&](const std::string& scheme, int m) {
          const Scenario s = with_params(base, pmax_w, cfg.mu_default, m);
          WallTimer timer;
          const SchemeResult res = solve_scheme(s, scheme);
          rows.push_back(make_row(seed, scheme, cfg.k_default, pmax_dbm, cfg.mu_default, m, s,
                                  res, cfg.timing ? timer.elapsed_ms() : 0.0));
        };
        run("non-orth-general", 0);
        run("noncoop-noma", 0);
        for (int m : cfg.m_values) {
          if (m >= 1) run("coop-noma", m);
        }
      }
    });
  }
  run_tasks(tasks, cfg.jobs);
  std::vector<ExperimentRow> rows;
  for (auto& r : per_trial) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::vector<ExperimentRow> run_figure5(const SweepConfig& cfg) {
  const std::vector<double> mu_grid = cfg.effective_mu_values();
  std::vector<std::vector<ExperimentRow>> per_trial(cfg.trials);
  std::vector<std::function<void()>> tasks;
  for (int t = 0; t < cfg.trials; ++t) {
    tasks.emplace_back([&, t] {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
      auto& rows = per_trial[t];
      const GenConfig gen = gen_config_for(cfg, seed, cfg.k_default, cfg.pmax_default_dbm,
                                           cfg.mu_default, cfg.m_default);
      const Scenario base = generate_scenario(gen).scenario;
      auto run = [&](const std::string& scheme, double mu, double mu_col, int m) {
        const Scenario s = with_params(base, base.p_max_w, mu, m);
        WallTimer timer;
        const SchemeResult res = solve_scheme(s, scheme);
        rows.push_back(make_row(seed, scheme, cfg.k_default, cfg.pmax_default_dbm, mu_col, m, s,
                                res, cfg.timing ? timer.elapsed_ms() : 0.0));
      };
      for (int m : cfg.m_values) {
        run("egoistic", 0.0, 0.0, m);
        run("altruistic", 0.0, std::numeric_limits<double>::infinity(), m);
        for (double mu : mu_grid) {
          if (std::isinf(mu)) continue;
          run(m == 0 ? "noncoop-noma" : "coop-noma", mu, mu, m);
        }
      }
      for (double mu : mu_grid) {
        if (std::isinf(mu)) continue;
        run("non-orth-general", mu, mu, 0);
      }
    });
  }
  run_tasks(tasks, cfg.jobs);
  std::vector<ExperimentRow> rows;
  for (auto& r : per_trial) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::vector<UeRateRow> run_figure6(const SweepConfig& cfg) {
  const std::vector<double> mu_grid = cfg.effective_mu_values();
  std::vector<std::vector<UeRateRow>> per_trial(cfg.trials);
  std::vector<std::function<void()>> tasks;
  for (int t = 0; t < cfg.trials; ++t) {
    tasks.emplace_back([&, t] {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
      auto& rows = per_trial[t];
      const GenConfig gen = gen_config_for(cfg, seed, cfg.k_default, cfg.pmax_default_dbm,
                                           cfg.mu_default, cfg.m_default);
      const Scenario base = generate_scenario(gen).scenario;

      // Baseline per scheduled UE (no UAV): log2(1 + gamma).
      std::map<int, double> baseline;
      for (int n = 0; n < base.num_rb; ++n) {
        for (std::size_t i = 0; i < base.occupied(n).size(); ++i) {
          baseline[base.assignment.serving_ue[n][i]] =
              std::log2(1.0 + base.ground_snr(base.occupied(n)[i], n));
        }
      }
      std::vector<int> selected = cfg.ue_ids;
      if (selected.empty()) {
        for (const auto& [ue, rate] : baseline) {
          selected.push_back(ue);
          if (selected.size() == 10) break;
        }
      } else {
        for (int ue : selected) {
          if (!baseline.count(ue)) {
            throw InputDomainError("ue_ids: UE " + std::to_string(ue) +
                                   " is not scheduled in this scenario");
          }
        }
      }

      auto emit = [&](const std::string& scheme, double mu_col, const RateReport& rep) {
        std::map<int, double> rate;
        for (const auto& [ue, r] : rep.per_ue_rate) rate[ue] = r;
        for (int ue : selected) {
          rows.push_back(UeRateRow{seed, scheme, mu_col, ue, rate.at(ue), baseline.at(ue), false});
        }
      };
      for (double mu : mu_grid) {
        if (std::isinf(mu)) continue;
        const Scenario s = with_params(base, base.p_max_w, mu, cfg.m_default);
        emit("coop-noma", mu, solve_scheme(s, "coop-noma").report);
      }
      emit("altruistic", std::numeric_limits<double>::infinity(),
           altruistic_solve(base).report);

      // A UE is protected under a scheme if its rate stays at the baseline
      // across the entire mu sweep.
      std::map<std::pair<std::string, int>, bool> protect;
      for (const UeRateRow& r : rows) {
        const auto key = std::make_pair(r.scheme, r.ue_id);
        const bool at_baseline =
            std::abs(r.rate - r.baseline_rate) <= 1e-9 * std::max(1.0, r.baseline_rate);
        auto it = protect.find(key);
        protect[key] = (it == protect.end() ? true : it->second) && at_baseline;
      }
      for (UeRateRow& r : rows) r.protected_ue = protect.at({r.scheme, r.ue_id});
    });
  }
  run_tasks(tasks, cfg.jobs);
  std::vector<UeRateRow> rows;
  for (auto& r : per_trial) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::vector<ExperimentRow> run_custom(const SweepConfig& cfg) {
  std::vector<std::vector<ExperimentRow>> per_trial(cfg.trials);
  std::vector<std::function<void()>> tasks;
  const std::vector<double> mu_grid =
      cfg.mu_values.empty() ? std::vector<double>{cfg.mu_default} : cfg.mu_values;
  for (int t = 0; t < cfg.trials; ++t) {
    tasks.emplace_back([&, t] {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
      auto& rows = per_trial[t];
      for (int k : cfg.k_values) {
        const GenConfig gen =
            gen_config_for(cfg, seed, k, cfg.pmax_default_dbm, cfg.mu_default, cfg.m_default);
        const Scenario base = generate_scenario(gen).scenario;
        for (double pmax_dbm : cfg.pmax_values_dbm) {
          for (double mu : mu_grid) {
            if (std::isinf(mu)) continue;
            for (int m : cfg.m_values) {
              for (const std::string& scheme : cfg.schemes) {
                const Scenario s = with_params(base, dbm_to_watts(pmax_dbm), mu, m);
                WallTimer timer;
                const SchemeResult res = solve_scheme(s, scheme);
                rows.push_back(make_row(seed, scheme, k, pmax_dbm, mu, m, s, res,
                                        cfg.timing ? timer.elapsed_ms() : 0.0));
              }
            }
          }
        }
      }
    });
  }
  run_tasks(tasks, cfg.jobs);
  std::vector<ExperimentRow> rows;
  for (auto& r : per_trial) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

}  // namespace uavnoma
