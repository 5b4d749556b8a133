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

#include "uavnoma/channel.hpp"

#include <algorithm>
#include <cmath>

#include "uavnoma/errors.hpp"

namespace uavnoma {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLightSpeed = 299792458.0;

// Free-space path loss at 1 m reference distance.
double fspl_1m_db(double fc_hz) { return 20.0 * std::log10(4.0 * kPi * fc_hz / kLightSpeed); }

double deg2rad(double d) { return d * kPi / 180.0; }

}  // namespace

ChannelMode channel_mode_from_string(const std::string& s) {
  if (s == "3gpp") return ChannelMode::ThreeGpp;
  if (s == "simple") return ChannelMode::Simple;
  throw ConfigError("channel.mode must be \"3gpp\" or \"simple\", got \"" + s + "\"");
}

std::string to_string(ChannelMode m) {
  return m == ChannelMode::ThreeGpp ? "3gpp" : "simple";
}

double noise_power_w(const ChannelConfig& cfg) {
  return dbm_to_watts(cfg.noise_psd_dbm_hz) * cfg.rb_bandwidth_hz;
}

double antenna_element_db(double elevation_deg) {
  const double th = deg2rad(elevation_deg);
  const double c = std::cos(th);
  if (c < 1e-9) return -200.0;  // along the array axis
  const double f = std::cos(kPi / 2.0 * std::sin(th)) / c;
  return 2.15 + 20.0 * std::log10(std::max(std::abs(f), 1e-15));
}

double antenna_gain_db(const ChannelConfig& cfg, double elevation_deg) {
  const int n = cfg.antenna_elements;
  const double steer = -cfg.downtilt_deg;
  // Half-wavelength spacing: inter-element phase psi = pi (sin th - sin th0).
  const double psi = kPi * (std::sin(deg2rad(elevation_deg)) - std::sin(deg2rad(steer)));
  double af_pow;  // |sum e^{i k psi}|^2 / n, peaks at n when psi = 0
  const double s = std::sin(psi / 2.0);
  if (std::abs(s) < 1e-12) {
    af_pow = static_cast<double>(n);
  } else {
    const double num = std::sin(n * psi / 2.0) / s;
    af_pow = num * num / n;
  }
  return antenna_element_db(elevation_deg) + 10.0 * std::log10(std::max(af_pow, 1e-30));
}

double uma_los_probability(double d2d_m, double h_ut_m) {
  if (d2d_m <= 18.0) return 1.0;
  double p = 18.0 / d2d_m + std::exp(-d2d_m / 63.0) * (1.0 - 18.0 / d2d_m);
  if (h_ut_m > 13.0) {
    const double hc = std::pow((std::min(h_ut_m, 23.0) - 13.0) / 10.0, 1.5);
    p *= 1.0 + hc * 1.25 * std::pow(d2d_m / 100.0, 3.0) * std::exp(-d2d_m / 150.0);
  }
  return std::min(p, 1.0);
}

double uma_pathloss_db(double fc_hz, double h_bs_m, double h_ut_m, double d2d_m, bool los) {
  const double fc_ghz = fc_hz / 1e9;
  const double dh = h_bs_m - h_ut_m;
  const double d3d = std::hypot(d2d_m, dh);
  // Effective environment height is 1 m for h_UT <= 13 m.
  const double h_e = 1.0;
  const double d_bp = 4.0 * (h_bs_m - h_e) * (h_ut_m - h_e) * fc_hz / kLightSpeed;
  double pl_los;
  if (d2d_m <= d_bp) {
    pl_los = 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz);
  } else {
    pl_los = 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) -
             9.0 * std::log10(d_bp * d_bp + dh * dh);
  }
  if (los) return pl_los;
  const double pl_nlos = 13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) -
                         0.6 * (h_ut_m - 1.5);
  return std::max(pl_los, pl_nlos);
}

double uma_shadow_std_db(bool los) { return los ? 4.0 : 6.0; }

double umaav_los_probability(double d2d_m, double h_uav_m) {
  if (h_uav_m > 100.0) return 1.0;
  const double lh = std::log10(h_uav_m);
  const double d1 = std::max(460.0 * lh - 700.0, 18.0);
  if (d2d_m <= d1) return 1.0;
  const double p1 = 4300.0 * lh - 3800.0;
  return d1 / d2d_m + std::exp(-d2d_m / p1) * (1.0 - d1 / d2d_m);
}

double umaav_pathloss_db(double fc_hz, double d3d_m, double h_uav_m, bool los) {
  const double fc_ghz = fc_hz / 1e9;
  if (los) {
    return 28.0 + 22.0 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz);
  }
  return -17.5 + (46.0 - 7.0 * std::log10(h_uav_m)) * std::log10(d3d_m) +
         20.0 * std::log10(40.0 * kPi * fc_ghz / 3.0);
}

double umaav_shadow_std_db(double h_uav_m, bool los) {
  return los ? 4.64 * std::exp(-0.0066 * h_uav_m) : 6.0;
}

double sample_shadow_db(RngStream& rng, double std_db) { return rng.normal(0.0, std_db); }

LinkGain terrestrial_gain(const ChannelConfig& cfg, const Vec3& ue_pos, const Vec3& bs_pos,
                          RngStream& rng) {
  const double d2d = horizontal_distance(ue_pos, bs_pos);
  if (!(d2d > 0.0)) throw InputDomainError("terrestrial link needs horizontal distance > 0");
  const double elev =
      std::atan2(ue_pos.z - bs_pos.z, d2d) * 180.0 / kPi;
  const double ant_db = antenna_gain_db(cfg, elev);

  if (cfg.mode == ChannelMode::Simple) {
    const double d3d = distance3d(ue_pos, bs_pos);
    const double pl = fspl_1m_db(cfg.carrier_freq_hz) + 10.0 * 3.5 * std::log10(d3d);
    return LinkGain{db_to_linear(ant_db - pl)};
  }

  // Draw order is part of the reproducibility contract: LoS, shadow, fading.
  const bool los = rng.bernoulli(uma_los_probability(d2d, ue_pos.z));
  const double pl = uma_pathloss_db(cfg.carrier_freq_hz, bs_pos.z, ue_pos.z, d2d, los);
  const double shadow = sample_shadow_db(rng, uma_shadow_std_db(los));
  const double fading = rng.exponential(1.0);  // unit-mean Rayleigh power
  return LinkGain{db_to_linear(ant_db - pl + shadow) * fading};
}

LinkGain a2g_gain(const ChannelConfig& cfg, const Vec3& uav_pos, const Vec3& bs_pos,
                  RngStream& rng) {
  const double d2d = horizontal_distance(uav_pos, bs_pos);
  const double d3d = distance3d(uav_pos, bs_pos);
  const double h = uav_pos.z;
  // Clamp keeps the overhead-of-a-BS corner case off the array axis.
  const double elev = std::min(89.9, std::atan2(h - bs_pos.z, std::max(d2d, 1e-9)) * 180.0 / kPi);
  const double ant_db = antenna_gain_db(cfg, elev);

  if (cfg.mode == ChannelMode::Simple) {
    const double pl = fspl_1m_db(cfg.carrier_freq_hz) + 10.0 * 2.2 * std::log10(d3d);
    return LinkGain{db_to_linear(ant_db - pl)};
  }

  if (h <= 22.5 || h > 300.0) {
    throw ConfigError("uav_altitude_m outside the aerial channel model validity (22.5, 300]");
  }
  const bool los = rng.bernoulli(umaav_los_probability(d2d, h));
  const double pl = umaav_pathloss_db(cfg.carrier_freq_hz, d3d, h, los);
  const double shadow = sample_shadow_db(rng, umaav_shadow_std_db(h, los));
  return LinkGain{db_to_linear(ant_db - pl + shadow)};
}

}  // namespace uavnoma
