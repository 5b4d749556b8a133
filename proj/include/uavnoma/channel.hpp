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

#include "uavnoma/rng.hpp"
#include "uavnoma/types.hpp"

namespace uavnoma {

/// Channel generation mode.
///  - ThreeGpp: UMa terrestrial links and UMa-AV aerial links with
///    probabilistic LoS, log-normal shadowing and (terrestrial only)
///    Rayleigh fading.
///  - Simple: deterministic log-distance path loss (exponent 3.5
///    terrestrial, 2.2 aerial), LoS forced, no shadowing or fading. Meant
///    for unit tests and oracle comparisons.
enum class ChannelMode { ThreeGpp, Simple };

ChannelMode channel_mode_from_string(const std::string& s);
std::string to_string(ChannelMode m);

struct ChannelConfig {
  double carrier_freq_hz = 2e9;
  double noise_psd_dbm_hz = -164.0;  // noise-figure inclusive
  double rb_bandwidth_hz = 180e3;    // 12 subcarriers x 15 kHz
  double bs_height_m = 25.0;
  double ue_height_m = 1.5;
  double uav_altitude_m = 60.0;
  int antenna_elements = 10;
  double downtilt_deg = 10.0;
  ChannelMode mode = ChannelMode::ThreeGpp;
};

/// Composite linear power gain of one link (antenna gain, path loss,
/// shadowing and small-scale fading folded together).
struct LinkGain {
  double power_gain = 0.0;
};

/// Thermal noise power over one RB in watts.
double noise_power_w(const ChannelConfig& cfg);

/// BS receive gain in dB toward a source at the given elevation angle
/// (degrees above the horizon; the downtilted beam peaks at negative
/// elevation). Vertical uniform linear array of half-wavelength-spaced
/// dipoles, omnidirectional in azimuth.
double antenna_gain_db(const ChannelConfig& cfg, double elevation_deg);

/// Dipole element pattern alone, peak 2.15 dBi at the horizon.
double antenna_element_db(double elevation_deg);

// Urban-macro terrestrial model (outdoor UEs, h_UT <= 22.5 m).
double uma_los_probability(double d2d_m, double h_ut_m);
double uma_pathloss_db(double fc_hz, double h_bs_m, double h_ut_m, double d2d_m, bool los);
double uma_shadow_std_db(bool los);

// Urban-macro aerial model (22.5 m < h_UAV <= 300 m).
double umaav_los_probability(double d2d_m, double h_uav_m);
double umaav_pathloss_db(double fc_hz, double d3d_m, double h_uav_m, bool los);
double umaav_shadow_std_db(double h_uav_m, bool los);

/// One log-normal shadowing draw, in dB.
double sample_shadow_db(RngStream& rng, double std_db);

/// Composite UE->BS gain for one resource block. Draws (in order) the LoS
/// state, shadowing the and Rayleigh fading power; deterministic in Simple
/// mode. Throws InputDomainError at zero horizontal distance.
LinkGain terrestrial_gain(const ChannelConfig& cfg, const Vec3& ue_pos, const Vec3& bs_pos,
                          RngStream& rng);

/// Composite UAV->BS gain, frequency-flat (one value for all RBs). LoS
/// dominated: no small-scale fading term. Throws ConfigError if the UAV
/// altitude is outside the aerial model's validity range in ThreeGpp mode.
LinkGain a2g_gain(const ChannelConfig& cfg, const Vec3& uav_pos, const Vec3& bs_pos,
                  RngStream& rng);

}  // namespace uavnoma
