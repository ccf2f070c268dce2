/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The rsnoma Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RSNOMA_SCENARIO_HPP
#define RSNOMA_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rsnoma {

enum class AccessMode { Hybrid, NomaOnly, RsmaOnly };

std::string_view to_string(AccessMode mode);
/// Accepts "hybrid", "noma", "rsma" (case-sensitive).
AccessMode parse_access_mode(std::string_view text);

enum class WeightScheme { Equal, ExpFlip };

std::string_view to_string(WeightScheme scheme);
WeightScheme parse_weight_scheme(std::string_view text);

/// Per-user weights (omega^N, omega^R) for users at sorted ranks 1..U.
/// ExpFlip gives omega^N_k = exp(0.24 k) and the reversed omega^R_k = exp(0.24 (U - k)).
std::pair<std::vector<double>, std::vector<double>> weight_scheme(int num_users, WeightScheme scheme);

/// Physical and algorithmic parameters.  Powers are in dBm at this boundary
/// only; everything downstream works in watts and linear gains.
struct ScenarioConfig {
  int num_users = 4;
  double p_max_dbm = 35.0;
  double noise_dbm = -110.0;
  double p_tol_dbm = 10.0;  // -inf gives a zero SIC threshold
  std::vector<double> r_th = std::vector<double>(4, 0.0);
  // Rank-based: entry k belongs to the user with the k-th strongest NOMA gain.
  std::vector<double> weights_noma = std::vector<double>(4, 1.0);
  std::vector<double> weights_rsma = std::vector<double>(4, 1.0);
  AccessMode mode = AccessMode::Hybrid;
  double epsilon1 = 1e-3;
  int l_max = 100;
  int restoration_max_passes = 1000;  // QoS restoration runs before the l_max count starts
  double solver_tol = 1e-6;
  std::uint64_t rng_seed = 42;
  double area_side_m = 350.0;
  double bs_height_m = 4.0;

  double p_max_w() const;
  double noise_w() const;
  double p_tol_w() const;

  /// Resizes r_th (to a uniform threshold) and the weights (by scheme).
  void set_users(int users, double threshold, WeightScheme scheme);

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// Reference defaults (35 dBm, -110 dBm noise, 10 dBm SIC threshold,
/// epsilon1 = 1e-3, L_max = 100) for `users` users with unit weights.
ScenarioConfig default_config(int users = 4);

/// Reads an INI-style file; see README for the keys.  Throws
/// std::runtime_error on parse errors and std::invalid_argument on bad values.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(std::istream& in);

struct ChannelRealization {
  std::vector<double> gains_noma;  // |h^N|^2, descending
  std::vector<double> gains_rsma;  // |h^R|^2, same user order
  std::vector<double> delta_noma;  // |h|^2 / sigma^2  [1/W]
  std::vector<double> delta_rsma;
  std::vector<double> a_noma;      // sigma^2 / |h|^2  [W]
  std::vector<double> a_rsma;
  std::vector<double> distances_m;

  int num_users() const { return static_cast<int>(gains_noma.size()); }

  /// Builds the derived delta/a vectors from gains and noise power; sorts
  /// users by descending NOMA gain.
  static ChannelRealization from_gains(std::vector<double> gains_noma, std::vector<double> gains_rsma,
                                       double noise_w, std::vector<double> distances_m = {});
};

double dbm_to_watts(double x_dbm);

/// Large-scale path loss in dB for a link of `d_km` kilometres.
double path_loss_db(double d_km);

using ChannelRng = std::mt19937_64;

/// Drops users uniformly on the square area under the base station and draws
/// independent unit-mean exponential (Rayleigh power) fading on each
/// subchannel.
ChannelRealization draw_channels(const ScenarioConfig& config, ChannelRng& rng);

/// Generator for draw `draw_index` of a run seeded with `seed`.
ChannelRng draw_rng(std::uint64_t seed, std::uint64_t draw_index);

}  // namespace rsnoma

#endif  // RSNOMA_SCENARIO_HPP
