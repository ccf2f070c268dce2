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

#include "rsnoma/scenario.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace rsnoma {

std::string_view to_string(AccessMode mode) {
  switch (mode) {
    case AccessMode::Hybrid: return "hybrid";
    case AccessMode::NomaOnly: return "noma";
    case AccessMode::RsmaOnly: return "rsma";
  }
  return "unknown";
}

AccessMode parse_access_mode(std::string_view text) {
  if (text == "hybrid") return AccessMode::Hybrid;
  if (text == "noma") return AccessMode::NomaOnly;
  if (text == "rsma") return AccessMode::RsmaOnly;
  throw std::invalid_argument("unknown mode: " + std::string(text));
}

std::string_view to_string(WeightScheme scheme) {
  return scheme == WeightScheme::Equal ? "equal" : "exp_flip";
}

WeightScheme parse_weight_scheme(std::string_view text) {
  if (text == "equal") return WeightScheme::Equal;
  if (text == "exp_flip") return WeightScheme::ExpFlip;
  throw std::invalid_argument("unknown weight scheme: " + std::string(text));
}

std::pair<std::vector<double>, std::vector<double>> weight_scheme(int num_users, WeightScheme scheme) {
  if (num_users < 1) throw std::invalid_argument("weight_scheme: num_users must be >= 1");
  std::vector<double> noma(static_cast<std::size_t>(num_users), 1.0);
  std::vector<double> rsma(static_cast<std::size_t>(num_users), 1.0);
  if (scheme == WeightScheme::ExpFlip) {
    for (int k = 1; k <= num_users; ++k) {
      noma[static_cast<std::size_t>(k - 1)] = std::exp(0.24 * k);
      rsma[static_cast<std::size_t>(k - 1)] = std::exp(0.24 * (num_users - k));
    }
  }
  return {std::move(noma), std::move(rsma)};
}

double dbm_to_watts(double x_dbm) { return std::pow(10.0, (x_dbm - 30.0) / 10.0); }

double path_loss_db(double d_km) {
  if (!(d_km > 0.0)) throw std::invalid_argument("path_loss_db: distance must be positive");
  return -128.1 - 37.6 * std::log10(d_km);
}

double ScenarioConfig::p_max_w() const { return dbm_to_watts(p_max_dbm); }
double ScenarioConfig::noise_w() const { return dbm_to_watts(noise_dbm); }
double ScenarioConfig::p_tol_w() const { return dbm_to_watts(p_tol_dbm); }

void ScenarioConfig::set_users(int users, double threshold, WeightScheme scheme) {
  num_users = users;
  r_th.assign(static_cast<std::size_t>(users), threshold);
  std::tie(weights_noma, weights_rsma) = weight_scheme(users, scheme);
}

void ScenarioConfig::validate() const {
  const auto u = static_cast<std::size_t>(num_users);
  if (num_users < 1) throw std::invalid_argument("num_users must be >= 1");
  if (r_th.size() != u || weights_noma.size() != u || weights_rsma.size() != u) {
    throw std::invalid_argument("per-user vectors must have num_users entries");
  }
  auto positive = [](double w) { return w > 0.0 && std::isfinite(w); };
  if (!std::all_of(weights_noma.begin(), weights_noma.end(), positive) ||
      !std::all_of(weights_rsma.begin(), weights_rsma.end(), positive)) {
    throw std::invalid_argument("weights must be positive");
  }
  if (!std::all_of(r_th.begin(), r_th.end(), [](double r) { return r >= 0.0 && std::isfinite(r); })) {
    throw std::invalid_argument("r_th entries must be non-negative");
  }
  if (!(epsilon1 > 0.0)) throw std::invalid_argument("epsilon1 must be positive");
  if (l_max < 1) throw std::invalid_argument("l_max must be >= 1");
  if (restoration_max_passes < 1) throw std::invalid_argument("restoration_max_passes must be >= 1");
  if (!(solver_tol > 0.0)) throw std::invalid_argument("solver_tol must be positive");
  if (!std::isfinite(p_max_dbm) || !std::isfinite(noise_dbm) || std::isnan(p_tol_dbm)) {
    throw std::invalid_argument("power levels must be finite");
  }
  if (!(area_side_m > 0.0) || !(bs_height_m > 0.0)) {
    throw std::invalid_argument("geometry must be positive");
  }
}

ScenarioConfig default_config(int users) {
  ScenarioConfig cfg;
  cfg.set_users(users, 0.0, WeightScheme::Equal);
  return cfg;
}

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(",; \t"), boost::token_compress_on);
  std::vector<double> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (p.empty()) continue;
    try {
      out.push_back(std::stod(p));
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: " + p);
    }
  }
  return out;
}

// A single value broadcasts to every user.
std::vector<double> per_user(const std::string& text, int users, const char* key) {
  auto values = parse_list(text);
  if (values.size() == 1) values.assign(static_cast<std::size_t>(users), values.front());
  if (values.size() != static_cast<std::size_t>(users)) {
    throw std::invalid_argument(std::string(key) + ": expected 1 or num_users values");
  }
  return values;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  ScenarioConfig cfg;
  cfg.num_users = tree.get<int>("system.num_users", cfg.num_users);
  cfg.p_max_dbm = tree.get<double>("system.p_max_dbm", cfg.p_max_dbm);
  cfg.noise_dbm = tree.get<double>("system.noise_dbm", cfg.noise_dbm);
  cfg.p_tol_dbm = tree.get<double>("system.p_tol_dbm", cfg.p_tol_dbm);
  cfg.area_side_m = tree.get<double>("system.area_side_m", cfg.area_side_m);
  cfg.bs_height_m = tree.get<double>("system.bs_height_m", cfg.bs_height_m);

  const int u = cfg.num_users;
  if (u < 1) throw std::invalid_argument("num_users must be >= 1");
  cfg.r_th = per_user(tree.get<std::string>("users.r_th", "0"), u, "r_th");
  const auto scheme_text = tree.get<std::string>("users.weights", "equal");
  std::tie(cfg.weights_noma, cfg.weights_rsma) = weight_scheme(u, parse_weight_scheme(scheme_text));
  if (auto w = tree.get_optional<std::string>("users.weights_noma")) {
    cfg.weights_noma = per_user(*w, u, "weights_noma");
  }
  if (auto w = tree.get_optional<std::string>("users.weights_rsma")) {
    cfg.weights_rsma = per_user(*w, u, "weights_rsma");
  }

  cfg.mode = parse_access_mode(tree.get<std::string>("algorithm.mode", "hybrid"));
  cfg.epsilon1 = tree.get<double>("algorithm.epsilon1", cfg.epsilon1);
  cfg.l_max = tree.get<int>("algorithm.l_max", cfg.l_max);
  cfg.restoration_max_passes = tree.get<int>("algorithm.restoration_max_passes", cfg.restoration_max_passes);
  cfg.solver_tol = tree.get<double>("algorithm.solver_tol", cfg.solver_tol);
  cfg.rng_seed = tree.get<std::uint64_t>("algorithm.rng_seed", cfg.rng_seed);
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return parse_config(in);
}

ChannelRealization ChannelRealization::from_gains(std::vector<double> gains_noma, std::vector<double> gains_rsma,
                                                  double noise_w, std::vector<double> distances_m) {
  const std::size_t u = gains_noma.size();
  if (gains_rsma.size() != u) throw std::invalid_argument("gain vectors differ in size");
  if (distances_m.empty()) distances_m.assign(u, 0.0);
  std::vector<std::size_t> order(u);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gains_noma[a] > gains_noma[b]; });
  ChannelRealization ch;
  for (std::size_t idx : order) {
    if (!(gains_noma[idx] > 0.0) || !(gains_rsma[idx] > 0.0)) {
      throw std::invalid_argument("channel gains must be positive");
    }
    ch.gains_noma.push_back(gains_noma[idx]);
    ch.gains_rsma.push_back(gains_rsma[idx]);
    ch.distances_m.push_back(distances_m[idx]);
  }
  for (std::size_t k = 0; k < u; ++k) {
    ch.delta_noma.push_back(ch.gains_noma[k] / noise_w);
    ch.delta_rsma.push_back(ch.gains_rsma[k] / noise_w);
    ch.a_noma.push_back(1.0 / ch.delta_noma[k]);
    ch.a_rsma.push_back(1.0 / ch.delta_rsma[k]);
  }
  return ch;
}

namespace {

double positive_draw(std::exponential_distribution<double>& dist, ChannelRng& rng) {
  double g = dist(rng);
  while (!(g > 0.0)) g = dist(rng);
  return g;
}

}  // namespace

ChannelRealization draw_channels(const ScenarioConfig& config, ChannelRng& rng) {
  const auto u = static_cast<std::size_t>(config.num_users);
  std::uniform_real_distribution<double> position(-0.5 * config.area_side_m, 0.5 * config.area_side_m);
  std::exponential_distribution<double> fading(1.0);
  std::vector<double> gains_noma(u);
  std::vector<double> gains_rsma(u);
  std::vector<double> distances(u);
  for (std::size_t k = 0; k < u; ++k) {
    const double x = position(rng);
    const double y = position(rng);
    const double d = std::max(1.0, std::sqrt(x * x + y * y + config.bs_height_m * config.bs_height_m));
    const double large_scale = std::pow(10.0, path_loss_db(d / 1000.0) / 10.0);
    distances[k] = d;
    gains_noma[k] = large_scale * positive_draw(fading, rng);
    gains_rsma[k] = large_scale * positive_draw(fading, rng);
  }
  return ChannelRealization::from_gains(std::move(gains_noma), std::move(gains_rsma), config.noise_w(),
                                        std::move(distances));
}

ChannelRng draw_rng(std::uint64_t seed, std::uint64_t draw_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(draw_index), static_cast<std::uint32_t>(draw_index >> 32)};
  return ChannelRng(seq);
}

}  // namespace rsnoma
