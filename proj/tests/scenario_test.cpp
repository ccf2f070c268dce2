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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace rsnoma {
namespace {

TEST(Units, DbmToWatts) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watts(-110.0), 1e-14, 1e-28);
  EXPECT_NEAR(dbm_to_watts(35.0), std::sqrt(10.0), 1e-12);
  EXPECT_NEAR(dbm_to_watts(10.0), 0.01, 1e-15);
}

TEST(Units, PathLoss) {
  EXPECT_DOUBLE_EQ(path_loss_db(1.0), -128.1);
  EXPECT_NEAR(path_loss_db(0.1), -90.5, 1e-12);
  EXPECT_NEAR(path_loss_db(0.01), -52.9, 1e-12);
  EXPECT_THROW(path_loss_db(0.0), std::invalid_argument);
  EXPECT_THROW(path_loss_db(-1.0), std::invalid_argument);
}

TEST(Config, DefaultsMatchReferenceValues) {
  const ScenarioConfig c = default_config();
  EXPECT_EQ(c.num_users, 4);
  EXPECT_DOUBLE_EQ(c.p_max_dbm, 35.0);
  EXPECT_DOUBLE_EQ(c.noise_dbm, -110.0);
  EXPECT_DOUBLE_EQ(c.p_tol_dbm, 10.0);
  EXPECT_DOUBLE_EQ(c.epsilon1, 1e-3);
  EXPECT_EQ(c.l_max, 100);
  EXPECT_EQ(c.restoration_max_passes, 1000);
  EXPECT_DOUBLE_EQ(c.area_side_m, 350.0);
  EXPECT_DOUBLE_EQ(c.bs_height_m, 4.0);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ValidateRejectsBrokenInvariants) {
  auto broken = [](auto mutate) {
    ScenarioConfig c = default_config(2);
    mutate(c);
    return c;
  };
  EXPECT_THROW(broken([](auto& c) { c.num_users = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& c) { c.weights_noma[0] = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& c) { c.weights_rsma[1] = -1.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& c) { c.epsilon1 = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& c) { c.l_max = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& c) { c.restoration_max_passes = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& c) { c.r_th[0] = -0.1; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& c) { c.r_th.pop_back(); }).validate(), std::invalid_argument);
}

TEST(Config, ParsesIni) {
  std::istringstream in(R"([system]
num_users = 3
p_max_dbm = 30
p_tol_dbm = 5
[users]
r_th = 0.5
weights = exp_flip
[algorithm]
mode = rsma
epsilon1 = 1e-4
l_max = 20
restoration_max_passes = 50
rng_seed = 7
)");
  const ScenarioConfig c = parse_config(in);
  EXPECT_EQ(c.num_users, 3);
  EXPECT_DOUBLE_EQ(c.p_max_dbm, 30.0);
  EXPECT_DOUBLE_EQ(c.p_tol_dbm, 5.0);
  EXPECT_DOUBLE_EQ(c.noise_dbm, -110.0);
  EXPECT_EQ(c.r_th, std::vector<double>(3, 0.5));
  EXPECT_NEAR(c.weights_noma[2], std::exp(0.72), 1e-12);
  EXPECT_NEAR(c.weights_rsma[2], 1.0, 1e-12);
  EXPECT_EQ(c.mode, AccessMode::RsmaOnly);
  EXPECT_DOUBLE_EQ(c.epsilon1, 1e-4);
  EXPECT_EQ(c.l_max, 20);
  EXPECT_EQ(c.restoration_max_passes, 50);
  EXPECT_EQ(c.rng_seed, 7u);
}

TEST(Config, ParsesPerUserLists) {
  std::istringstream in("[system]\nnum_users = 2\n[users]\nr_th = 0.1, 0.2\nweights_noma = 2 3\n");
  const ScenarioConfig c = parse_config(in);
  EXPECT_EQ(c.r_th, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(c.weights_noma, (std::vector<double>{2.0, 3.0}));
  EXPECT_EQ(c.weights_rsma, (std::vector<double>{1.0, 1.0}));
}

TEST(Config, RejectsBadInput) {
  std::istringstream wrong_len("[system]\nnum_users = 3\n[users]\nr_th = 0.1, 0.2\n");
  EXPECT_THROW(parse_config(wrong_len), std::invalid_argument);
  std::istringstream bad_mode("[algorithm]\nmode = tdma\n");
  EXPECT_THROW(parse_config(bad_mode), std::invalid_argument);
  std::istringstream garbage("[system\nnum_users = 2\n");
  EXPECT_THROW(parse_config(garbage), std::runtime_error);
  EXPECT_THROW(load_config("/nonexistent/scenario.ini"), std::runtime_error);
}

TEST(Weights, EqualIsAllOnes) {
  const auto [wn, wr] = weight_scheme(3, WeightScheme::Equal);
  EXPECT_EQ(wn, std::vector<double>(3, 1.0));
  EXPECT_EQ(wr, std::vector<double>(3, 1.0));
}

TEST(Weights, ExpFlipTwoUsers) {
  const auto [wn, wr] = weight_scheme(2, WeightScheme::ExpFlip);
  ASSERT_EQ(wn.size(), 2u);
  EXPECT_NEAR(wn[0], 1.27125, 1e-5);
  EXPECT_NEAR(wn[1], 1.61607, 1e-5);
  EXPECT_NEAR(wr[0], 1.27125, 1e-5);
  EXPECT_NEAR(wr[1], 1.0, 1e-12);
}

TEST(Weights, RoundTripNames) {
  EXPECT_EQ(parse_weight_scheme(to_string(WeightScheme::ExpFlip)), WeightScheme::ExpFlip);
  EXPECT_EQ(parse_access_mode(to_string(AccessMode::NomaOnly)), AccessMode::NomaOnly);
  EXPECT_THROW(parse_weight_scheme("uniform"), std::invalid_argument);
}

TEST(Channels, FromGainsSortsAndInverts) {
  const auto ch = ChannelRealization::from_gains({1e-10, 4e-10, 2e-10}, {3e-10, 5e-10, 7e-10}, 1e-14, {10, 20, 30});
  EXPECT_EQ(ch.gains_noma, (std::vector<double>{4e-10, 2e-10, 1e-10}));
  EXPECT_EQ(ch.gains_rsma, (std::vector<double>{5e-10, 7e-10, 3e-10}));
  EXPECT_EQ(ch.distances_m, (std::vector<double>{20, 30, 10}));
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(ch.delta_noma[k] * ch.a_noma[k], 1.0, 1e-15);
    EXPECT_NEAR(ch.delta_rsma[k] * ch.a_rsma[k], 1.0, 1e-15);
    EXPECT_NEAR(ch.delta_noma[k], ch.gains_noma[k] / 1e-14, 1e-6 * ch.delta_noma[k]);
  }
}

TEST(Channels, DrawIsDeterministicAndSorted) {
  const ScenarioConfig c = default_config(2);
  auto r1 = draw_rng(11, 3);
  auto r2 = draw_rng(11, 3);
  const auto a = draw_channels(c, r1);
  const auto b = draw_channels(c, r2);
  EXPECT_EQ(a.gains_noma, b.gains_noma);
  EXPECT_EQ(a.gains_rsma, b.gains_rsma);
  EXPECT_EQ(a.distances_m, b.distances_m);
  EXPECT_GE(a.gains_noma[0], a.gains_noma[1]);

  auto r3 = draw_rng(11, 4);
  EXPECT_NE(draw_channels(c, r3).gains_noma, a.gains_noma);
}

TEST(Channels, GeometryStaysInsideArea) {
  const ScenarioConfig c = default_config(4);
  const double farthest = std::sqrt(2.0 * 175.0 * 175.0 + 16.0);
  for (std::uint64_t d = 0; d < 500; ++d) {
    auto rng = draw_rng(5, d);
    const auto ch = draw_channels(c, rng);
    for (int k = 0; k < 4; ++k) {
      EXPECT_GE(ch.distances_m[k], 4.0);
      EXPECT_LE(ch.distances_m[k], farthest);
      EXPECT_NEAR(ch.delta_noma[k] * ch.a_noma[k], 1.0, 1e-14);
      EXPECT_NEAR(ch.delta_rsma[k] * ch.a_rsma[k], 1.0, 1e-14);
    }
    for (int k = 1; k < 4; ++k) EXPECT_GE(ch.gains_noma[k - 1], ch.gains_noma[k]);
  }
}

TEST(Channels, FadingHasUnitMean) {
  const ScenarioConfig c = default_config(4);
  double sum_n = 0.0;
  double sum_r = 0.0;
  double cross = 0.0;
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    auto rng = draw_rng(2024, static_cast<std::uint64_t>(d));
    const auto ch = draw_channels(c, rng);
    for (int k = 0; k < 4; ++k) {
      const double pl = std::pow(10.0, (-128.1 - 37.6 * std::log10(ch.distances_m[k] / 1000.0)) / 10.0);
      const double gn = ch.gains_noma[k] / pl;
      const double gr = ch.gains_rsma[k] / pl;
      sum_n += gn;
      sum_r += gr;
      cross += gn * gr;
    }
  }
  const double n = 4.0 * draws;
  EXPECT_NEAR(sum_n / n, 1.0, 0.05);
  EXPECT_NEAR(sum_r / n, 1.0, 0.05);
  // Independent subchannels: E[g^N g^R] = 1.
  EXPECT_NEAR(cross / n, 1.0, 0.08);
}

}  // namespace
}  // namespace rsnoma
