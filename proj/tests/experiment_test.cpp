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

#include "rsnoma/experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace rsnoma {
namespace {

ScenarioConfig small_config() {
  ScenarioConfig cfg = default_config(2);
  cfg.r_th = {0.5, 0.5};
  return cfg;
}

SweepOptions small_options(int draws) {
  SweepOptions o;
  o.draws = draws;
  o.seed = 11;
  o.threads = 2;
  return o;
}

std::string as_csv(const std::vector<MetricsRecord>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

TEST(SweepSpec, ParsesAndIncludesEndPoint) {
  const SweepSpec s = SweepSpec::parse("rth:0:3:0.5");
  EXPECT_EQ(s.param, SweepSpec::Param::RTh);
  const auto v = s.values();
  ASSERT_EQ(v.size(), 7u);
  EXPECT_DOUBLE_EQ(v.front(), 0.0);
  EXPECT_DOUBLE_EQ(v[3], 1.5);
  EXPECT_DOUBLE_EQ(v.back(), 3.0);
  const SweepSpec p = SweepSpec::parse("pmax:25:35:5");
  EXPECT_EQ(p.param, SweepSpec::Param::PMax);
  EXPECT_EQ(p.values(), (std::vector<double>{25.0, 30.0, 35.0}));
  EXPECT_EQ(SweepSpec::parse("rth:0.1:0.3:0.1").values().size(), 3u);
}

TEST(SweepSpec, RejectsMalformedText) {
  for (const char* bad : {"", "rth", "rth:0:1", "snr:0:1:1", "rth:0:1:0", "rth:1:0:0.5", "rth:a:1:1"}) {
    EXPECT_THROW(SweepSpec::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(Sweep, RowCountAndOrder) {
  const auto rows = sweep(small_config(), SweepSpec::parse("rth:0:1.5:0.5"), small_options(2));
  ASSERT_EQ(rows.size(), 24u);
  std::size_t i = 0;
  for (double r : {0.0, 0.5, 1.0, 1.5}) {
    for (int d = 0; d < 2; ++d) {
      for (AccessMode m : {AccessMode::Hybrid, AccessMode::NomaOnly, AccessMode::RsmaOnly}) {
        EXPECT_DOUBLE_EQ(rows[i].r_th, r);
        EXPECT_EQ(rows[i].draw_index, d);
        EXPECT_EQ(rows[i].mode, m);
        EXPECT_EQ(rows[i].seed, 11u);
        EXPECT_EQ(rows[i].weight_scheme, "equal");
        ++i;
      }
    }
  }
}

TEST(Sweep, ByteIdenticalAcrossRunsAndThreadCounts) {
  SweepOptions one = small_options(3);
  one.threads = 1;
  SweepOptions many = small_options(3);
  many.threads = 4;
  const auto spec = SweepSpec::parse("pmax:30:35:5");
  const std::string a = as_csv(sweep(small_config(), spec, one));
  const std::string b = as_csv(sweep(small_config(), spec, many));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, as_csv(sweep(small_config(), spec, one)));
}

TEST(Sweep, ModesShareTheChannel) {
  SweepOptions o = small_options(2);
  o.weights = WeightScheme::ExpFlip;
  const auto rows = sweep(small_config(), std::nullopt, o);
  ASSERT_EQ(rows.size(), 6u);
  for (int d = 0; d < 2; ++d) {
    ScenarioConfig cfg = small_config();
    std::tie(cfg.weights_noma, cfg.weights_rsma) = weight_scheme(2, WeightScheme::ExpFlip);
    auto rng = draw_rng(11, static_cast<std::uint64_t>(d));
    const auto ch = draw_channels(cfg, rng);
    const auto reports = run_mode_suite(cfg, ch);
    for (int m = 0; m < 3; ++m) {
      const MetricsRecord& row = rows[static_cast<std::size_t>(3 * d + m)];
      EXPECT_EQ(row.weight_scheme, "exp_flip");
      ASSERT_TRUE(row.weighted_sum_rate.has_value());
      EXPECT_EQ(*row.weighted_sum_rate, reports[static_cast<std::size_t>(m)].final_objective());
    }
  }
}

TEST(Sweep, IterationHookIsTagged) {
  SweepOptions o = small_options(1);
  o.modes = {AccessMode::NomaOnly};
  int calls = 0;
  o.on_iteration = [&](const MetricsRecord& tag, const IterationLog&) {
    EXPECT_EQ(tag.mode, AccessMode::NomaOnly);
    ++calls;
  };
  const auto rows = sweep(small_config(), std::nullopt, o);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(calls, rows[0].iterations);
}

TEST(Csv, RoundTrip) {
  const auto rows = sweep(small_config(), SweepSpec::parse("rth:0:40:40"), small_options(1));
  bool saw_unsolved = false;
  for (const auto& r : rows) saw_unsolved |= !r.feasible();
  EXPECT_TRUE(saw_unsolved);
  const std::string text = as_csv(rows);
  std::istringstream in(text);
  const auto back = read_csv(in);
  ASSERT_EQ(back.size(), rows.size());
  EXPECT_EQ(as_csv(back), text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].status, rows[i].status);
    EXPECT_EQ(back[i].weighted_sum_rate, rows[i].weighted_sum_rate);
    EXPECT_EQ(back[i].per_user_rates, rows[i].per_user_rates);
  }
}

TEST(Csv, HeaderAndEmptyInput) {
  EXPECT_EQ(csv_header(),
            "seed,draw_index,mode,p_max_dbm,r_th,weight_scheme,status,iterations,weighted_sum_rate,sum_rate,"
            "proportional_fairness,beta,per_user_rates");
  std::istringstream empty("");
  EXPECT_TRUE(read_csv(empty).empty());
  EXPECT_THROW(parse_csv_row("1,2,3"), std::invalid_argument);
}

TEST(Record, FairnessEmptyWhenAUserStarves) {
  ScenarioConfig cfg = small_config();
  cfg.r_th = {0.0, 0.0};
  auto rng = draw_rng(3, 0);
  const auto ch = draw_channels(cfg, rng);
  SolveReport report;
  report.status = SolveStatus::Converged;
  report.final_alloc = Allocation::zeros(2, 1.0);
  report.final_alloc.p_noma = {cfg.p_max_w(), 0.0};
  report.rates = evaluate_rates(ch, report.final_alloc);
  report.objective_trajectory = {weighted_sum_rate(cfg, ch, report.final_alloc)};
  const MetricsRecord r = make_record(cfg, ch, report, 0);
  ASSERT_TRUE(r.sum_rate.has_value());
  EXPECT_FALSE(r.proportional_fairness.has_value());

  report.final_alloc.p_noma = {0.5 * cfg.p_max_w(), 0.5 * cfg.p_max_w()};
  report.rates = evaluate_rates(ch, report.final_alloc);
  const MetricsRecord both = make_record(cfg, ch, report, 0);
  ASSERT_TRUE(both.proportional_fairness.has_value());
  EXPECT_NEAR(*both.proportional_fairness,
              std::log(both.per_user_rates[0]) + std::log(both.per_user_rates[1]), 1e-12);
}

MetricsRecord fake(AccessMode mode, double rth, SolveStatus status, double wsr, int iterations) {
  MetricsRecord r;
  r.mode = mode;
  r.r_th = rth;
  r.p_max_dbm = 35.0;
  r.weight_scheme = "equal";
  r.status = status;
  r.iterations = iterations;
  if (r.feasible()) {
    r.weighted_sum_rate = wsr;
    r.sum_rate = wsr;
    r.proportional_fairness = 1.0;
    r.per_user_rates = {wsr};
  }
  return r;
}

TEST(Summary, GroupsAndCounts) {
  std::vector<MetricsRecord> rows{
      fake(AccessMode::Hybrid, 1.0, SolveStatus::Converged, 10.0, 3),
      fake(AccessMode::Hybrid, 1.0, SolveStatus::Converged, 20.0, 5),
      fake(AccessMode::Hybrid, 1.0, SolveStatus::MaxIterReached, 30.0, 100),
      fake(AccessMode::RsmaOnly, 1.0, SolveStatus::InfeasibleScenario, 0.0, 0),
      fake(AccessMode::RsmaOnly, 1.0, SolveStatus::SolverFailure, 0.0, 2),
  };
  const auto s = summarize(rows);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].mode, AccessMode::Hybrid);
  EXPECT_EQ(s[0].runs, 3);
  EXPECT_EQ(s[0].feasible, 3);
  EXPECT_DOUBLE_EQ(s[0].feasibility_rate, 1.0);
  EXPECT_DOUBLE_EQ(*s[0].mean_weighted_sum_rate, 20.0);
  EXPECT_DOUBLE_EQ(*s[0].median_weighted_sum_rate, 20.0);
  EXPECT_DOUBLE_EQ(*s[0].median_iterations, 5.0);
  EXPECT_EQ(s[1].mode, AccessMode::RsmaOnly);
  EXPECT_EQ(s[1].feasible, 0);
  EXPECT_EQ(s[1].failures, 1);
  EXPECT_DOUBLE_EQ(s[1].feasibility_rate, 0.0);
  EXPECT_FALSE(s[1].mean_weighted_sum_rate.has_value());
  EXPECT_TRUE(summarize({}).empty());

  std::ostringstream out;
  write_summary(out, s);
  std::istringstream lines(out.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 3);
}

TEST(Stats, MeanAndMedian) {
  EXPECT_FALSE(mean({}).has_value());
  EXPECT_FALSE(median({}).has_value());
  EXPECT_DOUBLE_EQ(*mean({1.0, 2.0, 6.0}), 3.0);
  EXPECT_DOUBLE_EQ(*median({5.0, 1.0, 3.0}), 3.0);
  EXPECT_DOUBLE_EQ(*median({4.0, 1.0, 3.0, 2.0}), 2.5);
}

}  // namespace
}  // namespace rsnoma
