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

#ifndef RSNOMA_EXPERIMENT_HPP
#define RSNOMA_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsnoma/sca_driver.hpp"
#include "rsnoma/scenario.hpp"

namespace rsnoma {

/// One CSV row: a single (sweep point, draw, mode) run.
struct MetricsRecord {
  std::uint64_t seed = 0;
  int draw_index = 0;
  AccessMode mode = AccessMode::Hybrid;
  double p_max_dbm = 0.0;
  double r_th = 0.0;
  std::string weight_scheme;  // "equal", "exp_flip" or "custom"
  SolveStatus status = SolveStatus::SolverFailure;
  int iterations = 0;
  // Rate metrics are empty unless the run solved.
  std::optional<double> weighted_sum_rate;
  std::optional<double> sum_rate;
  std::optional<double> proportional_fairness;  // empty when any rate <= 1e-9
  std::optional<double> beta;
  std::vector<double> per_user_rates;

  bool feasible() const { return status == SolveStatus::Converged || status == SolveStatus::MaxIterReached; }
};

std::string_view csv_header();
std::string to_csv_row(const MetricsRecord& record);
/// Throws std::invalid_argument on a malformed row.
MetricsRecord parse_csv_row(std::string_view line);

void write_csv(std::ostream& out, const std::vector<MetricsRecord>& records);
/// Accepts an empty stream; a header line is optional.
std::vector<MetricsRecord> read_csv(std::istream& in);

MetricsRecord make_record(const ScenarioConfig& config, const ChannelRealization& ch, const SolveReport& report,
                          int draw_index);

/// "rth:0:3:0.5" or "pmax:25:35:5"; the end point is included.
struct SweepSpec {
  enum class Param { RTh, PMax };
  Param param = Param::RTh;
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
  static SweepSpec parse(std::string_view text);
};

struct SweepOptions {
  int draws = 30;
  std::uint64_t seed = 42;
  std::vector<AccessMode> modes{AccessMode::Hybrid, AccessMode::NomaOnly, AccessMode::RsmaOnly};
  std::optional<WeightScheme> weights;  // empty: keep the config's weights
  unsigned threads = 0;                 // 0: hardware concurrency
  RunOptions run;
  /// Called for every finished iteration, tagged with its run.
  std::function<void(const MetricsRecord& tag, const IterationLog&)> on_iteration;
};

/// Runs every sweep value x draw x mode.  Draw d uses the same channel for
/// every mode and sweep value.  Rows come back ordered by sweep value, draw,
/// then the order of `options.modes`.
std::vector<MetricsRecord> sweep(const ScenarioConfig& base, const std::optional<SweepSpec>& spec,
                                 const SweepOptions& options);

struct SummaryRow {
  std::string weight_scheme;
  AccessMode mode = AccessMode::Hybrid;
  double p_max_dbm = 0.0;
  double r_th = 0.0;
  int runs = 0;
  int feasible = 0;
  int failures = 0;  // SolverFailure rows
  double feasibility_rate = 0.0;
  std::optional<double> mean_weighted_sum_rate;
  std::optional<double> median_weighted_sum_rate;
  std::optional<double> mean_sum_rate;
  std::optional<double> median_sum_rate;
  std::optional<double> median_proportional_fairness;
  std::optional<double> median_iterations;
};

/// Groups by (weight scheme, mode, P_max, R_th).  Rate statistics use the
/// feasible rows only.
std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records);
void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);

std::optional<double> mean(const std::vector<double>& values);
std::optional<double> median(std::vector<double> values);

}  // namespace rsnoma

#endif  // RSNOMA_EXPERIMENT_HPP
