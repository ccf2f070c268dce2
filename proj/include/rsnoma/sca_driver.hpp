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

#ifndef RSNOMA_SCA_DRIVER_HPP
#define RSNOMA_SCA_DRIVER_HPP

#include <array>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "rsnoma/convex_solver.hpp"
#include "rsnoma/rate_model.hpp"
#include "rsnoma/sca_transform.hpp"
#include "rsnoma/scenario.hpp"

namespace rsnoma {

enum class SolveStatus { Converged, MaxIterReached, InfeasibleScenario, SolverFailure };

std::string_view to_string(SolveStatus status);

/// Thrown by initialize() when the SIC rows cannot be met inside the budget.
class InfeasibleScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveReport {
  SolveStatus status = SolveStatus::SolverFailure;
  std::vector<double> objective_trajectory;  // exact weighted sum-rate per iterate
  std::vector<double> surrogate_trajectory;  // subproblem optimum per iterate
  Allocation final_alloc;
  RateBreakdown rates;
  int iterations = 0;         // main-loop subproblem solves
  int restoration_passes = 0; // QoS restoration solves, not counted above
  double wall_time_s = 0.0;

  bool solved() const { return status == SolveStatus::Converged || status == SolveStatus::MaxIterReached; }
  double final_objective() const { return objective_trajectory.empty() ? 0.0 : objective_trajectory.back(); }
};

struct IterationLog {
  int t;
  double surrogate;
  double exact;
  double max_violation;
};

struct RunOptions {
  int solver_max_iter = 1000;
  /// Called after every main-loop iteration.
  std::function<void(const IterationLog&)> on_iteration;
  /// Called with every subproblem (restoration passes included) and its outcome.
  std::function<void(const SubproblemSpec&, const SolverOutcome&)> on_subproblem;
};

/// Starting point: budget split 0.5 (1 / 0 for the single-scheme modes),
/// geometric NOMA powers with the weakest user largest, 70 % of the RSMA
/// budget on the common stream, slacks tight at the point.  Powers are
/// lifted just enough to meet the SIC rows.
ExpansionPoint initialize(const ScenarioConfig& config, const ChannelRealization& ch);

SolveReport run(const ScenarioConfig& config, const ChannelRealization& ch, const RunOptions& options = {});

/// Hybrid, NomaOnly, RsmaOnly on the same channel draw.
std::array<SolveReport, 3> run_mode_suite(const ScenarioConfig& config, const ChannelRealization& ch,
                                          const RunOptions& options = {});

}  // namespace rsnoma

#endif  // RSNOMA_SCA_DRIVER_HPP
