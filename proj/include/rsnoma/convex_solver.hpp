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

#ifndef RSNOMA_CONVEX_SOLVER_HPP
#define RSNOMA_CONVEX_SOLVER_HPP

#include <span>
#include <string_view>
#include <vector>

#include "rsnoma/convex_program.hpp"

namespace rsnoma {

enum class SolverStatus { Optimal, Infeasible, Unbounded, MaxIterations, NumericalFailure };

std::string_view to_string(SolverStatus status);

struct SolverOutcome {
  SolverStatus status = SolverStatus::NumericalFailure;
  std::vector<double> x;  // empty unless Optimal
  double objective_value = 0.0;
  double kkt_residual = kInf;
  int iterations = 0;  // Newton steps over both phases

  // Multipliers recovered from the barrier: one per row (linear, log, quad
  // order) and one per lower/upper bound (zero for infinite bounds).
  std::vector<double> row_duals;
  std::vector<double> lower_duals;
  std::vector<double> upper_duals;
};

/// Primal barrier interior-point method for ConvexProgram.
///
/// Phase 1 maximizes the minimum row slack from `start` (or from the box
/// center when `start` is empty); a maximal slack below -1e-7 is reported as
/// Infeasible.  Phase 2 follows the central path until the duality gap and
/// the relative stationarity residual both drop below `tol`.
SolverOutcome solve(const ConvexProgram& prog, double tol, int max_iter,
                    std::span<const double> start = {});

}  // namespace rsnoma

#endif  // RSNOMA_CONVEX_SOLVER_HPP
