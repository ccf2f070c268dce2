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

#ifndef RSNOMA_SCA_TRANSFORM_HPP
#define RSNOMA_SCA_TRANSFORM_HPP

#include <span>
#include <string>
#include <vector>

#include "rsnoma/convex_program.hpp"
#include "rsnoma/rate_model.hpp"
#include "rsnoma/scenario.hpp"

namespace rsnoma {

/// The iterate about which every first-order expansion of one SCA step is taken.
struct ExpansionPoint {
  Allocation alloc;

  /// Throws std::domain_error when an interference-plus-noise denominator
  /// used by the expansions is not strictly positive.
  void validate(const ChannelRealization& ch) const;
};

/// Maps program variables to Allocation fields.  Index -1 marks a variable
/// that the access mode removes; it then takes its pinned value (zero, or the
/// fixed split for beta).
struct VariableLayout {
  std::vector<int> p_noma;
  std::vector<int> p_private;
  int p_common = -1;
  std::vector<int> c;
  std::vector<int> gamma;
  std::vector<int> lambda;
  int beta = -1;
  double fixed_beta = 0.5;

  bool has_noma() const { return !p_noma.empty() && p_noma.front() >= 0; }
  bool has_rsma() const { return p_common >= 0; }

  /// Registers the mode's variables on `prog` in the order
  /// p^N, p^P, p^C, c, gamma, lambda, beta.
  static VariableLayout create(AccessMode mode, int users, ConvexProgram& prog);

  Allocation to_allocation(std::span<const double> x) const;
  std::vector<double> to_vector(const Allocation& alloc) const;
};

/// Concave surrogate objective: affine part plus weighted base-2 logs.
struct ObjectiveTerms {
  AffineForm affine;
  std::vector<LogTerm> logs;
};

ObjectiveTerms build_objective_lower_bound(const ScenarioConfig& config, const ChannelRealization& ch,
                                           const ExpansionPoint& point, const VariableLayout& layout);

/// One row per user: linearized total rate + c_k >= R_k^th.
std::vector<LogRow> build_qos_constraints(const ScenarioConfig& config, const ChannelRealization& ch,
                                          const ExpansionPoint& point, const VariableLayout& layout);

struct CommonRateRows {
  std::vector<LogRow> share;          // sum_i c_i <= log2(1 + gamma_k)
  std::vector<AffineForm> interference;  // sum_j p^P_j + a^R_k - lambda_k <= 0
  std::vector<QuadRow> product;       // convex restriction of p^C >= lambda_k gamma_k
};

CommonRateRows build_common_rate_constraints(const ChannelRealization& ch, const ExpansionPoint& point,
                                             const VariableLayout& layout);

struct LinearRows {
  std::vector<AffineForm> rows;  // each row <= 0
  std::vector<std::string> labels;
};

/// Power budgets and both SIC families, each SIC row divided by its delta.
/// Non-negativity and 0 <= beta <= 1 live in the variable bounds.
LinearRows build_linear_constraints(const ScenarioConfig& config, const ChannelRealization& ch,
                                    const VariableLayout& layout);

struct SubproblemSpec {
  ConvexProgram program;
  VariableLayout layout;
};

SubproblemSpec assemble_subproblem(const ScenarioConfig& config, const ChannelRealization& ch,
                                   const ExpansionPoint& point);

/// The regrouped difference-of-logs form of the exact objective; equals
/// weighted_sum_rate() up to round-off.
double dc_objective(const ScenarioConfig& config, const ChannelRealization& ch, const Allocation& alloc);

}  // namespace rsnoma

#endif  // RSNOMA_SCA_TRANSFORM_HPP
