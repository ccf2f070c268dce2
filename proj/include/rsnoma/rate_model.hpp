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

#ifndef RSNOMA_RATE_MODEL_HPP
#define RSNOMA_RATE_MODEL_HPP

#include <string>
#include <vector>

#include "rsnoma/scenario.hpp"

namespace rsnoma {

/// Full decision vector: NOMA powers, RSMA private/common powers, common-rate
/// shares, budget split and the two slack families.  Powers in watts, rates
/// in bit/s/Hz.
struct Allocation {
  std::vector<double> p_noma;
  std::vector<double> p_private;
  double p_common = 0.0;
  std::vector<double> c;
  double beta = 0.5;
  std::vector<double> gamma_slack;
  std::vector<double> lambda_slack;

  /// All-zero allocation for `users` users with the given split.
  static Allocation zeros(int users, double beta = 0.5);
  int num_users() const { return static_cast<int>(p_noma.size()); }
};

struct RateBreakdown {
  std::vector<double> r_noma;
  std::vector<double> r_private;
  std::vector<double> r_common_cap;
  std::vector<double> r_total;

  /// Common-stream capacity: the worst user's common rate.
  double common_capacity() const;
  double sum_rate() const;
};

// User indices below are zero-based ranks (0 = strongest NOMA channel).

/// Rate of user k on the NOMA subchannel; stronger users 0..k-1 interfere.
double noma_rate(const ChannelRealization& ch, const Allocation& alloc, int k);
/// Rate at which user k can decode the common stream.
double rsma_common_cap(const ChannelRealization& ch, const Allocation& alloc, int k);
double rsma_private_rate(const ChannelRealization& ch, const Allocation& alloc, int k);

/// NOMA SIC margin for k >= 1, evaluated with user k-1's delta.
/// Non-negative means the constraint holds.
double sic_margin_noma(const ChannelRealization& ch, const Allocation& alloc, int k, double p_tol_w);
double sic_margin_rsma(const ChannelRealization& ch, const Allocation& alloc, int k, double p_tol_w);

RateBreakdown evaluate_rates(const ChannelRealization& ch, const Allocation& alloc);

/// sum_k omega^N_k R^N_k + sum_k omega^R_k (R^P_k + c_k).
double weighted_sum_rate(const ScenarioConfig& config, const ChannelRealization& ch, const Allocation& alloc);

struct Violation {
  std::string family;  // "common_rate", "qos", "budget_noma", ...
  int user = -1;       // -1 for system-wide rows
  double amount = 0.0; // how far past the tolerance-free bound
};

/// Every P1 constraint that fails by more than `tol`.  Families that the
/// configured mode removes (RSMA rows under NomaOnly and vice versa) are
/// skipped; the removed variables must then be zero.
std::vector<Violation> check_feasibility(const ScenarioConfig& config, const ChannelRealization& ch,
                                         const Allocation& alloc, double tol);

double max_violation(const std::vector<Violation>& violations);

}  // namespace rsnoma

#endif  // RSNOMA_RATE_MODEL_HPP
