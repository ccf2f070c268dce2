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

#ifndef RSNOMA_ORACLE_HPP
#define RSNOMA_ORACLE_HPP

#include <cstdint>

#include "rsnoma/rate_model.hpp"
#include "rsnoma/sca_driver.hpp"
#include "rsnoma/scenario.hpp"

namespace rsnoma {

struct OracleResult {
  bool feasible = false;  // false: no grid point met every constraint
  Allocation alloc;
  double objective = 0.0;
  std::int64_t evaluated = 0;
};

/// Exhaustive search for U <= 3: beta on a uniform grid of `density` steps,
/// each power budget split on the simplex lattice of the same resolution
/// (leaving budget unused is allowed), and the common-rate shares assigned
/// exactly for every power point.  Throws std::invalid_argument for U > 3
/// or density < 1.
OracleResult grid_search(const ScenarioConfig& config, const ChannelRealization& ch, AccessMode mode,
                         int density, unsigned threads = 0);

/// Best shares c for fixed powers: cover each user's QoS deficit, then give
/// the rest of the common rate to the largest omega^R.  Returns false when
/// the deficits exceed the common rate.
bool assign_common_shares(const ScenarioConfig& config, const RateBreakdown& rates_without_c, std::vector<double>& c);

/// True when the report's final point is feasible at 1e-6 and its objective
/// is at least (1 - rel_tol) of the oracle's.
bool verify(const ScenarioConfig& config, const ChannelRealization& ch, const SolveReport& report,
            double oracle_value, double rel_tol);

}  // namespace rsnoma

#endif  // RSNOMA_ORACLE_HPP
