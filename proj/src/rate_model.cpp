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

#include "rsnoma/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsnoma {

namespace {

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// log2(1 + signal / (interference + a)) with the SINR written per unit gain.
double rate(double signal, double interference, double a) {
  return std::log2(1.0 + signal / (interference + a));
}

}  // namespace

Allocation Allocation::zeros(int users, double beta) {
  const auto u = idx(users);
  Allocation a;
  a.p_noma.assign(u, 0.0);
  a.p_private.assign(u, 0.0);
  a.c.assign(u, 0.0);
  a.gamma_slack.assign(u, 0.0);
  a.lambda_slack.assign(u, 0.0);
  a.beta = beta;
  return a;
}

double RateBreakdown::common_capacity() const {
  return r_common_cap.empty() ? 0.0 : *std::min_element(r_common_cap.begin(), r_common_cap.end());
}

double RateBreakdown::sum_rate() const { return sum(r_total); }

double noma_rate(const ChannelRealization& ch, const Allocation& alloc, int k) {
  const double interference = std::accumulate(alloc.p_noma.begin(), alloc.p_noma.begin() + k, 0.0);
  return rate(alloc.p_noma[idx(k)], interference, ch.a_noma[idx(k)]);
}

double rsma_common_cap(const ChannelRealization& ch, const Allocation& alloc, int k) {
  return rate(alloc.p_common, sum(alloc.p_private), ch.a_rsma[idx(k)]);
}

double rsma_private_rate(const ChannelRealization& ch, const Allocation& alloc, int k) {
  const double own = alloc.p_private[idx(k)];
  return rate(own, sum(alloc.p_private) - own, ch.a_rsma[idx(k)]);
}

double sic_margin_noma(const ChannelRealization& ch, const Allocation& alloc, int k, double p_tol_w) {
  if (k < 1) throw std::invalid_argument("sic_margin_noma: defined for k >= 1 (second user onwards)");
  const double stronger = std::accumulate(alloc.p_noma.begin(), alloc.p_noma.begin() + k, 0.0);
  const double delta = ch.delta_noma[idx(k - 1)];
  return alloc.p_noma[idx(k)] * delta - stronger * delta - p_tol_w;
}

double sic_margin_rsma(const ChannelRealization& ch, const Allocation& alloc, int k, double p_tol_w) {
  const double delta = ch.delta_rsma[idx(k)];
  return alloc.p_common * delta - sum(alloc.p_private) * delta - p_tol_w;
}

RateBreakdown evaluate_rates(const ChannelRealization& ch, const Allocation& alloc) {
  const int u = ch.num_users();
  RateBreakdown r;
  for (int k = 0; k < u; ++k) {
    r.r_noma.push_back(noma_rate(ch, alloc, k));
    r.r_private.push_back(rsma_private_rate(ch, alloc, k));
    r.r_common_cap.push_back(rsma_common_cap(ch, alloc, k));
    r.r_total.push_back(r.r_noma.back() + r.r_private.back() + alloc.c[idx(k)]);
  }
  return r;
}

double weighted_sum_rate(const ScenarioConfig& config, const ChannelRealization& ch, const Allocation& alloc) {
  double total = 0.0;
  for (int k = 0; k < ch.num_users(); ++k) {
    total += config.weights_noma[idx(k)] * noma_rate(ch, alloc, k);
    total += config.weights_rsma[idx(k)] * (rsma_private_rate(ch, alloc, k) + alloc.c[idx(k)]);
  }
  return total;
}

std::vector<Violation> check_feasibility(const ScenarioConfig& config, const ChannelRealization& ch,
                                         const Allocation& alloc, double tol) {
  std::vector<Violation> out;
  auto require = [&](double excess, const char* family, int user) {
    if (excess > tol) out.push_back({family, user, excess});
  };
  const int u = ch.num_users();
  const bool noma = config.mode != AccessMode::RsmaOnly;
  const bool rsma = config.mode != AccessMode::NomaOnly;
  const double p_max = config.p_max_w();
  const double p_tol = config.p_tol_w();
  const RateBreakdown rates = evaluate_rates(ch, alloc);

  for (int k = 0; k < u; ++k) {
    const auto i = idx(k);
    require(-alloc.p_noma[i], "nonnegativity", k);
    require(-alloc.p_private[i], "nonnegativity", k);
    require(-alloc.c[i], "nonnegativity", k);
  }
  require(-alloc.p_common, "nonnegativity", -1);
  require(-alloc.beta, "beta", -1);
  require(alloc.beta - 1.0, "beta", -1);

  if (rsma) {
    const double shared = sum(alloc.c);
    for (int k = 0; k < u; ++k) require(shared - rates.r_common_cap[idx(k)], "common_rate", k);
  }
  for (int k = 0; k < u; ++k) {
    require(config.r_th[idx(k)] - rates.r_total[idx(k)], "qos", k);
  }
  require(sum(alloc.p_noma) - alloc.beta * p_max, "budget_noma", -1);
  require(sum(alloc.p_private) + alloc.p_common - (1.0 - alloc.beta) * p_max, "budget_rsma", -1);
  if (noma) {
    for (int k = 1; k < u; ++k) require(-sic_margin_noma(ch, alloc, k, p_tol), "sic_noma", k);
  }
  if (rsma) {
    for (int k = 0; k < u; ++k) require(-sic_margin_rsma(ch, alloc, k, p_tol), "sic_rsma", k);
  }

  // Removed variables must be pinned.
  if (!rsma) {
    double stray = alloc.p_common + sum(alloc.p_private) + sum(alloc.c);
    require(std::abs(stray), "mode_reduction", -1);
    require(std::abs(alloc.beta - 1.0), "mode_reduction", -1);
  }
  if (!noma) {
    require(std::abs(sum(alloc.p_noma)), "mode_reduction", -1);
    require(std::abs(alloc.beta), "mode_reduction", -1);
  }
  return out;
}

double max_violation(const std::vector<Violation>& violations) {
  double worst = 0.0;
  for (const auto& v : violations) worst = std::max(worst, v.amount);
  return worst;
}

}  // namespace rsnoma
