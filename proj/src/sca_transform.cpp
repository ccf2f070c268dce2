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

#include "rsnoma/sca_transform.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rsnoma {

namespace {

constexpr double kLn2 = std::numbers::ln2;

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

// Adds coef * variable; a removed variable contributes coef * pinned value.
void add_var(AffineForm& form, int index, double coef, double pinned = 0.0) {
  if (index >= 0) {
    form.add(index, coef);
  } else {
    form.add_constant(coef * pinned);
  }
}

double stronger_noma_power(const Allocation& a, int k) {
  return std::accumulate(a.p_noma.begin(), a.p_noma.begin() + k, 0.0);
}

double other_private_power(const Allocation& a, int k) {
  return std::accumulate(a.p_private.begin(), a.p_private.end(), 0.0) - a.p_private[idx(k)];
}

// log2(sum_{j<=k} p^N_j + a^N_k)
LogTerm noma_desired(const ChannelRealization& ch, const VariableLayout& layout, int k, double weight) {
  LogTerm term{weight, {}};
  for (int j = 0; j <= k; ++j) term.arg.add(layout.p_noma[idx(j)], 1.0);
  term.arg.add_constant(ch.a_noma[idx(k)]);
  return term;
}

// log2(sum_j p^P_j + a^R_k)
LogTerm rsma_desired(const ChannelRealization& ch, const VariableLayout& layout, int k, double weight) {
  LogTerm term{weight, {}};
  for (int j : layout.p_private) term.arg.add(j, 1.0);
  term.arg.add_constant(ch.a_rsma[idx(k)]);
  return term;
}

// First-order expansion of weight * log2(sum_{j<k} p^N_j + a^N_k) about the point.
AffineForm noma_interference_tangent(const ChannelRealization& ch, const ExpansionPoint& point,
                                     const VariableLayout& layout, int k, double weight) {
  const double s0 = stronger_noma_power(point.alloc, k) + ch.a_noma[idx(k)];
  AffineForm form;
  form.add_constant(weight * std::log2(s0));
  const double slope = weight / (s0 * kLn2);
  for (int j = 0; j < k; ++j) {
    form.add(layout.p_noma[idx(j)], slope);
    form.add_constant(-slope * point.alloc.p_noma[idx(j)]);
  }
  return form;
}

// First-order expansion of weight * log2(sum_{j!=k} p^P_j + a^R_k) about the point.
AffineForm rsma_interference_tangent(const ChannelRealization& ch, const ExpansionPoint& point,
                                     const VariableLayout& layout, int k, double weight) {
  const double s0 = other_private_power(point.alloc, k) + ch.a_rsma[idx(k)];
  AffineForm form;
  form.add_constant(weight * std::log2(s0));
  const double slope = weight / (s0 * kLn2);
  for (int j = 0; j < static_cast<int>(layout.p_private.size()); ++j) {
    if (j == k) continue;
    form.add(layout.p_private[idx(j)], slope);
    form.add_constant(-slope * point.alloc.p_private[idx(j)]);
  }
  return form;
}

}  // namespace

void ExpansionPoint::validate(const ChannelRealization& ch) const {
  const int u = ch.num_users();
  if (alloc.num_users() != u) throw std::domain_error("expansion point has the wrong number of users");
  for (int k = 0; k < u; ++k) {
    if (!(stronger_noma_power(alloc, k) + ch.a_noma[idx(k)] > 0.0) ||
        !(other_private_power(alloc, k) + ch.a_rsma[idx(k)] > 0.0)) {
      throw std::domain_error("degenerate interference denominator at expansion point");
    }
  }
}

VariableLayout VariableLayout::create(AccessMode mode, int users, ConvexProgram& prog) {
  const bool noma = mode != AccessMode::RsmaOnly;
  const bool rsma = mode != AccessMode::NomaOnly;
  const auto u = idx(users);
  VariableLayout l;
  l.p_noma.assign(u, -1);
  l.p_private.assign(u, -1);
  l.c.assign(u, -1);
  l.gamma.assign(u, -1);
  l.lambda.assign(u, -1);
  auto family = [&](std::vector<int>& slots, const char* name) {
    for (int k = 0; k < users; ++k) slots[idx(k)] = prog.add_variable(name + std::to_string(k + 1));
  };
  if (noma) family(l.p_noma, "pN");
  if (rsma) {
    family(l.p_private, "pP");
    l.p_common = prog.add_variable("pC");
    family(l.c, "c");
    family(l.gamma, "gamma");
    family(l.lambda, "lambda");
  }
  if (mode == AccessMode::Hybrid) {
    l.beta = prog.add_variable("beta", 0.0, 1.0);
  } else {
    l.fixed_beta = noma ? 1.0 : 0.0;
  }
  return l;
}

Allocation VariableLayout::to_allocation(std::span<const double> x) const {
  auto pick = [&](int index) { return index >= 0 ? x[idx(index)] : 0.0; };
  const int u = static_cast<int>(p_noma.size());
  Allocation a = Allocation::zeros(u, beta >= 0 ? x[idx(beta)] : fixed_beta);
  for (int k = 0; k < u; ++k) {
    const auto i = idx(k);
    a.p_noma[i] = pick(p_noma[i]);
    a.p_private[i] = pick(p_private[i]);
    a.c[i] = pick(c[i]);
    a.gamma_slack[i] = pick(gamma[i]);
    a.lambda_slack[i] = pick(lambda[i]);
  }
  a.p_common = pick(p_common);
  return a;
}

std::vector<double> VariableLayout::to_vector(const Allocation& a) const {
  std::size_t n = 0;
  for (const auto* family : {&p_noma, &p_private, &c, &gamma, &lambda}) {
    for (int index : *family) n += index >= 0;
  }
  n += (p_common >= 0) + (beta >= 0);
  std::vector<double> x(n, 0.0);
  auto put = [&](int index, double value) {
    if (index >= 0) x[idx(index)] = value;
  };
  for (std::size_t k = 0; k < p_noma.size(); ++k) {
    put(p_noma[k], a.p_noma[k]);
    put(p_private[k], a.p_private[k]);
    put(c[k], a.c[k]);
    put(gamma[k], a.gamma_slack[k]);
    put(lambda[k], a.lambda_slack[k]);
  }
  put(p_common, a.p_common);
  put(beta, a.beta);
  return x;
}

ObjectiveTerms build_objective_lower_bound(const ScenarioConfig& config, const ChannelRealization& ch,
                                           const ExpansionPoint& point, const VariableLayout& layout) {
  point.validate(ch);
  ObjectiveTerms obj;
  const int u = ch.num_users();
  if (layout.has_noma()) {
    for (int k = 0; k < u; ++k) {
      const double w = config.weights_noma[idx(k)];
      obj.logs.push_back(noma_desired(ch, layout, k, w));
      obj.affine.accumulate(noma_interference_tangent(ch, point, layout, k, w), -1.0);
    }
  }
  if (layout.has_rsma()) {
    for (int k = 0; k < u; ++k) {
      const double w = config.weights_rsma[idx(k)];
      obj.logs.push_back(rsma_desired(ch, layout, k, w));
      obj.affine.accumulate(rsma_interference_tangent(ch, point, layout, k, w), -1.0);
      obj.affine.add(layout.c[idx(k)], w);
    }
  }
  return obj;
}

std::vector<LogRow> build_qos_constraints(const ScenarioConfig& config, const ChannelRealization& ch,
                                          const ExpansionPoint& point, const VariableLayout& layout) {
  point.validate(ch);
  std::vector<LogRow> rows;
  const int u = ch.num_users();
  for (int k = 0; k < u; ++k) {
    LogRow row;
    row.label = "qos_" + std::to_string(k + 1);
    row.lhs.add_constant(config.r_th[idx(k)]);
    if (layout.has_noma()) {
      row.logs.push_back(noma_desired(ch, layout, k, 1.0));
      row.lhs.accumulate(noma_interference_tangent(ch, point, layout, k, 1.0));
    }
    if (layout.has_rsma()) {
      row.logs.push_back(rsma_desired(ch, layout, k, 1.0));
      row.lhs.accumulate(rsma_interference_tangent(ch, point, layout, k, 1.0));
      row.rhs.add(layout.c[idx(k)], 1.0);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CommonRateRows build_common_rate_constraints(const ChannelRealization& ch, const ExpansionPoint& point,
                                             const VariableLayout& layout) {
  CommonRateRows out;
  if (!layout.has_rsma()) return out;
  const int u = ch.num_users();
  AffineForm shares;
  for (int index : layout.c) shares.add(index, 1.0);
  for (int k = 0; k < u; ++k) {
    const auto i = idx(k);
    LogRow share;
    share.label = "common_share_" + std::to_string(k + 1);
    share.lhs = shares;
    share.logs.push_back({1.0, AffineForm{}.add(layout.gamma[i], 1.0).add_constant(1.0)});
    out.share.push_back(std::move(share));

    AffineForm interference;
    for (int index : layout.p_private) interference.add(index, 1.0);
    interference.add_constant(ch.a_rsma[i]);
    interference.add(layout.lambda[i], -1.0);
    out.interference.push_back(std::move(interference));

    // p^C >= 1/4 [ (lambda+gamma)^2 + d^2 - 2 d (lambda-gamma) ],  d = lambda(t) - gamma(t)
    const double d = point.alloc.lambda_slack[i] - point.alloc.gamma_slack[i];
    QuadRow product;
    product.label = "common_product_" + std::to_string(k + 1);
    product.square.add(layout.lambda[i], 1.0).add(layout.gamma[i], 1.0);
    product.lhs.add_constant(0.25 * d * d);
    product.lhs.add(layout.lambda[i], -0.5 * d).add(layout.gamma[i], 0.5 * d);
    product.rhs.add(layout.p_common, 1.0);
    out.product.push_back(std::move(product));
  }
  return out;
}

LinearRows build_linear_constraints(const ScenarioConfig& config, const ChannelRealization& ch,
                                    const VariableLayout& layout) {
  LinearRows out;
  const int u = ch.num_users();
  const double p_max = config.p_max_w();
  const double p_tol = config.p_tol_w();
  auto push = [&](AffineForm row, std::string label) {
    out.rows.push_back(std::move(row));
    out.labels.push_back(std::move(label));
  };
  if (layout.has_noma()) {
    AffineForm budget;
    for (int index : layout.p_noma) budget.add(index, 1.0);
    add_var(budget, layout.beta, -p_max, layout.fixed_beta);
    push(std::move(budget), "budget_noma");
  }
  if (layout.has_rsma()) {
    AffineForm budget;
    for (int index : layout.p_private) budget.add(index, 1.0);
    budget.add(layout.p_common, 1.0);
    // sum + p^C - (1 - beta) P_max
    add_var(budget, layout.beta, p_max, layout.fixed_beta);
    budget.add_constant(-p_max);
    push(std::move(budget), "budget_rsma");
  }
  if (layout.has_noma()) {
    for (int k = 1; k < u; ++k) {
      AffineForm sic;
      sic.add_constant(p_tol * ch.a_noma[idx(k - 1)]);
      for (int j = 0; j < k; ++j) sic.add(layout.p_noma[idx(j)], 1.0);
      sic.add(layout.p_noma[idx(k)], -1.0);
      push(std::move(sic), "sic_noma_" + std::to_string(k + 1));
    }
  }
  if (layout.has_rsma()) {
    for (int k = 0; k < u; ++k) {
      AffineForm sic;
      sic.add_constant(p_tol * ch.a_rsma[idx(k)]);
      for (int index : layout.p_private) sic.add(index, 1.0);
      sic.add(layout.p_common, -1.0);
      push(std::move(sic), "sic_rsma_" + std::to_string(k + 1));
    }
  }
  return out;
}

SubproblemSpec assemble_subproblem(const ScenarioConfig& config, const ChannelRealization& ch,
                                   const ExpansionPoint& point) {
  point.validate(ch);
  SubproblemSpec spec;
  spec.layout = VariableLayout::create(config.mode, ch.num_users(), spec.program);
  ConvexProgram& prog = spec.program;

  ObjectiveTerms obj = build_objective_lower_bound(config, ch, point, spec.layout);
  prog.objective_affine = std::move(obj.affine);
  prog.objective_logs = std::move(obj.logs);

  LinearRows linear = build_linear_constraints(config, ch, spec.layout);
  for (std::size_t i = 0; i < linear.rows.size(); ++i) prog.add_linear_row(linear.rows[i], linear.labels[i]);

  CommonRateRows common = build_common_rate_constraints(ch, point, spec.layout);
  for (std::size_t k = 0; k < common.interference.size(); ++k) {
    prog.add_linear_row(common.interference[k], "common_interference_" + std::to_string(k + 1));
  }
  for (auto& row : common.share) prog.log_rows.push_back(std::move(row));
  for (auto& row : build_qos_constraints(config, ch, point, spec.layout)) prog.log_rows.push_back(std::move(row));
  for (auto& row : common.product) prog.quad_rows.push_back(std::move(row));
  return spec;
}

double dc_objective(const ScenarioConfig& config, const ChannelRealization& ch, const Allocation& alloc) {
  double f = 0.0;
  const double private_total = std::accumulate(alloc.p_private.begin(), alloc.p_private.end(), 0.0);
  for (int k = 0; k < ch.num_users(); ++k) {
    const auto i = idx(k);
    const double stronger = stronger_noma_power(alloc, k);
    f += config.weights_noma[i] *
         (std::log2(stronger + alloc.p_noma[i] + ch.a_noma[i]) - std::log2(stronger + ch.a_noma[i]));
    f += config.weights_rsma[i] *
         (std::log2(private_total + ch.a_rsma[i]) - std::log2(other_private_power(alloc, k) + ch.a_rsma[i]));
    f += config.weights_rsma[i] * alloc.c[i];
  }
  return f;
}

}  // namespace rsnoma
