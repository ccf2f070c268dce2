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

#include "rsnoma/sca_driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace rsnoma {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterReached: return "MaxIterReached";
    case SolveStatus::InfeasibleScenario: return "InfeasibleScenario";
    case SolveStatus::SolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

namespace {

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

// Smallest NOMA powers meeting every SIC row with equality.
std::vector<double> minimal_noma_powers(const ChannelRealization& ch, double p_tol) {
  const int u = ch.num_users();
  std::vector<double> m(idx(u), 0.0);
  double stronger = 0.0;
  for (int k = 1; k < u; ++k) {
    stronger += m[idx(k - 1)];
    m[idx(k)] = stronger + p_tol * ch.a_noma[idx(k - 1)];
  }
  return m;
}

std::vector<double> noma_start(const ChannelRealization& ch, double budget, double p_tol) {
  const int u = ch.num_users();
  std::vector<double> geometric(idx(u));
  for (int k = 0; k < u; ++k) geometric[idx(k)] = std::ldexp(1.0, k + 1);
  const double weight_sum = std::accumulate(geometric.begin(), geometric.end(), 0.0);

  std::vector<double> p(idx(u));
  for (int k = 0; k < u; ++k) p[idx(k)] = 0.95 * budget * geometric[idx(k)] / weight_sum;
  bool meets_sic = true;
  double stronger = 0.0;
  for (int k = 1; k < u; ++k) {
    stronger += p[idx(k - 1)];
    meets_sic = meets_sic && p[idx(k)] - stronger > p_tol * ch.a_noma[idx(k - 1)];
  }
  if (meets_sic) return p;

  // The geometric profile has a positive homogeneous SIC margin, so adding it
  // on top of the minimal chain keeps every row strictly satisfied.
  const std::vector<double> m = minimal_noma_powers(ch, p_tol);
  const double floor = std::accumulate(m.begin(), m.end(), 0.0);
  if (floor >= budget) throw InfeasibleScenario("NOMA SIC thresholds exceed the power budget");
  const double room = floor < 0.95 * budget ? 0.95 * budget - floor : 0.5 * (budget - floor);
  for (int k = 0; k < u; ++k) p[idx(k)] = m[idx(k)] + room * geometric[idx(k)] / weight_sum;
  return p;
}

double rsma_requirement(const ChannelRealization& ch, double p_tol) {
  return p_tol * *std::max_element(ch.a_rsma.begin(), ch.a_rsma.end());
}

void rsma_start(const ChannelRealization& ch, double budget, double p_tol, Allocation& a) {
  const int u = ch.num_users();
  const double req = rsma_requirement(ch, p_tol);
  if (req >= budget) throw InfeasibleScenario("RSMA SIC threshold exceeds the power budget");
  double common = 0.7 * budget;
  double private_total = 0.25 * budget;
  if (common - private_total <= req) {
    const double total = req < 0.95 * budget ? 0.95 * budget : 0.5 * (budget + req);
    private_total = 0.25 * (total - req);
    common = total - private_total;
  }
  a.p_common = common;
  for (int k = 0; k < u; ++k) a.p_private[idx(k)] = private_total / u;
  double min_cap = kInf;
  for (int k = 0; k < u; ++k) {
    a.lambda_slack[idx(k)] = private_total + ch.a_rsma[idx(k)];
    a.gamma_slack[idx(k)] = common / a.lambda_slack[idx(k)];
    min_cap = std::min(min_cap, std::log2(1.0 + a.gamma_slack[idx(k)]));
  }
  for (int k = 0; k < u; ++k) a.c[idx(k)] = 0.9 * min_cap / u;
}

double min_qos_slack(const ScenarioConfig& config, const ChannelRealization& ch, const Allocation& a) {
  const RateBreakdown r = evaluate_rates(ch, a);
  double worst = kInf;
  for (int k = 0; k < ch.num_users(); ++k) worst = std::min(worst, r.r_total[idx(k)] - config.r_th[idx(k)]);
  return worst;
}

struct Restoration {
  bool feasible = false;
  bool solver_failed = false;
  ExpansionPoint point;
  int passes = 0;
};

// SCA on  max s  s.t. linearized QoS_k >= R_th_k + s  and every other row.
Restoration restore_qos(const ScenarioConfig& config, const ChannelRealization& ch, ExpansionPoint point,
                        const RunOptions& options) {
  Restoration out;
  double previous = -kInf;
  for (int pass = 0; pass < config.restoration_max_passes; ++pass) {
    SubproblemSpec spec = assemble_subproblem(config, ch, point);
    ConvexProgram& prog = spec.program;
    const double margin0 = min_qos_slack(config, ch, point.alloc) - 1.0;
    const int s = prog.add_variable("qos_margin", margin0 - 1.0, kInf);
    for (auto& row : prog.log_rows) {
      if (row.label.rfind("qos_", 0) == 0) row.lhs.add(s, 1.0);
    }
    prog.objective_affine = AffineForm{}.add(s, 1.0);
    prog.objective_logs.clear();

    std::vector<double> start = spec.layout.to_vector(point.alloc);
    start.push_back(margin0);
    const SolverOutcome result = solve(prog, config.solver_tol, options.solver_max_iter, start);
    ++out.passes;
    if (options.on_subproblem) options.on_subproblem(spec, result);
    if (result.status != SolverStatus::Optimal) {
      out.solver_failed = true;
      return out;
    }
    point.alloc = spec.layout.to_allocation(std::span(result.x).first(result.x.size() - 1));
    const double margin = result.x.back();
    if (margin > 1e-6 && min_qos_slack(config, ch, point.alloc) > 0.0) {
      out.feasible = true;
      out.point = point;
      return out;
    }
    if (margin - previous < config.epsilon1) break;
    previous = margin;
  }
  return out;
}

}  // namespace

ExpansionPoint initialize(const ScenarioConfig& config, const ChannelRealization& ch) {
  config.validate();
  const int u = ch.num_users();
  if (u != config.num_users) throw std::invalid_argument("channel and config disagree on num_users");
  const double p_max = config.p_max_w();
  const double p_tol = config.p_tol_w();

  double beta = 0.5;
  if (config.mode == AccessMode::NomaOnly) beta = 1.0;
  if (config.mode == AccessMode::RsmaOnly) beta = 0.0;
  if (config.mode == AccessMode::Hybrid) {
    // Shift the split when one side cannot host its SIC floor at 0.5.
    const auto m = minimal_noma_powers(ch, p_tol);
    const double noma_floor = std::accumulate(m.begin(), m.end(), 0.0);
    const double rsma_floor = rsma_requirement(ch, p_tol);
    if (noma_floor + rsma_floor >= p_max) throw InfeasibleScenario("SIC thresholds exceed the power budget");
    if (noma_floor >= 0.5 * p_max || rsma_floor >= 0.5 * p_max) {
      beta = (noma_floor + 0.5 * (p_max - noma_floor - rsma_floor)) / p_max;
    }
  }

  ExpansionPoint point{Allocation::zeros(u, beta)};
  if (config.mode != AccessMode::RsmaOnly) point.alloc.p_noma = noma_start(ch, beta * p_max, p_tol);
  if (config.mode != AccessMode::NomaOnly) rsma_start(ch, (1.0 - beta) * p_max, p_tol, point.alloc);
  return point;
}

SolveReport run(const ScenarioConfig& config, const ChannelRealization& ch, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  SolveReport report;
  auto finish = [&](SolveStatus status, const Allocation& alloc) {
    report.status = status;
    report.final_alloc = alloc;
    report.rates = evaluate_rates(ch, alloc);
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
  };

  ExpansionPoint point;
  try {
    point = initialize(config, ch);
  } catch (const InfeasibleScenario&) {
    return finish(SolveStatus::InfeasibleScenario, Allocation::zeros(ch.num_users(), 0.5));
  }

  // An infeasible start is no baseline: the first feasible iterate may score lower.
  auto baseline = [&](const Allocation& a) {
    return min_qos_slack(config, ch, a) >= 0.0 ? weighted_sum_rate(config, ch, a) : -kInf;
  };
  bool restored = false;
  double previous = baseline(point.alloc);
  for (int t = 1; t <= config.l_max; ++t) {
    const SubproblemSpec spec = assemble_subproblem(config, ch, point);
    const SolverOutcome result =
        solve(spec.program, config.solver_tol, options.solver_max_iter, spec.layout.to_vector(point.alloc));
    if (options.on_subproblem) options.on_subproblem(spec, result);

    if (result.status == SolverStatus::Infeasible && t == 1 && !restored) {
      Restoration r = restore_qos(config, ch, point, options);
      report.restoration_passes += r.passes;
      if (!r.feasible) {
        return finish(r.solver_failed ? SolveStatus::SolverFailure : SolveStatus::InfeasibleScenario, point.alloc);
      }
      restored = true;
      point = r.point;
      previous = baseline(point.alloc);
      t = 0;
      continue;
    }
    if (result.status == SolverStatus::Infeasible && t == 1) {
      return finish(SolveStatus::InfeasibleScenario, point.alloc);
    }
    if (result.status != SolverStatus::Optimal) return finish(SolveStatus::SolverFailure, point.alloc);

    point.alloc = spec.layout.to_allocation(result.x);
    const double exact = weighted_sum_rate(config, ch, point.alloc);
    report.surrogate_trajectory.push_back(result.objective_value);
    report.objective_trajectory.push_back(exact);
    report.iterations = t;
    if (options.on_iteration) {
      options.on_iteration({t, result.objective_value, exact,
                            max_violation(check_feasibility(config, ch, point.alloc, 0.0))});
    }
    const double improvement = result.objective_value - previous;
    previous = result.objective_value;
    if (improvement < config.epsilon1) return finish(SolveStatus::Converged, point.alloc);
  }
  return finish(SolveStatus::MaxIterReached, point.alloc);
}

std::array<SolveReport, 3> run_mode_suite(const ScenarioConfig& config, const ChannelRealization& ch,
                                          const RunOptions& options) {
  std::array<SolveReport, 3> reports;
  const std::array modes{AccessMode::Hybrid, AccessMode::NomaOnly, AccessMode::RsmaOnly};
  for (std::size_t i = 0; i < modes.size(); ++i) {
    ScenarioConfig cfg = config;
    cfg.mode = modes[i];
    reports[i] = run(cfg, ch, options);
  }
  return reports;
}

}  // namespace rsnoma
