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

#include "rsnoma/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace rsnoma {

namespace {

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

// Every n with n_i >= 0 and sum n_i <= total.
void for_each_composition(int parts, int total, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> n(idx(parts), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts) {
      visit(n);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      n[idx(i)] = v;
      rec(i + 1, left - v);
    }
    n[idx(i)] = 0;
  };
  rec(0, total);
}

struct NomaCandidate {
  std::vector<double> p;
  std::vector<double> rates;
  double score = 0.0;  // sum omega^N R^N
};

struct RsmaCandidate {
  double p_common = 0.0;
  std::vector<double> p_private;
  std::vector<double> rates;  // private
  double cap = 0.0;           // min_k common-rate capacity
  double score = 0.0;         // sum omega^R R^P
};

double rate(double signal, double interference, double a) { return std::log2(1.0 + signal / (interference + a)); }

std::vector<NomaCandidate> noma_candidates(const ScenarioConfig& config, const ChannelRealization& ch,
                                           double budget, int density) {
  const int u = ch.num_users();
  const double p_tol = config.p_tol_w();
  std::vector<NomaCandidate> out;
  for_each_composition(u, density, [&](const std::vector<int>& n) {
    NomaCandidate c;
    c.p.resize(idx(u));
    for (int k = 0; k < u; ++k) c.p[idx(k)] = budget * n[idx(k)] / density;
    double stronger = 0.0;
    for (int k = 0; k < u; ++k) {
      if (k > 0) {
        const double delta = ch.delta_noma[idx(k - 1)];
        if (c.p[idx(k)] * delta - stronger * delta - p_tol < 0.0) return;
      }
      c.rates.push_back(rate(c.p[idx(k)], stronger, ch.a_noma[idx(k)]));
      c.score += config.weights_noma[idx(k)] * c.rates.back();
      stronger += c.p[idx(k)];
    }
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<RsmaCandidate> rsma_candidates(const ScenarioConfig& config, const ChannelRealization& ch,
                                           double budget, int density) {
  const int u = ch.num_users();
  const double p_tol = config.p_tol_w();
  std::vector<RsmaCandidate> out;
  for_each_composition(u + 1, density, [&](const std::vector<int>& n) {
    RsmaCandidate c;
    c.p_common = budget * n[0] / density;
    double total = 0.0;
    for (int k = 0; k < u; ++k) {
      c.p_private.push_back(budget * n[idx(k + 1)] / density);
      total += c.p_private.back();
    }
    c.cap = kInf;
    for (int k = 0; k < u; ++k) {
      const double delta = ch.delta_rsma[idx(k)];
      if (c.p_common * delta - total * delta - p_tol < 0.0) return;
      const double own = c.p_private[idx(k)];
      c.rates.push_back(rate(own, total - own, ch.a_rsma[idx(k)]));
      c.score += config.weights_rsma[idx(k)] * c.rates.back();
      c.cap = std::min(c.cap, rate(c.p_common, total, ch.a_rsma[idx(k)]));
    }
    out.push_back(std::move(c));
  });
  return out;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
  }
  return true;
}

// Keeps the points not weakly dominated by an earlier kept point.
template <typename T, typename Key>
std::vector<T> pareto(std::vector<T> items, Key key) {
  std::vector<std::vector<double>> keys;
  keys.reserve(items.size());
  for (const auto& it : items) keys.push_back(key(it));
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  auto total = [&](std::size_t i) { return std::accumulate(keys[i].begin(), keys[i].end(), 0.0); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return total(a) > total(b); });
  std::vector<T> front;
  std::vector<std::size_t> front_keys;
  for (std::size_t i : order) {
    bool covered = false;
    for (std::size_t j : front_keys) {
      if (dominates(keys[j], keys[i])) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      front_keys.push_back(i);
      front.push_back(items[i]);
    }
  }
  return front;
}

struct Best {
  bool found = false;
  double value = -kInf;
  Allocation alloc;
  std::int64_t evaluated = 0;
};

Allocation combine(const ChannelRealization& ch, double beta, const NomaCandidate& n, const RsmaCandidate& r,
                   const std::vector<double>& c) {
  const int u = ch.num_users();
  Allocation a = Allocation::zeros(u, beta);
  a.p_noma = n.p;
  a.p_private = r.p_private;
  a.p_common = r.p_common;
  a.c = c;
  const double total = std::accumulate(r.p_private.begin(), r.p_private.end(), 0.0);
  if (r.p_common > 0.0) {
    for (int k = 0; k < u; ++k) {
      a.lambda_slack[idx(k)] = total + ch.a_rsma[idx(k)];
      a.gamma_slack[idx(k)] = r.p_common / a.lambda_slack[idx(k)];
    }
  }
  return a;
}

Best search_split(const ScenarioConfig& config, const ChannelRealization& ch, double beta, int density) {
  const int u = ch.num_users();
  const double p_max = config.p_max_w();
  const bool noma = config.mode != AccessMode::RsmaOnly;
  const bool rsma = config.mode != AccessMode::NomaOnly;

  std::vector<NomaCandidate> ns;
  if (noma) {
    ns = noma_candidates(config, ch, beta * p_max, density);
  } else {
    NomaCandidate zero;
    zero.p.assign(idx(u), 0.0);
    zero.rates.assign(idx(u), 0.0);
    ns.push_back(zero);
  }
  std::vector<RsmaCandidate> rs;
  if (rsma) {
    rs = rsma_candidates(config, ch, (1.0 - beta) * p_max, density);
  } else {
    RsmaCandidate zero;
    zero.p_private.assign(idx(u), 0.0);
    zero.rates.assign(idx(u), 0.0);
    rs.push_back(zero);
  }

  Best best;
  best.evaluated = static_cast<std::int64_t>(ns.size() + rs.size());
  if (ns.empty() || rs.empty()) return best;

  const bool any_threshold = std::any_of(config.r_th.begin(), config.r_th.end(), [](double r) { return r > 0.0; });
  if (!any_threshold) {
    // Separable: the two schemes only share beta.
    auto n_best = std::max_element(ns.begin(), ns.end(), [](const auto& a, const auto& b) { return a.score < b.score; });
    const double top_w = *std::max_element(config.weights_rsma.begin(), config.weights_rsma.end());
    auto r_value = [&](const RsmaCandidate& r) { return r.score + (rsma ? top_w * r.cap : 0.0); };
    auto r_best = std::max_element(rs.begin(), rs.end(),
                                   [&](const auto& a, const auto& b) { return r_value(a) < r_value(b); });
    RateBreakdown rates;
    rates.r_noma = n_best->rates;
    rates.r_private = r_best->rates;
    rates.r_common_cap.assign(idx(u), rsma ? r_best->cap : 0.0);
    std::vector<double> c;
    if (!assign_common_shares(config, rates, c)) return best;
    best.found = true;
    best.alloc = combine(ch, beta, *n_best, *r_best, c);
    best.value = weighted_sum_rate(config, ch, best.alloc);
    return best;
  }

  ns = pareto(std::move(ns), [](const NomaCandidate& c) { return c.rates; });
  rs = pareto(std::move(rs), [](const RsmaCandidate& c) {
    std::vector<double> key = c.rates;
    key.push_back(c.cap);
    return key;
  });
  RateBreakdown rates;
  rates.r_common_cap.assign(idx(u), 0.0);
  std::vector<double> c;
  for (const auto& n : ns) {
    for (const auto& r : rs) {
      ++best.evaluated;
      rates.r_noma = n.rates;
      rates.r_private = r.rates;
      std::fill(rates.r_common_cap.begin(), rates.r_common_cap.end(), rsma ? r.cap : 0.0);
      if (!assign_common_shares(config, rates, c)) continue;
      double value = n.score + r.score;
      for (int k = 0; k < u; ++k) value += config.weights_rsma[idx(k)] * c[idx(k)];
      if (value > best.value) {
        best.found = true;
        best.value = value;
        best.alloc = combine(ch, beta, n, r, c);
      }
    }
  }
  if (best.found) best.value = weighted_sum_rate(config, ch, best.alloc);
  return best;
}

}  // namespace

bool assign_common_shares(const ScenarioConfig& config, const RateBreakdown& rates_without_c, std::vector<double>& c) {
  const std::size_t u = rates_without_c.r_noma.size();
  const double cap = rates_without_c.common_capacity();
  c.assign(u, 0.0);
  double used = 0.0;
  for (std::size_t k = 0; k < u; ++k) {
    c[k] = std::max(0.0, config.r_th[k] - rates_without_c.r_noma[k] - rates_without_c.r_private[k]);
    used += c[k];
  }
  if (used > cap) return false;
  if (u == 0) return true;
  const auto top = std::max_element(config.weights_rsma.begin(), config.weights_rsma.end());
  c[static_cast<std::size_t>(top - config.weights_rsma.begin())] += cap - used;
  return true;
}

OracleResult grid_search(const ScenarioConfig& config, const ChannelRealization& ch, AccessMode mode, int density,
                         unsigned threads) {
  const int u = ch.num_users();
  if (u > 3) throw std::invalid_argument("grid_search: at most 3 users");
  if (density < 1) throw std::invalid_argument("grid_search: density must be positive");
  ScenarioConfig cfg = config;
  cfg.mode = mode;

  std::vector<double> betas;
  if (mode == AccessMode::NomaOnly) {
    betas = {1.0};
  } else if (mode == AccessMode::RsmaOnly) {
    betas = {0.0};
  } else {
    for (int b = 0; b <= density; ++b) betas.push_back(static_cast<double>(b) / density);
  }

  std::vector<Best> per_split(betas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < betas.size(); i = next++) per_split[i] = search_split(cfg, ch, betas[i], density);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(betas.size()));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  OracleResult out;
  for (const Best& b : per_split) {
    out.evaluated += b.evaluated;
    if (!b.found || (out.feasible && b.value <= out.objective)) continue;
    if (max_violation(check_feasibility(cfg, ch, b.alloc, 1e-9)) > 0.0) continue;
    out.feasible = true;
    out.objective = b.value;
    out.alloc = b.alloc;
  }
  if (!out.feasible) out.alloc = Allocation::zeros(u, betas.front());
  return out;
}

bool verify(const ScenarioConfig& config, const ChannelRealization& ch, const SolveReport& report,
            double oracle_value, double rel_tol) {
  if (!report.solved()) return false;
  if (max_violation(check_feasibility(config, ch, report.final_alloc, 1e-6)) > 0.0) return false;
  return weighted_sum_rate(config, ch, report.final_alloc) >= oracle_value * (1.0 - rel_tol);
}

}  // namespace rsnoma
