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

#include "rsnoma/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <boost/algorithm/string/split.hpp>
#include <boost/algorithm/string/trim.hpp>

namespace rsnoma {

namespace {

constexpr double kFairnessFloor = 1e-9;

std::string format(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format(const std::optional<double>& v) { return v ? format(*v) : std::string(); }

double parse_double(std::string_view text, std::string_view field) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad number in " + std::string(field) + ": '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view field) {
  Int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad integer in " + std::string(field) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::optional<double> parse_optional(std::string_view text, std::string_view field) {
  if (text.empty()) return std::nullopt;
  return parse_double(text, field);
}

SolveStatus parse_status(std::string_view text) {
  for (auto s : {SolveStatus::Converged, SolveStatus::MaxIterReached, SolveStatus::InfeasibleScenario,
                 SolveStatus::SolverFailure}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown status: " + std::string(text));
}

std::string scheme_label(const ScenarioConfig& config) {
  for (auto scheme : {WeightScheme::Equal, WeightScheme::ExpFlip}) {
    const auto [wn, wr] = weight_scheme(config.num_users, scheme);
    if (wn == config.weights_noma && wr == config.weights_rsma) return std::string(to_string(scheme));
  }
  return "custom";
}

}  // namespace

std::string_view csv_header() {
  return "seed,draw_index,mode,p_max_dbm,r_th,weight_scheme,status,iterations,weighted_sum_rate,sum_rate,"
         "proportional_fairness,beta,per_user_rates";
}

std::string to_csv_row(const MetricsRecord& r) {
  std::string rates;
  for (std::size_t k = 0; k < r.per_user_rates.size(); ++k) {
    if (k > 0) rates += ';';
    rates += format(r.per_user_rates[k]);
  }
  std::string row;
  row += std::to_string(r.seed) + ',' + std::to_string(r.draw_index) + ',' + std::string(to_string(r.mode)) + ',';
  row += format(r.p_max_dbm) + ',' + format(r.r_th) + ',' + r.weight_scheme + ',';
  row += std::string(to_string(r.status)) + ',' + std::to_string(r.iterations) + ',';
  row += format(r.weighted_sum_rate) + ',' + format(r.sum_rate) + ',' + format(r.proportional_fairness) + ',';
  row += format(r.beta) + ',' + rates;
  return row;
}

MetricsRecord parse_csv_row(std::string_view line) {
  std::vector<std::string> f;
  boost::split(f, line, [](char c) { return c == ','; });
  if (f.size() != 13) throw std::invalid_argument("expected 13 CSV fields, got " + std::to_string(f.size()));
  MetricsRecord r;
  r.seed = parse_int<std::uint64_t>(f[0], "seed");
  r.draw_index = parse_int<int>(f[1], "draw_index");
  r.mode = parse_access_mode(f[2]);
  r.p_max_dbm = parse_double(f[3], "p_max_dbm");
  r.r_th = parse_double(f[4], "r_th");
  r.weight_scheme = f[5];
  r.status = parse_status(f[6]);
  r.iterations = parse_int<int>(f[7], "iterations");
  r.weighted_sum_rate = parse_optional(f[8], "weighted_sum_rate");
  r.sum_rate = parse_optional(f[9], "sum_rate");
  r.proportional_fairness = parse_optional(f[10], "proportional_fairness");
  r.beta = parse_optional(f[11], "beta");
  if (!f[12].empty()) {
    std::vector<std::string> rates;
    boost::split(rates, f[12], [](char c) { return c == ';'; });
    for (const auto& v : rates) r.per_user_rates.push_back(parse_double(v, "per_user_rates"));
  }
  return r;
}

void write_csv(std::ostream& out, const std::vector<MetricsRecord>& records) {
  out << csv_header() << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

std::vector<MetricsRecord> read_csv(std::istream& in) {
  std::vector<MetricsRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    boost::algorithm::trim(line);
    if (line.empty() || line == csv_header()) continue;
    out.push_back(parse_csv_row(line));
  }
  return out;
}

MetricsRecord make_record(const ScenarioConfig& config, const ChannelRealization& ch, const SolveReport& report,
                          int draw_index) {
  MetricsRecord r;
  r.seed = config.rng_seed;
  r.draw_index = draw_index;
  r.mode = config.mode;
  r.p_max_dbm = config.p_max_dbm;
  r.r_th = config.r_th.empty() ? 0.0 : *std::max_element(config.r_th.begin(), config.r_th.end());
  r.weight_scheme = scheme_label(config);
  r.status = report.status;
  r.iterations = report.iterations;
  if (!r.feasible()) return r;
  r.weighted_sum_rate = weighted_sum_rate(config, ch, report.final_alloc);
  r.sum_rate = report.rates.sum_rate();
  r.beta = report.final_alloc.beta;
  r.per_user_rates = report.rates.r_total;
  if (std::all_of(r.per_user_rates.begin(), r.per_user_rates.end(), [](double v) { return v > kFairnessFloor; })) {
    r.proportional_fairness = std::accumulate(r.per_user_rates.begin(), r.per_user_rates.end(), 0.0,
                                              [](double acc, double v) { return acc + std::log(v); });
  }
  return r;
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  // Index-based so round-off in the step never drops the end point.
  const long count = std::lround(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

SweepSpec SweepSpec::parse(std::string_view text) {
  std::vector<std::string> parts;
  boost::split(parts, text, [](char c) { return c == ':'; });
  if (parts.size() != 4) throw std::invalid_argument("sweep must be param:lo:hi:step");
  SweepSpec s;
  if (parts[0] == "rth") {
    s.param = Param::RTh;
  } else if (parts[0] == "pmax") {
    s.param = Param::PMax;
  } else {
    throw std::invalid_argument("sweep param must be rth or pmax, got " + parts[0]);
  }
  s.lo = parse_double(parts[1], "sweep lo");
  s.hi = parse_double(parts[2], "sweep hi");
  s.step = parse_double(parts[3], "sweep step");
  if (!(s.step > 0.0) || s.hi < s.lo) throw std::invalid_argument("sweep needs lo <= hi and step > 0");
  return s;
}

std::vector<MetricsRecord> sweep(const ScenarioConfig& base, const std::optional<SweepSpec>& spec,
                                 const SweepOptions& options) {
  if (options.draws < 0) throw std::invalid_argument("draws must be >= 0");
  ScenarioConfig cfg = base;
  cfg.rng_seed = options.seed;
  if (options.weights) {
    std::tie(cfg.weights_noma, cfg.weights_rsma) = weight_scheme(cfg.num_users, *options.weights);
  }
  std::vector<ScenarioConfig> points;
  if (spec) {
    for (double v : spec->values()) {
      ScenarioConfig p = cfg;
      if (spec->param == SweepSpec::Param::RTh) {
        p.r_th.assign(static_cast<std::size_t>(p.num_users), v);
      } else {
        p.p_max_dbm = v;
      }
      p.validate();
      points.push_back(std::move(p));
    }
  } else {
    cfg.validate();
    points.push_back(cfg);
  }

  const std::size_t draws = static_cast<std::size_t>(options.draws);
  const std::size_t modes = options.modes.size();
  std::vector<MetricsRecord> rows(points.size() * draws * modes);
  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto task = [&](std::size_t cell) {
    const std::size_t point = cell / draws;
    const int draw = static_cast<int>(cell % draws);
    // The geometry and noise do not depend on the sweep value, so draws pair up.
    ChannelRng rng = draw_rng(cfg.rng_seed, static_cast<std::uint64_t>(draw));
    const ChannelRealization ch = draw_channels(points[point], rng);
    for (std::size_t m = 0; m < modes; ++m) {
      ScenarioConfig run_cfg = points[point];
      run_cfg.mode = options.modes[m];
      MetricsRecord tag;
      tag.seed = run_cfg.rng_seed;
      tag.draw_index = draw;
      tag.mode = run_cfg.mode;
      tag.p_max_dbm = run_cfg.p_max_dbm;
      tag.r_th = run_cfg.r_th.empty() ? 0.0 : *std::max_element(run_cfg.r_th.begin(), run_cfg.r_th.end());
      RunOptions run_options = options.run;
      if (options.on_iteration) {
        run_options.on_iteration = [&](const IterationLog& log) {
          std::lock_guard lock(log_mutex);
          options.on_iteration(tag, log);
        };
      }
      const SolveReport report = run(run_cfg, ch, run_options);
      rows[cell * modes + m] = make_record(run_cfg, ch, report, draw);
    }
  };
  auto worker = [&] {
    for (std::size_t cell = next++; cell < points.size() * draws; cell = next++) {
      try {
        task(cell);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::optional<double> mean(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records) {
  using Key = std::tuple<std::string, int, double, double>;
  struct Cell {
    SummaryRow row;
    std::vector<double> wsr, sum, fairness, iterations;
  };
  std::map<Key, Cell> cells;
  for (const auto& r : records) {
    Cell& c = cells[{r.weight_scheme, static_cast<int>(r.mode), r.p_max_dbm, r.r_th}];
    c.row.weight_scheme = r.weight_scheme;
    c.row.mode = r.mode;
    c.row.p_max_dbm = r.p_max_dbm;
    c.row.r_th = r.r_th;
    ++c.row.runs;
    if (r.status == SolveStatus::SolverFailure) ++c.row.failures;
    if (!r.feasible()) continue;
    ++c.row.feasible;
    if (r.weighted_sum_rate) c.wsr.push_back(*r.weighted_sum_rate);
    if (r.sum_rate) c.sum.push_back(*r.sum_rate);
    if (r.proportional_fairness) c.fairness.push_back(*r.proportional_fairness);
    c.iterations.push_back(r.iterations);
  }
  std::vector<SummaryRow> out;
  for (auto& [key, c] : cells) {
    SummaryRow row = c.row;
    row.feasibility_rate = static_cast<double>(row.feasible) / row.runs;
    row.mean_weighted_sum_rate = mean(c.wsr);
    row.median_weighted_sum_rate = median(c.wsr);
    row.mean_sum_rate = mean(c.sum);
    row.median_sum_rate = median(c.sum);
    row.median_proportional_fairness = median(c.fairness);
    row.median_iterations = median(c.iterations);
    out.push_back(std::move(row));
  }
  return out;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "weight_scheme,mode,p_max_dbm,r_th,runs,feasible,failures,feasibility_rate,mean_weighted_sum_rate,"
         "median_weighted_sum_rate,mean_sum_rate,median_sum_rate,median_proportional_fairness,median_iterations\n";
  for (const auto& r : rows) {
    out << r.weight_scheme << ',' << to_string(r.mode) << ',' << format(r.p_max_dbm) << ',' << format(r.r_th) << ','
        << r.runs << ',' << r.feasible << ',' << r.failures << ',' << format(r.feasibility_rate) << ','
        << format(r.mean_weighted_sum_rate) << ',' << format(r.median_weighted_sum_rate) << ','
        << format(r.mean_sum_rate) << ',' << format(r.median_sum_rate) << ','
        << format(r.median_proportional_fairness) << ',' << format(r.median_iterations) << '\n';
  }
}

}  // namespace rsnoma
