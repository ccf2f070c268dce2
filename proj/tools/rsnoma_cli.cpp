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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rsnoma/experiment.hpp"
#include "rsnoma/oracle.hpp"
#include "rsnoma/sca_driver.hpp"
#include "rsnoma/scenario.hpp"

namespace {

using namespace rsnoma;

ScenarioConfig base_config(const std::string& path) { return path.empty() ? default_config() : load_config(path); }

std::vector<AccessMode> parse_modes(const std::string& text) {
  if (text == "all") return {AccessMode::Hybrid, AccessMode::NomaOnly, AccessMode::RsmaOnly};
  return {parse_access_mode(text)};
}

int simulate(const std::string& config_path, const std::string& mode, const std::string& sweep_text, int draws,
             std::optional<std::uint64_t> seed, const std::string& weights, const std::string& out_path,
             unsigned threads, bool log_iterations) {
  const ScenarioConfig cfg = base_config(config_path);
  SweepOptions options;
  options.draws = draws;
  options.seed = seed.value_or(cfg.rng_seed);
  options.modes = parse_modes(mode);
  options.threads = threads;
  if (!weights.empty()) options.weights = parse_weight_scheme(weights);
  if (log_iterations) {
    options.on_iteration = [](const MetricsRecord& tag, const IterationLog& log) {
      std::fprintf(stderr, "iter draw=%d mode=%s p_max_dbm=%g r_th=%g t=%d surrogate=%.9g exact=%.9g max_violation=%.3g\n",
                   tag.draw_index, std::string(to_string(tag.mode)).c_str(), tag.p_max_dbm, tag.r_th, log.t,
                   log.surrogate, log.exact, log.max_violation);
    };
  }
  std::optional<SweepSpec> spec;
  if (!sweep_text.empty()) spec = SweepSpec::parse(sweep_text);
  const auto rows = sweep(cfg, spec, options);
  if (out_path.empty() || out_path == "-") {
    write_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    write_csv(out, rows);
  }
  return 0;
}

int summarize_csv(const std::string& in_path) {
  std::vector<MetricsRecord> rows;
  if (in_path.empty() || in_path == "-") {
    rows = read_csv(std::cin);
  } else {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot read " + in_path);
    rows = read_csv(in);
  }
  write_summary(std::cout, summarize(rows));
  return 0;
}

int verify_against_oracle(const std::string& config_path, int draws, std::optional<std::uint64_t> seed, int density,
                          double rel_tol, const std::string& mode) {
  const ScenarioConfig base = base_config(config_path);
  const std::uint64_t s = seed.value_or(base.rng_seed);
  std::printf("draw,mode,oracle_feasible,oracle_objective,sca_status,sca_objective,pass\n");
  for (AccessMode m : parse_modes(mode)) {
    int feasible = 0;
    int passed = 0;
    for (int d = 0; d < draws; ++d) {
      ScenarioConfig cfg = base;
      cfg.mode = m;
      ChannelRng rng = draw_rng(s, static_cast<std::uint64_t>(d));
      const ChannelRealization ch = draw_channels(cfg, rng);
      const OracleResult oracle = grid_search(cfg, ch, m, density);
      const SolveReport report = run(cfg, ch);
      const bool ok = oracle.feasible && verify(cfg, ch, report, oracle.objective, rel_tol);
      feasible += oracle.feasible;
      passed += ok;
      std::printf("%d,%s,%d,%.9g,%s,%.9g,%d\n", d, std::string(to_string(m)).c_str(), oracle.feasible,
                  oracle.objective, std::string(to_string(report.status)).c_str(),
                  weighted_sum_rate(cfg, ch, report.final_alloc), ok);
    }
    std::fprintf(stderr, "%s: %d of %d oracle-feasible draws within %.3g\n", std::string(to_string(m)).c_str(),
                 passed, feasible, rel_tol);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid RSMA-NOMA weighted sum-rate optimizer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode = "all";
  std::string sweep_text;
  int draws = 30;
  std::optional<std::uint64_t> seed;
  std::string weights;
  std::string out_path;
  unsigned threads = 0;
  bool log_iterations = false;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo sweep, one CSV row per run");
  sim->add_option("--config", config_path, "INI scenario file (defaults when omitted)")->check(CLI::ExistingFile);
  sim->add_option("--mode", mode, "hybrid|noma|rsma|all")->check(CLI::IsMember({"hybrid", "noma", "rsma", "all"}));
  sim->add_option("--sweep", sweep_text, "param:lo:hi:step with param rth or pmax");
  sim->add_option("--draws", draws, "channel draws per sweep point")->check(CLI::NonNegativeNumber);
  sim->add_option("--seed", seed, "RNG seed (config value when omitted)");
  sim->add_option("--weights", weights, "equal|exp_flip (config weights when omitted)")
      ->check(CLI::IsMember({"equal", "exp_flip"}));
  sim->add_option("--out", out_path, "CSV path, - for stdout");
  sim->add_option("--threads", threads, "worker threads, 0 for all cores");
  sim->add_flag("--log-iterations", log_iterations, "per-iteration log lines on stderr");

  std::string in_path;
  auto* sum = app.add_subcommand("summarize", "Per-cell means, medians and feasibility rates");
  sum->add_option("--in", in_path, "CSV from simulate, - for stdin")->required();

  std::string verify_config;
  int verify_draws = 50;
  std::optional<std::uint64_t> verify_seed;
  int density = 50;
  double rel_tol = 0.03;
  std::string verify_mode = "all";
  auto* ver = app.add_subcommand("verify", "Compare against the brute-force grid (at most 3 users)");
  ver->add_option("--config", verify_config, "INI scenario file")->check(CLI::ExistingFile);
  ver->add_option("--draws", verify_draws, "channel draws")->check(CLI::NonNegativeNumber);
  ver->add_option("--seed", verify_seed, "RNG seed");
  ver->add_option("--density", density, "grid steps per dimension")->check(CLI::PositiveNumber);
  ver->add_option("--rel-tol", rel_tol, "allowed relative shortfall");
  ver->add_option("--mode", verify_mode, "hybrid|noma|rsma|all")
      ->check(CLI::IsMember({"hybrid", "noma", "rsma", "all"}));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sim) return simulate(config_path, mode, sweep_text, draws, seed, weights, out_path, threads, log_iterations);
    if (*sum) return summarize_csv(in_path);
    if (*ver) return verify_against_oracle(verify_config, verify_draws, verify_seed, density, rel_tol, verify_mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
