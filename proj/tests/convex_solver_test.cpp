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

#include "rsnoma/convex_solver.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "program_checks.hpp"

namespace rsnoma {
namespace {

constexpr double kTol = 1e-7;

void expect_certified(const ConvexProgram& prog, const SolverOutcome& out) {
  ASSERT_EQ(out.status, SolverStatus::Optimal);
  const auto a = testing::audit(prog, out);
  EXPECT_LE(a.max_violation, 1e-7);
  EXPECT_LE(a.kkt_residual(), 1e-6);
  EXPECT_LE(out.kkt_residual, kTol);
}

TEST(ConvexSolver, LogHitsUpperBound) {
  ConvexProgram prog;
  const int x = prog.add_variable("x");
  prog.objective_logs.push_back({1.0, AffineForm{}.add(x, 1.0)});
  prog.add_linear_row(AffineForm{}.add(x, 1.0).add_constant(-2.0), "x<=2");
  const auto out = solve(prog, kTol, 500);
  expect_certified(prog, out);
  EXPECT_NEAR(out.x[0], 2.0, 1e-6);
  EXPECT_NEAR(out.objective_value, 1.0, 1e-6);
}

TEST(ConvexSolver, SymmetricTwoLogs) {
  ConvexProgram prog;
  const int x = prog.add_variable("x");
  const int y = prog.add_variable("y");
  prog.objective_logs.push_back({1.0, AffineForm{}.add(x, 1.0).add_constant(1.0)});
  prog.objective_logs.push_back({1.0, AffineForm{}.add(y, 1.0).add_constant(1.0)});
  prog.add_linear_row(AffineForm{}.add(x, 1.0).add(y, 1.0).add_constant(-2.0), "budget");
  const auto out = solve(prog, kTol, 500);
  expect_certified(prog, out);
  EXPECT_NEAR(out.x[0], 1.0, 1e-5);
  EXPECT_NEAR(out.x[1], 1.0, 1e-5);
  EXPECT_NEAR(out.objective_value, 2.0, 1e-6);
}

TEST(ConvexSolver, QuadraticBoundary) {
  // maximize x  s.t. 0.25 (x + 0)^2 <= 1
  ConvexProgram prog;
  const int x = prog.add_variable("x");
  prog.objective_affine.add(x, 1.0);
  QuadRow row;
  row.square.add(x, 1.0);
  row.rhs.add_constant(1.0);
  prog.quad_rows.push_back(row);
  const auto out = solve(prog, kTol, 500);
  expect_certified(prog, out);
  EXPECT_NEAR(out.x[0], 2.0, 1e-6);
}

TEST(ConvexSolver, LogRowConstraint) {
  // maximize -x  s.t. 3 <= log2(1 + x), i.e. x >= 7.
  ConvexProgram prog;
  const int x = prog.add_variable("x");
  prog.objective_affine.add(x, -1.0);
  LogRow row;
  row.lhs.add_constant(3.0);
  row.logs.push_back({1.0, AffineForm{}.add(x, 1.0).add_constant(1.0)});
  prog.log_rows.push_back(row);
  const auto out = solve(prog, kTol, 500);
  expect_certified(prog, out);
  EXPECT_NEAR(out.x[0], 7.0, 1e-5);
}

TEST(ConvexSolver, ReportsInfeasible) {
  ConvexProgram prog;
  const int x = prog.add_variable("x");
  prog.objective_affine.add(x, 1.0);
  prog.add_linear_row(AffineForm{}.add(x, 1.0).add_constant(1.0), "x<=-1");
  const auto out = solve(prog, kTol, 500);
  EXPECT_EQ(out.status, SolverStatus::Infeasible);
  EXPECT_TRUE(out.x.empty());
}

TEST(ConvexSolver, ReportsUnbounded) {
  ConvexProgram prog;
  const int x = prog.add_variable("x");
  prog.objective_affine.add(x, 1.0);
  const auto out = solve(prog, kTol, 2000);
  EXPECT_EQ(out.status, SolverStatus::Unbounded);
}

TEST(ConvexSolver, RecoversLogDomainFromBadStart) {
  // Free variable, log argument x - 5 negative at the start.
  ConvexProgram prog;
  const int x = prog.add_variable("x", -kInf, 10.0);
  prog.objective_logs.push_back({1.0, AffineForm{}.add(x, 1.0).add_constant(-5.0)});
  const std::vector<double> start{0.0};
  const auto out = solve(prog, kTol, 500, start);
  expect_certified(prog, out);
  EXPECT_NEAR(out.x[0], 10.0, 1e-5);
}

TEST(ConvexSolver, Deterministic) {
  ConvexProgram prog;
  const int x = prog.add_variable("x");
  const int y = prog.add_variable("y");
  prog.objective_logs.push_back({2.0, AffineForm{}.add(x, 1.0).add_constant(0.1)});
  prog.objective_logs.push_back({1.0, AffineForm{}.add(y, 1.0).add_constant(0.3)});
  prog.add_linear_row(AffineForm{}.add(x, 1.0).add(y, 2.0).add_constant(-3.0), "budget");
  const auto a = solve(prog, kTol, 500);
  const auto b = solve(prog, kTol, 500);
  ASSERT_EQ(a.status, SolverStatus::Optimal);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.objective_value, b.objective_value);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(ConvexSolver, RejectsNegativeLogWeight) {
  ConvexProgram prog;
  const int x = prog.add_variable("x");
  prog.objective_logs.push_back({-1.0, AffineForm{}.add(x, 1.0)});
  EXPECT_THROW(solve(prog, kTol, 10), std::invalid_argument);
}

// Weighted water-filling has a closed form:  maximize sum w_i log2(x_i + n_i)
// s.t. sum x_i <= P gives x_i = max(0, w_i * nu - n_i) with nu set by the budget.
std::vector<double> waterfill(const std::vector<double>& w, const std::vector<double>& noise, double budget) {
  double lo = 0.0;
  double hi = 1e6;
  for (int it = 0; it < 200; ++it) {
    const double nu = 0.5 * (lo + hi);
    double used = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) used += std::max(0.0, w[i] * nu - noise[i]);
    (used > budget ? hi : lo) = nu;
  }
  std::vector<double> x(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) x[i] = std::max(0.0, w[i] * lo - noise[i]);
  return x;
}

TEST(ConvexSolver, MatchesWaterfillingOnRandomInstances) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> weight(0.2, 3.0);
  std::uniform_real_distribution<double> noise_exp(-9.0, 0.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + trial % 5;
    std::vector<double> w(k), noise(k);
    ConvexProgram prog;
    AffineForm budget;
    for (int i = 0; i < k; ++i) {
      w[i] = weight(rng);
      noise[i] = std::pow(10.0, noise_exp(rng));
      const int v = prog.add_variable("x" + std::to_string(i));
      prog.objective_logs.push_back({w[i], AffineForm{}.add(v, 1.0).add_constant(noise[i])});
      budget.add(v, 1.0);
    }
    budget.add_constant(-3.16);
    prog.add_linear_row(budget, "budget");
    const auto out = solve(prog, kTol, 2000);
    expect_certified(prog, out);
    const auto ref = waterfill(w, noise, 3.16);
    EXPECT_NEAR(out.objective_value, prog.objective(ref), 1e-6) << "trial " << trial;
  }
}

TEST(ConvexSolver, ScalingWeightsKeepsArgmax) {
  auto build = [](double alpha) {
    ConvexProgram prog;
    const int x = prog.add_variable("x");
    const int y = prog.add_variable("y");
    prog.objective_logs.push_back({1.5 * alpha, AffineForm{}.add(x, 1.0).add_constant(0.01)});
    prog.objective_logs.push_back({0.5 * alpha, AffineForm{}.add(y, 1.0).add_constant(0.2)});
    prog.objective_affine.add(y, 0.1 * alpha);
    prog.add_linear_row(AffineForm{}.add(x, 1.0).add(y, 1.0).add_constant(-1.0), "budget");
    return prog;
  };
  const auto base = solve(build(1.0), kTol, 1000);
  ASSERT_EQ(base.status, SolverStatus::Optimal);
  for (double alpha : {0.1, 3.0, 250.0}) {
    const auto scaled = solve(build(alpha), kTol, 1000);
    ASSERT_EQ(scaled.status, SolverStatus::Optimal);
    EXPECT_NEAR(scaled.x[0], base.x[0], 1e-5);
    EXPECT_NEAR(scaled.x[1], base.x[1], 1e-5);
  }
}

TEST(ConvexSolver, DumpListsEveryRowFamily) {
  ConvexProgram prog;
  const int x = prog.add_variable("x");
  prog.objective_affine.add(x, 1.0);
  prog.add_linear_row(AffineForm{}.add(x, 1.0), "lin");
  prog.log_rows.push_back({AffineForm{}.add(x, 1.0), {{1.0, AffineForm{}.add_constant(2.0)}}, {}, "logrow"});
  prog.quad_rows.push_back({AffineForm{}.add(x, 1.0), {}, {}, "quadrow"});
  std::ostringstream os;
  write_program(os, prog);
  const std::string text = os.str();
  EXPECT_NE(text.find("variables 1"), std::string::npos);
  EXPECT_NE(text.find("lin"), std::string::npos);
  EXPECT_NE(text.find("logrow"), std::string::npos);
  EXPECT_NE(text.find("quadrow"), std::string::npos);
}

}  // namespace
}  // namespace rsnoma
