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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rsnoma {

std::string_view to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::Optimal: return "Optimal";
    case SolverStatus::Infeasible: return "Infeasible";
    case SolverStatus::Unbounded: return "Unbounded";
    case SolverStatus::MaxIterations: return "MaxIterations";
    case SolverStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kLn2 = std::numbers::ln2;
constexpr double kInfeasibleSlack = 1e-7;
// Starting slack below this makes the barrier gradient round-off noise.
constexpr double kInteriorMargin = 1e-9;
constexpr double kBarrierGrowth = 20.0;
constexpr double kNewtonTol = 1e-18;
constexpr double kPureNewton = 0.05;
// Quadratic convergence needs far fewer; more means round-off cycling.
constexpr int kMaxQuadraticSteps = 12;
// Steps per centering stage before the stage counts as stalled at round-off.
constexpr int kMaxCenteringSteps = 100;
constexpr double kDivergence = 1e12;
// Duality gap target relative to the KKT tolerance.
constexpr double kGapFraction = 1e-2;
constexpr int kRefinementSteps = 2;

struct DenseAffine {
  VectorXd a;
  double b = 0.0;
  double eval(const VectorXd& x) const { return a.dot(x) + b; }
};

DenseAffine densify(const AffineForm& form, int n) {
  DenseAffine out{VectorXd::Zero(n), form.constant};
  for (const auto& [index, coef] : form.terms) out.a(index) += coef;
  return out;
}

struct DenseLog {
  double w;
  DenseAffine arg;
};

// g(x) = affine(x) - sum_m w_m log2(arg_m(x)) + 0.25 * square(x)^2, convex.
struct DenseRow {
  DenseAffine affine;
  std::vector<DenseLog> logs;
  bool has_square = false;
  DenseAffine square;

  double value(const VectorXd& x) const {
    double g = affine.eval(x);
    for (const auto& term : logs) {
      const double arg = term.arg.eval(x);
      if (!(arg > 0.0)) return kInf;
      g -= term.w * std::log2(arg);
    }
    if (has_square) {
      const double s = square.eval(x);
      g += 0.25 * s * s;
    }
    return g;
  }

  // g(x + dx) - g(x) without forming either value; +inf outside the domain.
  double change(const VectorXd& x, const VectorXd& dx) const {
    double d = affine.a.dot(dx);
    for (const auto& term : logs) {
      const double arg = term.arg.eval(x);
      const double rel = term.arg.a.dot(dx) / arg;
      if (!(rel > -1.0)) return kInf;
      d -= term.w * std::log1p(rel) / kLn2;
    }
    if (has_square) {
      const double ds = square.a.dot(dx);
      d += 0.25 * ds * (2.0 * square.eval(x) + ds);
    }
    return d;
  }

  // Gradient into `grad`; adds hess_scale * Hessian of g into `hess`.
  void derivatives(const VectorXd& x, VectorXd& grad, MatrixXd& hess, double hess_scale) const {
    grad = affine.a;
    for (const auto& term : logs) {
      const double arg = term.arg.eval(x);
      grad -= (term.w / (arg * kLn2)) * term.arg.a;
      hess.noalias() += (hess_scale * term.w / (arg * arg * kLn2)) * term.arg.a * term.arg.a.transpose();
    }
    if (has_square) {
      const double s = square.eval(x);
      grad += (0.5 * s) * square.a;
      hess.noalias() += (0.5 * hess_scale) * square.a * square.a.transpose();
    }
  }
};

struct Compiled {
  int n = 0;
  VectorXd lower;
  VectorXd upper;
  DenseAffine objective_affine;
  std::vector<DenseLog> objective_logs;
  std::vector<DenseRow> rows;
  // Every log argument appearing anywhere; must stay positive.
  std::vector<DenseAffine> domain;

  explicit Compiled(const ConvexProgram& prog) : n(prog.n) {
    lower = Eigen::Map<const VectorXd>(prog.lower.data(), n);
    upper = Eigen::Map<const VectorXd>(prog.upper.data(), n);
    objective_affine = densify(prog.objective_affine, n);
    auto dense_logs = [&](const std::vector<LogTerm>& logs) {
      std::vector<DenseLog> out;
      for (const auto& term : logs) {
        out.push_back({term.weight, densify(term.arg, n)});
        domain.push_back(out.back().arg);
      }
      return out;
    };
    objective_logs = dense_logs(prog.objective_logs);
    for (const auto& row : prog.linear_rows) rows.push_back({densify(row, n), {}, false, {}});
    for (const auto& row : prog.log_rows) {
      DenseRow r{densify(row.lhs, n), dense_logs(row.logs), false, {}};
      DenseAffine rhs = densify(row.rhs, n);
      r.affine.a -= rhs.a;
      r.affine.b -= rhs.b;
      rows.push_back(std::move(r));
    }
    for (const auto& row : prog.quad_rows) {
      DenseRow r{densify(row.lhs, n), {}, true, densify(row.square, n)};
      DenseAffine rhs = densify(row.rhs, n);
      r.affine.a -= rhs.a;
      r.affine.b -= rhs.b;
      rows.push_back(std::move(r));
    }
  }

  double objective(const VectorXd& x) const {
    double f = objective_affine.eval(x);
    for (const auto& term : objective_logs) f += term.w * std::log2(term.arg.eval(x));
    return f;
  }

  void objective_gradient(const VectorXd& x, VectorXd& grad) const {
    grad = objective_affine.a;
    for (const auto& term : objective_logs) {
      grad += (term.w / (term.arg.eval(x) * kLn2)) * term.arg.a;
    }
  }

  bool in_domain(const VectorXd& x) const {
    for (int i = 0; i < n; ++i) {
      if (!(x(i) > lower(i) && x(i) < upper(i))) return false;
    }
    return std::all_of(domain.begin(), domain.end(),
                       [&](const DenseAffine& arg) { return arg.eval(x) > 0.0; });
  }

  int num_finite_bounds() const {
    int m = 0;
    for (int i = 0; i < n; ++i) m += std::isfinite(lower(i)) + std::isfinite(upper(i));
    return m;
  }
};

// Log barrier for either phase.  In phase 1 the iterate is z = (x, s) and the
// rows read g_i(x) <= s with objective s; in phase 2 z = x with objective
// -f(x).  `rows` selects which DenseRows take part.
class Barrier {
 public:
  Barrier(const Compiled& prog, const std::vector<const DenseRow*>& rows, bool phase1)
      : prog_(prog), rows_(rows), phase1_(phase1), dim_(prog.n + (phase1 ? 1 : 0)) {}

  int dim() const { return dim_; }
  int num_constraints() const { return static_cast<int>(rows_.size()) + prog_.num_finite_bounds(); }

  // +inf outside the domain.
  double value(const VectorXd& z, double t) const {
    const VectorXd x = z.head(prog_.n);
    if (!prog_.in_domain(x)) return kInf;
    const double s = phase1_ ? z(prog_.n) : 0.0;
    double phi = phase1_ ? t * s : -t * prog_.objective(x);
    for (const DenseRow* row : rows_) {
      const double slack = s - row->value(x);
      if (!(slack > 0.0)) return kInf;
      phi -= std::log(slack);
    }
    phi += bound_barrier(x);
    return phi;
  }

  // value(z + dz, t) - value(z, t) for an interior z, summed from relative
  // changes so that it stays accurate when t makes the value itself huge.
  double change(const VectorXd& z, const VectorXd& dz, double t) const {
    const int n = prog_.n;
    const VectorXd x = z.head(n);
    const VectorXd dx = dz.head(n);
    if (!prog_.in_domain(x + dx)) return kInf;
    const double s = phase1_ ? z(n) : 0.0;
    const double ds = phase1_ ? dz(n) : 0.0;
    double d = 0.0;
    if (phase1_) {
      d = t * ds;
    } else {
      double df = prog_.objective_affine.a.dot(dx);
      for (const auto& term : prog_.objective_logs) {
        df += term.w * std::log1p(term.arg.a.dot(dx) / term.arg.eval(x)) / kLn2;
      }
      d = -t * df;
    }
    const VectorXd x_new = x + dx;
    for (const DenseRow* row : rows_) {
      const double slack = s - row->value(x);
      const double rel = (ds - row->change(x, dx)) / slack;
      // The derivatives read the slack directly, so it must stay positive too.
      if (!(rel > -1.0) || !(s + ds - row->value(x_new) > 0.0)) return kInf;
      d -= std::log1p(rel);
    }
    for (int i = 0; i < n; ++i) {
      if (std::isfinite(prog_.lower(i))) d -= std::log1p(dx(i) / (x(i) - prog_.lower(i)));
      if (std::isfinite(prog_.upper(i))) d -= std::log1p(-dx(i) / (prog_.upper(i) - x(i)));
    }
    return d;
  }

  void derivatives(const VectorXd& z, double t, VectorXd& grad, MatrixXd& hess) const {
    const int n = prog_.n;
    const VectorXd x = z.head(n);
    const double s = phase1_ ? z(n) : 0.0;
    grad = VectorXd::Zero(dim_);
    hess = MatrixXd::Zero(dim_, dim_);
    if (phase1_) {
      grad(n) = t;
    } else {
      VectorXd g0;
      prog_.objective_gradient(x, g0);
      grad.head(n) = -t * g0;
      for (const auto& term : prog_.objective_logs) {
        const double arg = term.arg.eval(x);
        hess.topLeftCorner(n, n).noalias() +=
            (t * term.w / (arg * arg * kLn2)) * term.arg.a * term.arg.a.transpose();
      }
    }
    VectorXd row_grad(n);
    MatrixXd row_hess = MatrixXd::Zero(n, n);
    VectorXd full(dim_);
    for (const DenseRow* row : rows_) {
      const double slack = s - row->value(x);
      row_hess.setZero();
      row->derivatives(x, row_grad, row_hess, 1.0);
      full.head(n) = row_grad;
      if (phase1_) full(n) = -1.0;
      grad += full / slack;
      hess.noalias() += full * full.transpose() / (slack * slack);
      hess.topLeftCorner(n, n) += row_hess / slack;
    }
    for (int i = 0; i < n; ++i) {
      if (std::isfinite(prog_.lower(i))) {
        const double d = x(i) - prog_.lower(i);
        grad(i) -= 1.0 / d;
        hess(i, i) += 1.0 / (d * d);
      }
      if (std::isfinite(prog_.upper(i))) {
        const double d = prog_.upper(i) - x(i);
        grad(i) += 1.0 / d;
        hess(i, i) += 1.0 / (d * d);
      }
    }
  }

 private:
  double bound_barrier(const VectorXd& x) const {
    double phi = 0.0;
    for (int i = 0; i < prog_.n; ++i) {
      if (std::isfinite(prog_.lower(i))) phi -= std::log(x(i) - prog_.lower(i));
      if (std::isfinite(prog_.upper(i))) phi -= std::log(prog_.upper(i) - x(i));
    }
    return phi;
  }

  const Compiled& prog_;
  std::vector<const DenseRow*> rows_;
  bool phase1_;
  int dim_;
};

enum class StepResult { Centered, Stalled, Failed };

// Symmetric-diagonal scaled Newton direction; false when the factorization
// breaks down.
bool newton_direction(const MatrixXd& hess, const VectorXd& grad, VectorXd& step) {
  VectorXd d = hess.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  MatrixXd scaled = d.asDiagonal() * hess * d.asDiagonal();
  Eigen::LLT<MatrixXd> llt(scaled);
  for (double ridge = 1e-10; llt.info() != Eigen::Success; ridge *= 100.0) {
    if (ridge > 1e-6) return false;
    scaled.diagonal().array() += ridge;
    llt.compute(scaled);
  }
  step = -(d.asDiagonal() * llt.solve(d.asDiagonal() * grad));
  // Iterative refinement, kept only while the scaled residual shrinks.
  VectorXd residual = d.asDiagonal() * (hess * step + grad);
  for (int i = 0; i < kRefinementSteps; ++i) {
    const VectorXd refined = step - d.asDiagonal() * llt.solve(residual);
    const VectorXd next = d.asDiagonal() * (hess * refined + grad);
    if (!refined.allFinite() || !(next.norm() < residual.norm())) break;
    step = refined;
    residual = next;
  }
  return step.allFinite();
}

struct Centering {
  StepResult result;
  int steps;
};

// Damped Newton on the barrier at fixed t.  `stop_early` is polled after every
// accepted step.
template <typename Stop>
Centering center(const Barrier& barrier, VectorXd& z, double t, int budget, Stop&& stop_early) {
  VectorXd grad;
  MatrixXd hess;
  VectorXd step;
  int steps = 0;
  int stagnant = 0;
  int quadratic_steps = 0;
  double previous = kInf;
  while (steps < budget) {
    if (steps >= kMaxCenteringSteps) return {StepResult::Stalled, steps};
    barrier.derivatives(z, t, grad, hess);
    if (!newton_direction(hess, grad, step)) {
      return {previous < 1e-6 ? StepResult::Stalled : StepResult::Failed, steps};
    }
    const double decrement2 = -grad.dot(step);
    if (!(decrement2 >= 0.0)) return {previous < 1e-6 ? StepResult::Stalled : StepResult::Failed, steps};
    if (0.5 * decrement2 <= kNewtonTol) return {StepResult::Centered, steps};
    // Quadratic convergence has stopped: round-off floor.
    stagnant = (decrement2 < kPureNewton && decrement2 > 0.25 * previous) ? stagnant + 1 : 0;
    if (decrement2 < kPureNewton) ++quadratic_steps;
    if (stagnant >= 3 || (decrement2 < 1e-8 && stagnant > 0) || quadratic_steps > kMaxQuadraticSteps) {
      return {StepResult::Stalled, steps};
    }
    previous = decrement2;
    double alpha = 1.0;
    if (decrement2 < kPureNewton && std::isfinite(barrier.change(z, step, t))) {
      // Inside the quadratic convergence region the full step is taken.
    } else {
      while (alpha > 1e-16 && barrier.change(z, alpha * step, t) > -0.25 * alpha * decrement2) alpha *= 0.5;
    }
    ++steps;
    if (alpha <= 1e-16) return {decrement2 < 1e-6 ? StepResult::Stalled : StepResult::Failed, steps};
    const VectorXd moved = z + alpha * step;
    // A step below the ulp of every coordinate: nothing left to gain.
    if (moved == z) return {StepResult::Stalled, steps};
    z = moved;
    if (stop_early(z)) return {StepResult::Centered, steps};
    if (z.lpNorm<Eigen::Infinity>() > kDivergence) return {StepResult::Failed, steps};
  }
  return {StepResult::Failed, steps};
}

VectorXd initial_point(const Compiled& prog, std::span<const double> start) {
  VectorXd x(prog.n);
  for (int i = 0; i < prog.n; ++i) {
    const double lo = prog.lower(i);
    const double hi = prog.upper(i);
    double v;
    if (std::isfinite(lo) && std::isfinite(hi)) {
      v = 0.5 * (lo + hi);
    } else if (std::isfinite(lo)) {
      v = lo + 1.0;
    } else if (std::isfinite(hi)) {
      v = hi - 1.0;
    } else {
      v = 0.0;
    }
    if (!start.empty()) {
      v = start[static_cast<std::size_t>(i)];
      const double shrink_lo = std::isfinite(lo) ? lo + 1e-6 * std::max(1.0, std::abs(lo)) : -kInf;
      const double shrink_hi = std::isfinite(hi) ? hi - 1e-6 * std::max(1.0, std::abs(hi)) : kInf;
      if (shrink_lo < shrink_hi) {
        v = std::clamp(v, shrink_lo, shrink_hi);
      } else {
        v = 0.5 * (lo + hi);
      }
    }
    x(i) = v;
  }
  return x;
}

enum class PhaseOne { Feasible, Infeasible, Failed };

// Drives max_i g_i(x) below zero for the given rows.
PhaseOne find_interior(const Compiled& prog, const std::vector<const DenseRow*>& rows, VectorXd& x,
                       int& iterations, int max_iter) {
  double worst = -kInf;
  for (const DenseRow* row : rows) worst = std::max(worst, row->value(x));
  if (worst < -kInteriorMargin) return PhaseOne::Feasible;
  if (!std::isfinite(worst)) return PhaseOne::Failed;

  Barrier barrier(prog, rows, true);
  VectorXd z(barrier.dim());
  z.head(prog.n) = x;
  z(prog.n) = worst + std::max(1.0, std::abs(worst));
  const double m = barrier.num_constraints();
  double t = 1.0;
  auto feasible = [n = prog.n](const VectorXd& v) { return v(n) < -kInteriorMargin; };
  while (iterations < max_iter) {
    const Centering c = center(barrier, z, t, max_iter - iterations, feasible);
    iterations += c.steps;
    if (c.result == StepResult::Failed) return PhaseOne::Failed;
    if (z(prog.n) < 0.0) {
      x = z.head(prog.n);
      return PhaseOne::Feasible;
    }
    // Lower bound on min s is s - m/t.
    if (z(prog.n) - m / t > kInfeasibleSlack) return PhaseOne::Infeasible;
    if (m / t < 1e-10) return PhaseOne::Infeasible;
    t *= kBarrierGrowth;
  }
  return PhaseOne::Failed;
}

struct Kkt {
  double residual;
  std::vector<double> row_duals;
  std::vector<double> lower_duals;
  std::vector<double> upper_duals;
};

// Multipliers from the linearized centrality condition
//   t * mu_i = (1 / s_i) * (1 + grad g_i . dx / s_i),
// where dx is the Newton step at x.  Using the step removes the first-order
// effect of round-off in tiny slacks s_i that the plain 1 / (t s_i) estimate
// amplifies.
Kkt kkt_at(const Compiled& prog, const Barrier& barrier, const VectorXd& x, double t) {
  const int n = prog.n;
  Kkt k;
  VectorXd grad;
  MatrixXd hess;
  VectorXd dx = VectorXd::Zero(n);
  barrier.derivatives(x, t, grad, hess);
  if (!newton_direction(hess, grad, dx)) dx.setZero();

  VectorXd grad_obj;
  prog.objective_gradient(x, grad_obj);
  VectorXd lagrangian = -grad_obj;
  double complementarity = 0.0;
  VectorXd row_grad(n);
  MatrixXd scratch = MatrixXd::Zero(n, n);
  auto dual = [t](double slack, double directional) {
    return std::max(0.0, (1.0 + directional / slack) / (t * slack));
  };
  for (const auto& row : prog.rows) {
    const double slack = -row.value(x);
    row.derivatives(x, row_grad, scratch, 0.0);
    const double mu = dual(slack, row_grad.dot(dx));
    lagrangian += mu * row_grad;
    complementarity += mu * slack;
    k.row_duals.push_back(mu);
  }
  for (int i = 0; i < n; ++i) {
    double lo_dual = 0.0;
    double hi_dual = 0.0;
    if (std::isfinite(prog.lower(i))) {
      const double slack = x(i) - prog.lower(i);
      lo_dual = dual(slack, -dx(i));
      complementarity += lo_dual * slack;
    }
    if (std::isfinite(prog.upper(i))) {
      const double slack = prog.upper(i) - x(i);
      hi_dual = dual(slack, dx(i));
      complementarity += hi_dual * slack;
    }
    lagrangian(i) += hi_dual - lo_dual;
    k.lower_duals.push_back(lo_dual);
    k.upper_duals.push_back(hi_dual);
  }
  const double scale = 1.0 + (n > 0 ? grad_obj.lpNorm<Eigen::Infinity>() : 0.0);
  const double stationarity = n > 0 ? lagrangian.lpNorm<Eigen::Infinity>() / scale : 0.0;
  k.residual = std::max(stationarity, complementarity);
  return k;
}

}  // namespace

SolverOutcome solve(const ConvexProgram& prog, double tol, int max_iter, std::span<const double> start) {
  prog.validate();
  SolverOutcome out;
  const Compiled compiled(prog);
  VectorXd x = initial_point(compiled, start);

  // Domain first (affine rows only), then every row.
  int iterations = 0;
  const bool domain_ok = compiled.in_domain(x);
  if (!domain_ok) {
    std::vector<DenseRow> domain_rows;
    for (const auto& arg : compiled.domain) {
      DenseAffine neg{-arg.a, -arg.b};
      domain_rows.push_back({neg, {}, false, {}});
    }
    std::vector<const DenseRow*> rows;
    for (const auto& r : domain_rows) rows.push_back(&r);
    for (const auto& r : compiled.rows) {
      if (r.logs.empty() && !r.has_square) rows.push_back(&r);
    }
    // in_domain() also checks the box, which initial_point() already satisfies.
    Compiled box_only = compiled;
    box_only.domain.clear();
    const PhaseOne p = find_interior(box_only, rows, x, iterations, max_iter);
    if (p == PhaseOne::Infeasible) {
      out.status = SolverStatus::Infeasible;
      out.iterations = iterations;
      return out;
    }
    if (p == PhaseOne::Failed) {
      out.status = iterations >= max_iter ? SolverStatus::MaxIterations : SolverStatus::NumericalFailure;
      out.iterations = iterations;
      return out;
    }
  }

  std::vector<const DenseRow*> all_rows;
  for (const auto& r : compiled.rows) all_rows.push_back(&r);
  const PhaseOne p = find_interior(compiled, all_rows, x, iterations, max_iter);
  if (p != PhaseOne::Feasible) {
    out.status = p == PhaseOne::Infeasible
                     ? SolverStatus::Infeasible
                     : (iterations >= max_iter ? SolverStatus::MaxIterations : SolverStatus::NumericalFailure);
    out.iterations = iterations;
    return out;
  }

  Barrier barrier(compiled, all_rows, false);
  const double m = barrier.num_constraints();
  double t = 1.0;
  auto never = [](const VectorXd&) { return false; };
  auto unbounded = [&](const VectorXd& v) {
    return v.lpNorm<Eigen::Infinity>() > kDivergence || compiled.objective(v) > kDivergence;
  };
  while (true) {
    const Centering c = center(barrier, x, t, max_iter - iterations, never);
    iterations += c.steps;
    if (unbounded(x)) {
      out.status = SolverStatus::Unbounded;
      out.iterations = iterations;
      return out;
    }
    if (c.result == StepResult::Failed) {
      out.status = iterations >= max_iter ? SolverStatus::MaxIterations : SolverStatus::NumericalFailure;
      out.iterations = iterations;
      return out;
    }
    if (m / t <= kGapFraction * tol) {
      Kkt kkt = kkt_at(compiled, barrier, x, t);
      if (kkt.residual <= tol) {
        out.status = SolverStatus::Optimal;
        out.x.assign(x.data(), x.data() + x.size());
        out.objective_value = compiled.objective(x);
        out.kkt_residual = kkt.residual;
        out.row_duals = std::move(kkt.row_duals);
        out.lower_duals = std::move(kkt.lower_duals);
        out.upper_duals = std::move(kkt.upper_duals);
        out.iterations = iterations;
        return out;
      }
      if (m / t < 1e-5 * tol) {
        out.status = SolverStatus::NumericalFailure;
        out.kkt_residual = kkt.residual;
        out.iterations = iterations;
        return out;
      }
    }
    if (iterations >= max_iter) {
      out.status = SolverStatus::MaxIterations;
      out.iterations = iterations;
      return out;
    }
    t *= kBarrierGrowth;
  }
}

}  // namespace rsnoma
