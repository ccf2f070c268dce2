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

#include "rsnoma/convex_program.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rsnoma {

AffineForm& AffineForm::accumulate(const AffineForm& other, double scale) {
  for (const auto& [index, coef] : other.terms) terms.emplace_back(index, coef * scale);
  constant += other.constant * scale;
  return *this;
}

double AffineForm::eval(std::span<const double> x) const {
  double value = constant;
  for (const auto& [index, coef] : terms) value += coef * x[static_cast<std::size_t>(index)];
  return value;
}

int ConvexProgram::add_variable(std::string name, double lo, double hi) {
  lower.push_back(lo);
  upper.push_back(hi);
  names.push_back(std::move(name));
  return n++;
}

void ConvexProgram::add_linear_row(AffineForm row, std::string label) {
  linear_rows.push_back(std::move(row));
  linear_labels.push_back(std::move(label));
}

namespace {

double log_sum(const std::vector<LogTerm>& logs, std::span<const double> x) {
  double total = 0.0;
  for (const auto& term : logs) {
    const double arg = term.arg.eval(x);
    if (!(arg > 0.0)) return -kInf;
    total += term.weight * std::log2(arg);
  }
  return total;
}

}  // namespace

double ConvexProgram::objective(std::span<const double> x) const {
  return objective_affine.eval(x) + log_sum(objective_logs, x);
}

std::vector<double> ConvexProgram::row_values(std::span<const double> x) const {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(num_rows()));
  for (const auto& row : linear_rows) g.push_back(row.eval(x));
  for (const auto& row : log_rows) {
    const double logs = log_sum(row.logs, x);
    g.push_back(std::isinf(logs) ? kInf : row.lhs.eval(x) - row.rhs.eval(x) - logs);
  }
  for (const auto& row : quad_rows) {
    const double s = row.square.eval(x);
    g.push_back(0.25 * s * s + row.lhs.eval(x) - row.rhs.eval(x));
  }
  return g;
}

double ConvexProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (double g : row_values(x)) worst = std::max(worst, g);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    worst = std::max({worst, lower[k] - x[k], x[k] - upper[k]});
  }
  return worst;
}

void ConvexProgram::validate() const {
  if (n < 0 || lower.size() != static_cast<std::size_t>(n) ||
      upper.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("ConvexProgram: bound vectors do not match n");
  }
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!(lower[k] < upper[k]) || (std::isinf(lower[k]) && lower[k] > 0)) {
      throw std::invalid_argument("ConvexProgram: empty box for variable " + std::to_string(i));
    }
  }
  auto check_form = [this](const AffineForm& form) {
    for (const auto& [index, coef] : form.terms) {
      if (index < 0 || index >= n || !std::isfinite(coef)) {
        throw std::invalid_argument("ConvexProgram: bad affine term");
      }
    }
  };
  auto check_logs = [&](const std::vector<LogTerm>& logs) {
    for (const auto& term : logs) {
      if (!(term.weight >= 0.0)) throw std::invalid_argument("ConvexProgram: negative log weight");
      check_form(term.arg);
    }
  };
  check_form(objective_affine);
  check_logs(objective_logs);
  for (const auto& row : linear_rows) check_form(row);
  for (const auto& row : log_rows) {
    check_form(row.lhs);
    check_form(row.rhs);
    check_logs(row.logs);
  }
  for (const auto& row : quad_rows) {
    check_form(row.square);
    check_form(row.lhs);
    check_form(row.rhs);
  }
}

namespace {

void write_form(std::ostream& os, const AffineForm& form) {
  os << form.constant;
  for (const auto& [index, coef] : form.terms) os << " " << coef << "*x" << index;
}

void write_logs(std::ostream& os, const std::vector<LogTerm>& logs) {
  for (const auto& term : logs) {
    os << "\n    log " << term.weight << " : ";
    write_form(os, term.arg);
  }
}

}  // namespace

void write_program(std::ostream& os, const ConvexProgram& prog) {
  const auto old_precision = os.precision(17);
  os << "variables " << prog.n << "\n";
  for (int i = 0; i < prog.n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    os << "  x" << i << " " << (k < prog.names.size() ? prog.names[k] : "") << " ["
       << prog.lower[k] << ", " << prog.upper[k] << "]\n";
  }
  os << "maximize\n  affine ";
  write_form(os, prog.objective_affine);
  write_logs(os, prog.objective_logs);
  os << "\nlinear " << prog.linear_rows.size() << "  # row <= 0\n";
  for (std::size_t i = 0; i < prog.linear_rows.size(); ++i) {
    os << "  " << (i < prog.linear_labels.size() ? prog.linear_labels[i] : "") << " : ";
    write_form(os, prog.linear_rows[i]);
    os << "\n";
  }
  os << "logrows " << prog.log_rows.size() << "  # lhs <= logs + rhs\n";
  for (const auto& row : prog.log_rows) {
    os << "  " << row.label << "\n    lhs ";
    write_form(os, row.lhs);
    os << "\n    rhs ";
    write_form(os, row.rhs);
    write_logs(os, row.logs);
    os << "\n";
  }
  os << "quadrows " << prog.quad_rows.size() << "  # 0.25*square^2 + lhs <= rhs\n";
  for (const auto& row : prog.quad_rows) {
    os << "  " << row.label << "\n    square ";
    write_form(os, row.square);
    os << "\n    lhs ";
    write_form(os, row.lhs);
    os << "\n    rhs ";
    write_form(os, row.rhs);
    os << "\n";
  }
  os.precision(old_precision);
}

}  // namespace rsnoma
