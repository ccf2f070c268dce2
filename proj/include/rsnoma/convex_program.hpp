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

#ifndef RSNOMA_CONVEX_PROGRAM_HPP
#define RSNOMA_CONVEX_PROGRAM_HPP

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rsnoma {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sparse affine expression  sum_i coef_i * x[index_i] + constant.
struct AffineForm {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  AffineForm& add(int index, double coef) {
    terms.emplace_back(index, coef);
    return *this;
  }
  AffineForm& add_constant(double value) {
    constant += value;
    return *this;
  }
  /// Appends every term of `other` scaled by `scale`.
  AffineForm& accumulate(const AffineForm& other, double scale = 1.0);

  double eval(std::span<const double> x) const;
};

/// weight * log2(arg(x)).  The weight must be non-negative.
struct LogTerm {
  double weight = 1.0;
  AffineForm arg;
};

/// lhs(x) <= sum_m logs_m(x) + rhs(x).  Convex because the logs are concave.
struct LogRow {
  AffineForm lhs;
  std::vector<LogTerm> logs;
  AffineForm rhs;
  std::string label;
};

/// 0.25 * square(x)^2 + lhs(x) <= rhs(x).
struct QuadRow {
  AffineForm square;
  AffineForm lhs;
  AffineForm rhs;
  std::string label;
};

/// Canonical concave maximization problem:
///
///   maximize   objective_affine(x) + sum_m objective_logs_m(x)
///   subject to linear_rows_i(x) <= 0, log_rows, quad_rows,
///              lower <= x <= upper.
///
/// Every log argument has to stay strictly positive on the feasible set.
struct ConvexProgram {
  int n = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> names;

  AffineForm objective_affine;
  std::vector<LogTerm> objective_logs;

  std::vector<AffineForm> linear_rows;
  std::vector<std::string> linear_labels;
  std::vector<LogRow> log_rows;
  std::vector<QuadRow> quad_rows;

  /// Adds a variable with the given bounds and returns its index.
  int add_variable(std::string name, double lo = 0.0, double hi = kInf);
  void add_linear_row(AffineForm row, std::string label);

  int num_rows() const {
    return static_cast<int>(linear_rows.size() + log_rows.size() + quad_rows.size());
  }

  double objective(std::span<const double> x) const;

  /// Values g_i(x) of all rows in the order linear, log, quad, each written as
  /// g_i(x) <= 0.  Log rows evaluate to +inf outside the log domain.
  std::vector<double> row_values(std::span<const double> x) const;

  /// Largest violation over rows and bounds (0 when feasible).
  double max_violation(std::span<const double> x) const;

  /// Throws std::invalid_argument on malformed data (bad indices, negative
  /// log weights, inverted bounds).
  void validate() const;
};

/// Plain-text dump of the program for cross-checking with external tools.
void write_program(std::ostream& os, const ConvexProgram& prog);

}  // namespace rsnoma

#endif  // RSNOMA_CONVEX_PROGRAM_HPP
