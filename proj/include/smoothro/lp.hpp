// Copyright 2026 The smoothro authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SMOOTHRO_LP_HPP_
#define SMOOTHRO_LP_HPP_

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace smoothro::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct Row {
  std::vector<std::pair<int, double>> coeffs;  // (variable, value), sorted
  Relation rel = Relation::kLessEqual;
  double rhs = 0.0;
};

/// Minimization problem over variables with individual bounds. Lower bounds
/// default to 0; pass -kInf for a free variable.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_var(double cost, double lb = 0.0, double ub = kInf);
  void add_row(Relation rel, double rhs,
               std::vector<std::pair<int, double>> coeffs);
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(SolveStatus s);

/// Basis exchange token for warm restarts. Labels survive appending new
/// variables or rows to the program (existing indices keep their meaning).
struct BasisLabel {
  enum Kind { kVar, kVarNeg, kSlack, kArtificial };
  Kind kind;
  int index;  // variable index for kVar/kVarNeg, row index otherwise
};

struct Solution {
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  /// One multiplier per row. Under minimization duals of <= rows are <= 0,
  /// duals of >= rows are >= 0, duals of == rows are free.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  std::vector<BasisLabel> basis;  // final basis, one label per internal row
  long iterations = 0;
  bool kkt_ok = true;  // populated when SolveOptions::self_check is set
};

struct SolveOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-9;
  long max_iterations = 0;  // 0: scale with problem size
  const std::vector<BasisLabel>* warm_basis = nullptr;
  bool self_check = false;
};

/// Two-phase revised simplex. Dantzig pricing with a Bland's-rule fallback
/// after a run of degenerate steps; basis refactorized every 64 pivots.
/// Mathematical outcomes are reported through Solution::status, never as
/// exceptions; exceptions signal malformed input only.
Solution solve(const LinearProgram& lp, const SolveOptions& opts = {});

/// Largest violation of rows and bounds at x (0 when feasible).
double max_constraint_violation(const LinearProgram& lp,
                                const std::vector<double>& x);

}  // namespace smoothro::lp

#endif  // SMOOTHRO_LP_HPP_
