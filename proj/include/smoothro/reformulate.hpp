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

#ifndef SMOOTHRO_REFORMULATE_HPP_
#define SMOOTHRO_REFORMULATE_HPP_

#include <vector>

#include "smoothro/lp.hpp"
#include "smoothro/model.hpp"
#include "smoothro/sets.hpp"

namespace smoothro {

/// A deterministic row that replaces one robust constraint: the constraint
/// evaluated at a single worst-case scenario. `scenario` keeps the scenario
/// itself so callers can cross-check against the adversarial oracle.
struct ReformulatedRow {
  SparseVec x_coeffs;
  SparseVec y_coeffs;
  double rhs = 0.0;
  std::vector<double> scenario;
};

/// The robust row evaluated at one fixed scenario.
ReformulatedRow constraint_at_scenario(const UncertainConstraint& con,
                                       const std::vector<double>& delta);

/// x/y variables, bounds, objective, and deterministic rows only; the
/// uncertain constraints are left for the caller to append.
lp::LinearProgram robust_skeleton(const RobustLP& model);

/// Appends `row` as a plain <= row. Returns its LP row id.
int append_scenario_row(const ReformulatedRow& row, int y_offset,
                        lp::LinearProgram* prog);

/// When every component of C x has the same certified sign, the single
/// scenario at the componentwise upper (sign >= 0) or lower (sign <= 0)
/// projection bound dominates.
ReformulatedRow reformulate_same_sign(const UncertainConstraint& con,
                                      const SmoothSet& set, bool use_upper);

/// Exactly one component j of C x may take the opposite sign. n scenarios
/// suffice: one pinning delta_j to its extreme bound, and one per other
/// vertex l sliding delta_j to the tightest value the bound at l allows,
/// with all remaining components pushed as far as smoothness permits.
/// `positive` selects which orientation component j has.
std::vector<ReformulatedRow> reformulate_singleton(
    const UncertainConstraint& con, const SmoothSet& set, int singleton,
    bool positive);

/// Incrementally extensible LP built from a RobustLP: the x/y skeleton plus,
/// per robust constraint, a block of nonnegative multiplier variables over a
/// chosen subset of the set's constraint rows, tied together by n equality
/// rows and one budget row. With every row included the LP is the exact
/// deterministic equivalent; with a subset it is the restricted master that
/// column generation grows via add_multiplier().
class MasterModel {
 public:
  MasterModel(const RobustLP& model, const SmoothSet& set,
              const std::vector<std::vector<int>>& included_rows);

  lp::LinearProgram& program() { return lp_; }
  const lp::LinearProgram& program() const { return lp_; }

  int x_offset() const { return 0; }
  int y_offset() const { return y_offset_; }

  /// LP row ids of the equality block (one per delta component) and the
  /// budget row for robust constraint `i`.
  const std::vector<int>& equality_rows(int i) const { return eq_rows_[i]; }
  int budget_row(int i) const { return budget_rows_[i]; }

  /// Universe row indices currently included for constraint `i`, in the
  /// canonical order of SmoothSet::constraint_rows().
  const std::vector<int>& included(int i) const { return included_[i]; }
  bool is_included(int i, int universe_row) const;

  /// Adds the multiplier column for universe row `universe_row` to
  /// constraint `i`. Returns the new LP variable id. Appending never
  /// disturbs existing ids, so a warm basis from the previous solve stays
  /// valid.
  int add_multiplier(int i, int universe_row);

  long multiplier_count() const { return multiplier_count_; }

 private:
  lp::LinearProgram lp_;
  std::vector<ConstraintRow> universe_;
  std::vector<std::vector<int>> included_;
  std::vector<std::vector<char>> included_mask_;
  std::vector<std::vector<int>> eq_rows_;
  std::vector<int> budget_rows_;
  int y_offset_ = 0;
  long multiplier_count_ = 0;
};

/// Exact deterministic equivalent: the master with every universe row
/// included for every robust constraint.
MasterModel dualize(const RobustLP& model, const SmoothSet& set);

enum class RowMethod {
  kSameSignUpper,
  kSameSignLower,
  kSingletonPos,
  kSingletonNeg,
  kDualized,
};

const char* to_string(RowMethod m);

enum class ReformStrategy {
  kCompactFirst,   // scenario rows where a sign pattern certifies them
  kAlwaysDualize,  // multiplier blocks everywhere
};

struct ConstraintPlan {
  RowMethod method = RowMethod::kDualized;
  std::vector<int> lp_rows;  // LP rows realizing this constraint
  std::vector<ReformulatedRow> rows;  // compact methods only
};

struct CompiledModel {
  lp::LinearProgram lp;
  std::vector<ConstraintPlan> plan;
  int y_offset = 0;
};

/// Rewrites each robust constraint by the cheapest sound method: a certified
/// sign pattern yields 1 or n scenario rows, anything else gets the full
/// multiplier block.
CompiledModel auto_reformulate(const RobustLP& model, const SmoothSet& set,
                               ReformStrategy strategy);

}  // namespace smoothro

#endif  // SMOOTHRO_REFORMULATE_HPP_
