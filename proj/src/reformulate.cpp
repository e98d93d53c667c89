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

#include "smoothro/reformulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smoothro {

namespace {

double add_toward_inf(double a, double d) {
  return std::isinf(d) ? std::numeric_limits<double>::infinity() : a + d;
}

double sub_toward_inf(double a, double d) {
  return std::isinf(d) ? -std::numeric_limits<double>::infinity() : a - d;
}

// x-coefficients of delta' C at a fixed scenario.
SparseVec collapse_scenario(const UncertainConstraint& con,
                            const std::vector<double>& delta, int n_x) {
  std::vector<double> acc(n_x, 0.0);
  std::vector<char> touched(n_x, 0);
  for (size_t j = 0; j < con.c_rows.size(); ++j) {
    if (delta[j] == 0.0) continue;
    for (const auto& [var, coeff] : con.c_rows[j]) {
      acc[var] += delta[j] * coeff;
      touched[var] = 1;
    }
  }
  SparseVec out;
  for (int v = 0; v < n_x; ++v) {
    if (touched[v] && acc[v] != 0.0) out.emplace_back(v, acc[v]);
  }
  return out;
}

ReformulatedRow row_at_scenario(const UncertainConstraint& con,
                                const std::vector<double>& delta, int n_x) {
  ReformulatedRow row;
  row.x_coeffs = collapse_scenario(con, delta, n_x);
  row.y_coeffs = con.d;
  row.rhs = con.rhs;
  row.scenario = delta;
  return row;
}

// Adds x and y variables, their bounds and costs, and the deterministic
// rows. Every reformulation grows this same skeleton.
void build_skeleton(const RobustLP& model, lp::LinearProgram* prog) {
  for (int v = 0; v < model.n_x; ++v) {
    prog->add_var(model.f[v], model.x_lower[v], model.x_upper[v]);
  }
  for (int w = 0; w < model.n_y; ++w) {
    prog->add_var(model.g[w], model.y_lower[w], model.y_upper[w]);
  }
  for (const RobustLP::DetRow& det : model.deterministic) {
    std::vector<std::pair<int, double>> coeffs = det.x_coeffs;
    for (const auto& [w, coeff] : det.y_coeffs) {
      coeffs.emplace_back(model.n_x + w, coeff);
    }
    prog->add_row(lp::Relation::kLessEqual, det.rhs, std::move(coeffs));
  }
}

int append_compact_row(const ReformulatedRow& row, int y_offset,
                       lp::LinearProgram* prog) {
  std::vector<std::pair<int, double>> coeffs = row.x_coeffs;
  for (const auto& [w, coeff] : row.y_coeffs) {
    coeffs.emplace_back(y_offset + w, coeff);
  }
  prog->add_row(lp::Relation::kLessEqual, row.rhs, std::move(coeffs));
  return prog->num_rows() - 1;
}

void require_member(const RobustLP& model, const SmoothSet& set) {
  if (model.n_delta != set.dim()) {
    throw std::invalid_argument("reformulate: set dimension mismatch");
  }
}

}  // namespace

ReformulatedRow constraint_at_scenario(const UncertainConstraint& con,
                                       const std::vector<double>& delta) {
  if (delta.size() != con.c_rows.size()) {
    throw std::invalid_argument("constraint_at_scenario: dimension mismatch");
  }
  int n_x = 0;
  for (const SparseVec& r : con.c_rows) {
    for (const auto& [var, coeff] : r) {
      (void)coeff;
      n_x = std::max(n_x, var + 1);
    }
  }
  return row_at_scenario(con, delta, n_x);
}

lp::LinearProgram robust_skeleton(const RobustLP& model) {
  lp::LinearProgram prog;
  build_skeleton(model, &prog);
  return prog;
}

int append_scenario_row(const ReformulatedRow& row, int y_offset,
                        lp::LinearProgram* prog) {
  return append_compact_row(row, y_offset, prog);
}

ReformulatedRow reformulate_same_sign(const UncertainConstraint& con,
                                      const SmoothSet& set, bool use_upper) {
  const ProjectionBounds& pb = set.bounds();
  const std::vector<double>& delta = use_upper ? pb.upper : pb.lower;
  int n_x = 0;
  for (const SparseVec& r : con.c_rows) {
    for (const auto& [var, coeff] : r) {
      (void)coeff;
      n_x = std::max(n_x, var + 1);
    }
  }
  return row_at_scenario(con, delta, n_x);
}

std::vector<ReformulatedRow> reformulate_singleton(
    const UncertainConstraint& con, const SmoothSet& set, int singleton,
    bool positive) {
  const int n = set.dim();
  if (singleton < 0 || singleton >= n) {
    throw std::invalid_argument("reformulate_singleton: bad component index");
  }
  const ProjectionBounds& pb = set.bounds();
  const Eigen::MatrixXd& dist = set.distances();
  int n_x = 0;
  for (const SparseVec& r : con.c_rows) {
    for (const auto& [var, coeff] : r) {
      (void)coeff;
      n_x = std::max(n_x, var + 1);
    }
  }
  const int j = singleton;

  // Given the value t at the singleton component, the adversary pushes every
  // other component as far as smoothness from j allows, clipped to its own
  // projection interval. Both fills stay inside the set for any t within
  // [lower_j, upper_j].
  const auto fill = [&](double t) {
    std::vector<double> delta(n);
    delta[j] = t;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      delta[k] = positive
                     ? std::max(pb.lower[k], sub_toward_inf(t, dist(k, j)))
                     : std::min(pb.upper[k], add_toward_inf(t, dist(k, j)));
    }
    return delta;
  };

  std::vector<ReformulatedRow> rows;
  rows.reserve(n);
  // The singleton component at its own extreme bound.
  rows.push_back(row_at_scenario(
      con, fill(positive ? pb.upper[j] : pb.lower[j]), n_x));
  // One row per other vertex l: the singleton value the bound at l pins
  // through the metric, clipped to the singleton's own interval.
  for (int l = 0; l < n; ++l) {
    if (l == j) continue;
    const double t =
        positive
            ? std::min(pb.upper[j], add_toward_inf(pb.lower[l], dist(l, j)))
            : std::max(pb.lower[j], sub_toward_inf(pb.upper[l], dist(l, j)));
    rows.push_back(row_at_scenario(con, fill(t), n_x));
  }
  return rows;
}

MasterModel::MasterModel(const RobustLP& model, const SmoothSet& set,
                         const std::vector<std::vector<int>>& included_rows)
    : universe_(set.constraint_rows()) {
  require_member(model, set);
  if (included_rows.size() != model.uncertain.size()) {
    throw std::invalid_argument("MasterModel: one row list per constraint");
  }
  build_skeleton(model, &lp_);
  y_offset_ = model.n_x;

  const int m = static_cast<int>(model.uncertain.size());
  const int n = model.n_delta;
  eq_rows_.resize(m);
  budget_rows_.resize(m);
  included_.resize(m);
  included_mask_.assign(m, std::vector<char>(universe_.size(), 0));

  for (int i = 0; i < m; ++i) {
    const UncertainConstraint& con = model.uncertain[i];
    // Multipliers over the included rows must reproduce (C x)_j
    // componentwise; their weighted budget plus d'y stays below the rhs.
    eq_rows_[i].resize(n);
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<int, double>> coeffs;
      coeffs.reserve(con.c_rows[j].size());
      for (const auto& [var, coeff] : con.c_rows[j]) {
        coeffs.emplace_back(var, -coeff);
      }
      lp_.add_row(lp::Relation::kEqual, 0.0, std::move(coeffs));
      eq_rows_[i][j] = lp_.num_rows() - 1;
    }
    std::vector<std::pair<int, double>> budget;
    budget.reserve(con.d.size());
    for (const auto& [w, coeff] : con.d) {
      budget.emplace_back(y_offset_ + w, coeff);
    }
    lp_.add_row(lp::Relation::kLessEqual, con.rhs, std::move(budget));
    budget_rows_[i] = lp_.num_rows() - 1;

    for (int row : included_rows[i]) add_multiplier(i, row);
  }
}

bool MasterModel::is_included(int i, int universe_row) const {
  return included_mask_[i][universe_row] != 0;
}

int MasterModel::add_multiplier(int i, int universe_row) {
  if (universe_row < 0 ||
      universe_row >= static_cast<int>(universe_.size())) {
    throw std::invalid_argument("add_multiplier: universe row out of range");
  }
  if (included_mask_[i][universe_row]) {
    throw std::invalid_argument("add_multiplier: row already included");
  }
  const ConstraintRow& cr = universe_[universe_row];
  const int var = lp_.add_var(0.0);
  for (const auto& [j, aval] : cr.a) {
    lp_.rows[eq_rows_[i][j]].coeffs.emplace_back(var, aval);
  }
  if (cr.b != 0.0) {
    lp_.rows[budget_rows_[i]].coeffs.emplace_back(var, cr.b);
  }
  included_mask_[i][universe_row] = 1;
  included_[i].push_back(universe_row);
  ++multiplier_count_;
  return var;
}

MasterModel dualize(const RobustLP& model, const SmoothSet& set) {
  const int total = 2 * (set.dim() + static_cast<int>(set.graph().edges.size()));
  std::vector<int> all(total);
  for (int r = 0; r < total; ++r) all[r] = r;
  return MasterModel(model, set,
                     std::vector<std::vector<int>>(model.uncertain.size(), all));
}

const char* to_string(RowMethod m) {
  switch (m) {
    case RowMethod::kSameSignUpper:
      return "same_sign_upper";
    case RowMethod::kSameSignLower:
      return "same_sign_lower";
    case RowMethod::kSingletonPos:
      return "singleton_pos";
    case RowMethod::kSingletonNeg:
      return "singleton_neg";
    case RowMethod::kDualized:
      return "dualized";
  }
  return "unknown";
}

CompiledModel auto_reformulate(const RobustLP& model, const SmoothSet& set,
                               ReformStrategy strategy) {
  require_member(model, set);
  CompiledModel out;
  build_skeleton(model, &out.lp);
  out.y_offset = model.n_x;
  const std::vector<ConstraintRow> universe = set.constraint_rows();
  const int n = model.n_delta;

  for (const UncertainConstraint& con : model.uncertain) {
    ConstraintPlan plan;
    PatternInfo pattern;
    if (strategy == ReformStrategy::kCompactFirst) {
      pattern = sign_pattern(con, model);
    }
    switch (pattern.kind) {
      case SignPattern::kAllNonneg:
        plan.method = RowMethod::kSameSignUpper;
        plan.rows.push_back(reformulate_same_sign(con, set, true));
        break;
      case SignPattern::kAllNonpos:
        plan.method = RowMethod::kSameSignLower;
        plan.rows.push_back(reformulate_same_sign(con, set, false));
        break;
      case SignPattern::kSingletonPos:
        plan.method = RowMethod::kSingletonPos;
        plan.rows = reformulate_singleton(con, set, pattern.singleton, true);
        break;
      case SignPattern::kSingletonNeg:
        plan.method = RowMethod::kSingletonNeg;
        plan.rows = reformulate_singleton(con, set, pattern.singleton, false);
        break;
      case SignPattern::kMixed:
        plan.method = RowMethod::kDualized;
        break;
    }
    if (plan.method == RowMethod::kDualized) {
      // Same block dualize() builds: n equalities tying the multipliers to
      // C x, one budget row, one multiplier per universe row.
      std::vector<int> eq_ids(n);
      for (int j = 0; j < n; ++j) {
        std::vector<std::pair<int, double>> coeffs;
        for (const auto& [var, coeff] : con.c_rows[j]) {
          coeffs.emplace_back(var, -coeff);
        }
        out.lp.add_row(lp::Relation::kEqual, 0.0, std::move(coeffs));
        eq_ids[j] = out.lp.num_rows() - 1;
        plan.lp_rows.push_back(eq_ids[j]);
      }
      std::vector<std::pair<int, double>> budget;
      for (const auto& [w, coeff] : con.d) {
        budget.emplace_back(out.y_offset + w, coeff);
      }
      out.lp.add_row(lp::Relation::kLessEqual, con.rhs, std::move(budget));
      const int budget_id = out.lp.num_rows() - 1;
      plan.lp_rows.push_back(budget_id);
      for (const ConstraintRow& cr : universe) {
        const int var = out.lp.add_var(0.0);
        for (const auto& [j, aval] : cr.a) {
          out.lp.rows[eq_ids[j]].coeffs.emplace_back(var, aval);
        }
        if (cr.b != 0.0) {
          out.lp.rows[budget_id].coeffs.emplace_back(var, cr.b);
        }
      }
    } else {
      for (const ReformulatedRow& row : plan.rows) {
        plan.lp_rows.push_back(append_compact_row(row, out.y_offset, &out.lp));
      }
    }
    out.plan.push_back(std::move(plan));
  }
  return out;
}

}  // namespace smoothro
