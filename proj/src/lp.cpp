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

#include "smoothro/lp.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>

namespace smoothro::lp {

int LinearProgram::add_var(double cost, double lb, double ub) {
  objective.push_back(cost);
  lower.push_back(lb);
  upper.push_back(ub);
  return num_vars() - 1;
}

void LinearProgram::add_row(Relation rel, double rhs,
                            std::vector<std::pair<int, double>> coeffs) {
  Row r;
  r.rel = rel;
  r.rhs = rhs;
  r.coeffs = std::move(coeffs);
  std::sort(r.coeffs.begin(), r.coeffs.end());
  rows.push_back(std::move(r));
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "?";
}

double max_constraint_violation(const LinearProgram& lp,
                                const std::vector<double>& x) {
  double worst = 0.0;
  for (const Row& r : lp.rows) {
    double lhs = 0.0;
    for (const auto& [j, v] : r.coeffs) lhs += v * x[j];
    switch (r.rel) {
      case Relation::kLessEqual: worst = std::max(worst, lhs - r.rhs); break;
      case Relation::kGreaterEqual: worst = std::max(worst, r.rhs - lhs); break;
      case Relation::kEqual: worst = std::max(worst, std::abs(lhs - r.rhs));
    }
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.lower[j] > -kInf) worst = std::max(worst, lp.lower[j] - x[j]);
    if (lp.upper[j] < kInf) worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

constexpr double kPivotTol = 1e-9;
constexpr double kPivotFloor = 1e-7;  // smallest acceptable pivot magnitude
constexpr int kRefactorEvery = 64;
constexpr int kDegenerateRun = 64;

struct Eta {
  int r;
  Eigen::VectorXd w;
};

// Internal standard form: min c'z s.t. Az = b, z >= 0. Finite lower bounds
// are shifted away, free variables split, finite upper bounds become rows.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolveOptions& opts)
      : lp_(lp), opts_(opts) {
    build();
  }

  Solution run();

 private:
  void build();
  void factorize();
  void ftran(Eigen::VectorXd& v) const;
  void btran(Eigen::VectorXd& v) const;
  Eigen::VectorXd column_dense(int col) const;
  double col_cost(int col, bool phase1) const;
  double dot_col(const Eigen::VectorXd& y, int col) const;
  int artificial_for_row(int r);
  bool import_basis(const std::vector<BasisLabel>& labels);
  void default_basis();
  void recompute_values();
  int price(const Eigen::VectorXd& y, bool phase1, bool bland,
            const std::vector<long>& banned_epoch, long epoch) const;
  Solution extract(SolveStatus status, long iters);
  void self_check(Solution& sol, const Eigen::VectorXd& y);

  const LinearProgram& lp_;
  const SolveOptions& opts_;

  int m_ = 0;           // internal rows
  int n_static_ = 0;    // structural + slack columns
  // CSC storage for static columns.
  std::vector<int> col_ptr_, col_row_;
  std::vector<double> col_val_;
  std::vector<double> cost_;              // phase-2 cost per static column
  std::vector<BasisLabel> label_;         // per static column
  std::vector<int> var_plus_, var_minus_; // var -> column id or -1
  std::vector<int> slack_of_row_;         // internal row -> column id or -1
  std::vector<double> shift_;             // per original variable
  Eigen::VectorXd b_;

  struct Artificial { int row; double sign; };
  std::vector<Artificial> artificials_;   // col id = n_static_ + k
  std::vector<int> art_of_row_;           // internal row -> artificial or -1
  double bscale_ = 1.0;                   // 1 + max |b|
  Eigen::VectorXd b_exact_;               // rhs without the anti-cycling jitter

  std::vector<int> basis_;                // per row: column id
  std::vector<char> in_basis_;            // per column id
  Eigen::VectorXd xb_;
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu_, lut_;
  std::vector<Eta> etas_;
};

void Simplex::build() {
  const int nv = lp_.num_vars();
  const int nr = lp_.num_rows();
  shift_.assign(nv, 0.0);
  var_plus_.assign(nv, -1);
  var_minus_.assign(nv, -1);

  // Internal rows: the original rows, then one row per finite upper bound.
  std::vector<std::pair<int, double>> bound_rows;  // (var, ub - shift)
  for (int j = 0; j < nv; ++j) {
    const double lb = lp_.lower[j];
    const double ub = lp_.upper[j];
    if (lb > -kInf) shift_[j] = lb;
    if (ub < kInf) {
      if (lb > -kInf && ub < lb - 1e-12) {
        throw std::invalid_argument("lp: upper bound below lower bound");
      }
      bound_rows.push_back({j, ub - shift_[j]});
    }
  }
  m_ = nr + static_cast<int>(bound_rows.size());

  b_.resize(m_);
  for (int r = 0; r < nr; ++r) {
    double rhs = lp_.rows[r].rhs;
    for (const auto& [j, v] : lp_.rows[r].coeffs) rhs -= v * shift_[j];
    b_[r] = rhs;
  }
  for (size_t k = 0; k < bound_rows.size(); ++k) {
    b_[nr + static_cast<int>(k)] = bound_rows[k].second;
  }

  // Column-major structural entries. Repeated (row, var) coefficients are
  // summed here so every later view of a column sees one entry per row.
  std::vector<std::vector<std::pair<int, double>>> cols(nv);
  for (int r = 0; r < nr; ++r) {
    for (const auto& [j, v] : lp_.rows[r].coeffs) {
      if (j < 0 || j >= nv) throw std::invalid_argument("lp: bad var index");
      if (v != 0.0) cols[j].push_back({r, v});
    }
  }
  for (std::vector<std::pair<int, double>>& col : cols) {
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t out = 0;
    for (size_t k = 0; k < col.size(); ++k) {
      if (out > 0 && col[out - 1].first == col[k].first) {
        col[out - 1].second += col[k].second;
      } else {
        col[out++] = col[k];
      }
    }
    col.resize(out);
  }
  for (size_t k = 0; k < bound_rows.size(); ++k) {
    cols[bound_rows[k].first].push_back({nr + static_cast<int>(k), 1.0});
  }

  auto push_col = [&](const std::vector<std::pair<int, double>>& entries,
                      double sgn, double cost, BasisLabel lab) {
    col_ptr_.push_back(static_cast<int>(col_row_.size()));
    for (const auto& [r, v] : entries) {
      col_row_.push_back(r);
      col_val_.push_back(sgn * v);
    }
    cost_.push_back(cost);
    label_.push_back(lab);
  };

  for (int j = 0; j < nv; ++j) {
    var_plus_[j] = static_cast<int>(cost_.size());
    push_col(cols[j], 1.0, lp_.objective[j], {BasisLabel::kVar, j});
    if (lp_.lower[j] == -kInf) {
      var_minus_[j] = static_cast<int>(cost_.size());
      push_col(cols[j], -1.0, -lp_.objective[j], {BasisLabel::kVarNeg, j});
    }
  }
  slack_of_row_.assign(m_, -1);
  for (int r = 0; r < m_; ++r) {
    const Relation rel =
        r < nr ? lp_.rows[r].rel : Relation::kLessEqual;
    if (rel == Relation::kEqual) continue;
    const double sgn = rel == Relation::kLessEqual ? 1.0 : -1.0;
    slack_of_row_[r] = static_cast<int>(cost_.size());
    push_col({{r, 1.0}}, sgn, 0.0, {BasisLabel::kSlack, r});
  }
  col_ptr_.push_back(static_cast<int>(col_row_.size()));
  n_static_ = static_cast<int>(cost_.size());
  art_of_row_.assign(m_, -1);
  bscale_ = m_ > 0 ? 1.0 + b_.cwiseAbs().maxCoeff() : 1.0;

  // Deterministic sub-tolerance rhs jitter. Exact ratio-test ties on
  // degenerate rows let long pivot chains assemble linearly dependent
  // bases; distinct perturbed ratios break the ties. The exact rhs comes
  // back just before solution extraction.
  b_exact_ = b_;
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (int r = 0; r < m_; ++r) {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 29;
    const double u = 1.0 + static_cast<double>(h & 0xffff) / 65536.0;
    b_[r] += 1e-9 * u * (1.0 + std::abs(b_[r]));
  }
}

int Simplex::artificial_for_row(int r) {
  if (art_of_row_[r] >= 0) return art_of_row_[r];
  Artificial a;
  a.row = r;
  a.sign = b_[r] >= 0.0 ? 1.0 : -1.0;
  artificials_.push_back(a);
  const int id = n_static_ + static_cast<int>(artificials_.size()) - 1;
  art_of_row_[r] = id;
  return id;
}

Eigen::VectorXd Simplex::column_dense(int col) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m_);
  if (col < n_static_) {
    for (int k = col_ptr_[col]; k < col_ptr_[col + 1]; ++k) {
      v[col_row_[k]] = col_val_[k];
    }
  } else {
    const Artificial& a = artificials_[col - n_static_];
    v[a.row] = a.sign;
  }
  return v;
}

double Simplex::col_cost(int col, bool phase1) const {
  if (col >= n_static_) return phase1 ? 1.0 : 0.0;
  return phase1 ? 0.0 : cost_[col];
}

double Simplex::dot_col(const Eigen::VectorXd& y, int col) const {
  if (col >= n_static_) {
    const Artificial& a = artificials_[col - n_static_];
    return a.sign * y[a.row];
  }
  double s = 0.0;
  for (int k = col_ptr_[col]; k < col_ptr_[col + 1]; ++k) {
    s += col_val_[k] * y[col_row_[k]];
  }
  return s;
}

void Simplex::factorize() {
  etas_.clear();
  if (m_ == 0) return;
  std::vector<Eigen::Triplet<double>> t, tt;
  for (int p = 0; p < m_; ++p) {
    const int col = basis_[p];
    if (col < n_static_) {
      for (int k = col_ptr_[col]; k < col_ptr_[col + 1]; ++k) {
        t.emplace_back(col_row_[k], p, col_val_[k]);
        tt.emplace_back(p, col_row_[k], col_val_[k]);
      }
    } else {
      const Artificial& a = artificials_[col - n_static_];
      t.emplace_back(a.row, p, a.sign);
      tt.emplace_back(p, a.row, a.sign);
    }
  }
  SpMat B(m_, m_), Bt(m_, m_);
  B.setFromTriplets(t.begin(), t.end());
  Bt.setFromTriplets(tt.begin(), tt.end());
  lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
  lu_->compute(B);
  lut_ = std::make_unique<Eigen::SparseLU<SpMat>>();
  lut_->compute(Bt);
  if (lu_->info() != Eigen::Success || lut_->info() != Eigen::Success) {
    throw std::runtime_error("lp: singular basis");
  }
}

void Simplex::ftran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  v = lu_->solve(v);
  for (const Eta& e : etas_) {
    const double t = v[e.r] / e.w[e.r];
    if (t != 0.0) {
      v -= t * e.w;
    }
    v[e.r] = t;
  }
}

void Simplex::btran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    const double num = v[it->r] - it->w.dot(v) + it->w[it->r] * v[it->r];
    v[it->r] = num / it->w[it->r];
  }
  v = lut_->solve(v);
}

void Simplex::default_basis() {
  basis_.assign(m_, -1);
  for (int r = 0; r < m_; ++r) {
    const int s = slack_of_row_[r];
    const bool le = s >= 0 && col_val_[col_ptr_[s]] > 0.0;
    if (s >= 0 && ((le && b_[r] >= 0.0) || (!le && b_[r] <= 0.0))) {
      basis_[r] = s;
    } else {
      basis_[r] = artificial_for_row(r);
    }
  }
}

bool Simplex::import_basis(const std::vector<BasisLabel>& labels) {
  if (static_cast<int>(labels.size()) != m_) return false;
  std::vector<int> cols(m_, -1);
  for (int p = 0; p < m_; ++p) {
    const BasisLabel& l = labels[p];
    int c = -1;
    switch (l.kind) {
      case BasisLabel::kVar:
        if (l.index >= 0 && l.index < lp_.num_vars()) c = var_plus_[l.index];
        break;
      case BasisLabel::kVarNeg:
        if (l.index >= 0 && l.index < lp_.num_vars()) c = var_minus_[l.index];
        break;
      case BasisLabel::kSlack:
        if (l.index >= 0 && l.index < m_) c = slack_of_row_[l.index];
        break;
      case BasisLabel::kArtificial:
        if (l.index >= 0 && l.index < m_) c = artificial_for_row(l.index);
        break;
    }
    if (c < 0) return false;
    cols[p] = c;
  }
  basis_ = cols;
  try {
    factorize();
  } catch (const std::runtime_error&) {
    return false;
  }
  recompute_values();
  for (int p = 0; p < m_; ++p) {
    if (xb_[p] < -opts_.feas_tol) return false;  // stale basis; start cold
  }
  return true;
}

void Simplex::recompute_values() {
  xb_ = b_;
  ftran(xb_);
  // Negative residue within the feasibility tolerance is solve noise; left
  // in place it manufactures descent directions that do not exist.
  const double floor = -opts_.feas_tol * bscale_;
  for (int p = 0; p < m_; ++p) {
    if (xb_[p] < 0.0 && xb_[p] > floor) xb_[p] = 0.0;
  }
}

int Simplex::price(const Eigen::VectorXd& y, bool phase1, bool bland,
                   const std::vector<long>& banned_epoch, long epoch) const {
  int best = -1;
  double best_rc = -opts_.opt_tol;
  // Artificial columns never re-enter, so only static columns are priced.
  for (int c = 0; c < n_static_; ++c) {
    if (in_basis_[c] || banned_epoch[c] == epoch) continue;
    // A split variable's other half is this column negated; with one half
    // basic the pair is a ray, and entering it only corrupts the basis.
    const BasisLabel& l = label_[c];
    if (l.kind == BasisLabel::kVar && var_minus_[l.index] >= 0 &&
        in_basis_[var_minus_[l.index]]) {
      continue;
    }
    if (l.kind == BasisLabel::kVarNeg && in_basis_[var_plus_[l.index]]) {
      continue;
    }
    const double rc = col_cost(c, phase1) - dot_col(y, c);
    if (rc < best_rc) {
      if (bland) return c;
      best_rc = rc;
      best = c;
    }
  }
  return best;
}

Solution Simplex::run() {
  const long max_it =
      opts_.max_iterations > 0
          ? opts_.max_iterations
          : std::max<long>(50000, 20L * m_ + n_static_);

  bool warm = false;
  if (opts_.warm_basis != nullptr) warm = import_basis(*opts_.warm_basis);
  if (!warm) {
    default_basis();
    factorize();
    recompute_values();
  }
  in_basis_.assign(n_static_ + artificials_.size(), 0);
  for (int c : basis_) in_basis_[c] = 1;

  auto phase1_residual = [&]() {
    double s = 0.0;
    for (int p = 0; p < m_; ++p) {
      if (basis_[p] >= n_static_) s += std::max(xb_[p], 0.0);
    }
    return s;
  };

  const double bscale = bscale_;
  bool phase1 = phase1_residual() > opts_.feas_tol * bscale;
  long iters = 0;
  int degenerate_run = 0;
  bool bland = false;
  int since_refactor = 0;
  // Columns set aside after a spurious ray, valid until the next pivot.
  std::vector<long> banned_epoch(n_static_, -1);
  long pivot_epoch = 0;

  while (true) {
    if (iters >= max_it) return extract(SolveStatus::kIterationLimit, iters);

    // Duals for the current phase costs.
    Eigen::VectorXd y(m_);
    for (int p = 0; p < m_; ++p) y[p] = col_cost(basis_[p], phase1);
    btran(y);

    const int enter = price(y, phase1, bland, banned_epoch, pivot_epoch);
    if (enter < 0) {
      if (phase1) {
        if (phase1_residual() > opts_.feas_tol * bscale) {
          return extract(SolveStatus::kInfeasible, iters);
        }
        for (int p = 0; p < m_; ++p) {
          if (basis_[p] >= n_static_) xb_[p] = 0.0;
        }
        phase1 = false;
        bland = false;
        degenerate_run = 0;
        continue;
      }
      return extract(SolveStatus::kOptimal, iters);
    }

    Eigen::VectorXd d = column_dense(enter);
    ftran(d);

    // Ratio test, two passes: exact minimum first, then the stablest pivot
    // among ties (lowest basis label under Bland). Basic artificials may
    // never rise above zero.
    auto ratio_of = [&](int p) -> double {
      const double dp = d[p];
      if (dp > kPivotTol) return std::max(xb_[p], 0.0) / dp;
      if (!phase1 && dp < -kPivotTol && basis_[p] >= n_static_) return 0.0;
      return -1.0;
    };
    double rmin = kInf;
    for (int p = 0; p < m_; ++p) {
      const double r = ratio_of(p);
      if (r >= 0.0 && r < rmin) rmin = r;
    }
    int leave = -1;
    if (rmin < kInf) {
      for (int p = 0; p < m_; ++p) {
        const double r = ratio_of(p);
        if (r < 0.0 || r > rmin + 1e-12 * (1.0 + rmin)) continue;
        if (leave < 0) {
          leave = p;
        } else if (bland ? basis_[p] < basis_[leave]
                         : std::abs(d[p]) > std::abs(d[leave])) {
          leave = p;
        }
      }
    }
    if (leave < 0 || std::abs(d[leave]) < kPivotFloor) {
      // No blocking row, or only pivots too small to trust. Stale factors
      // are the first suspect; rebuild them once and re-price.
      if (since_refactor > 0) {
        factorize();
        recompute_values();
        since_refactor = 0;
        continue;
      }
      if (leave < 0 && !phase1) return extract(SolveStatus::kUnbounded, iters);
      // A real phase-1 ray cannot exist (the objective is bounded below by
      // zero), and a fresh-factor direction whose best pivot is still tiny
      // is roundoff, not descent. Set the column aside until the next pivot.
      banned_epoch[enter] = pivot_epoch;
      continue;
    }

    const double t = std::max(rmin, 0.0);
    xb_ -= t * d;
    xb_[leave] = t;
    for (int p = 0; p < m_; ++p) {
      if (xb_[p] < 0.0 && xb_[p] > -1e-11) xb_[p] = 0.0;
    }
    in_basis_[basis_[leave]] = 0;
    if (static_cast<size_t>(enter) >= in_basis_.size()) {
      in_basis_.resize(enter + 1, 0);
    }
    in_basis_[enter] = 1;
    basis_[leave] = enter;
    etas_.push_back({leave, d});
    ++pivot_epoch;  // reduced costs moved; banned columns get another look

    ++iters;
    ++since_refactor;
    if (t <= 1e-12) {
      if (++degenerate_run >= kDegenerateRun) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
    if (since_refactor >= kRefactorEvery) {
      factorize();
      recompute_values();
      since_refactor = 0;
    }
  }
}

Solution Simplex::extract(SolveStatus status, long iters) {
  Solution sol;
  sol.status = status;
  sol.iterations = iters;
  if (m_ > 0) {
    b_ = b_exact_;  // drop the anti-cycling jitter
    factorize();    // fresh factors for accurate exports
    recompute_values();
  }

  sol.x.assign(lp_.num_vars(), 0.0);
  for (int j = 0; j < lp_.num_vars(); ++j) sol.x[j] = shift_[j];
  for (int p = 0; p < m_; ++p) {
    const int c = basis_[p];
    if (c >= n_static_) continue;
    const BasisLabel& l = label_[c];
    if (l.kind == BasisLabel::kVar) sol.x[l.index] += xb_[p];
    if (l.kind == BasisLabel::kVarNeg) sol.x[l.index] -= xb_[p];
  }
  double obj = 0.0;
  for (int j = 0; j < lp_.num_vars(); ++j) obj += lp_.objective[j] * sol.x[j];
  sol.objective = obj;

  if (status != SolveStatus::kOptimal) return sol;

  Eigen::VectorXd y = Eigen::VectorXd::Zero(std::max(m_, 1));
  if (m_ > 0) {
    for (int p = 0; p < m_; ++p) y[p] = col_cost(basis_[p], false);
    btran(y);
  }
  sol.duals.assign(lp_.num_rows(), 0.0);
  for (int r = 0; r < lp_.num_rows(); ++r) sol.duals[r] = y[r];
  sol.reduced_costs.assign(lp_.num_vars(), 0.0);
  for (int j = 0; j < lp_.num_vars(); ++j) {
    sol.reduced_costs[j] = lp_.objective[j] - dot_col(y, var_plus_[j]);
  }
  sol.basis.resize(m_);
  for (int p = 0; p < m_; ++p) {
    const int c = basis_[p];
    sol.basis[p] = c < n_static_
                       ? label_[c]
                       : BasisLabel{BasisLabel::kArtificial,
                                    artificials_[c - n_static_].row};
  }
  if (opts_.self_check) self_check(sol, y);
  return sol;
}

void Simplex::self_check(Solution& sol, const Eigen::VectorXd& y) {
  bool ok = true;
  const double scale = 1.0;
  if (max_constraint_violation(lp_, sol.x) > opts_.feas_tol * 10.0 * scale) {
    ok = false;
  }
  for (int c = 0; c < n_static_ && ok; ++c) {
    const double rc = cost_[c] - dot_col(y, c);
    if (in_basis_[c]) {
      if (std::abs(rc) > 1e-6 * (1.0 + std::abs(cost_[c]))) ok = false;
    } else {
      if (rc < -1e-6 * (1.0 + std::abs(cost_[c]))) ok = false;
    }
  }
  // With every nonbasic variable at zero, the internal primal and dual
  // objectives coincide as c_B' B^{-1} b; check the algebra held up.
  double internal = 0.0;
  for (int p = 0; p < m_; ++p) internal += col_cost(basis_[p], false) * xb_[p];
  for (int j = 0; j < lp_.num_vars(); ++j) {
    internal += lp_.objective[j] * shift_[j];
  }
  if (std::abs(internal - sol.objective) >
      1e-6 * (1.0 + std::abs(sol.objective))) {
    ok = false;
  }
  sol.kkt_ok = ok;
}

}  // namespace

Solution solve(const LinearProgram& lp, const SolveOptions& opts) {
  if (lp.objective.size() != lp.lower.size() ||
      lp.objective.size() != lp.upper.size()) {
    throw std::invalid_argument("lp: inconsistent variable arrays");
  }
  Simplex s(lp, opts);
  return s.run();
}

}  // namespace smoothro::lp
