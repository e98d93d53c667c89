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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "smoothro/mps.hpp"
#include "smoothro/rng.hpp"

using namespace smoothro;
using lp::LinearProgram;
using lp::Relation;
using lp::SolveStatus;

namespace {

// Full KKT certificate, computed here rather than trusting the solver's
// self check: primal feasibility, dual sign conventions, stationarity of
// reduced costs against the returned duals, and complementary slackness.
void check_kkt(const LinearProgram& prog, const lp::Solution& sol,
               double tol = 1e-6) {
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(lp::max_constraint_violation(prog, sol.x) <= tol);

  std::vector<double> rc = prog.objective;
  for (int r = 0; r < prog.num_rows(); ++r) {
    const lp::Row& row = prog.rows[r];
    const double y = sol.duals[r];
    double act = 0.0;
    for (const auto& [var, coeff] : row.coeffs) {
      act += coeff * sol.x[var];
      rc[var] -= coeff * y;
    }
    switch (row.rel) {
      case Relation::kLessEqual:
        CHECK(y <= tol);
        if (y < -tol) CHECK(act >= row.rhs - tol);  // tight if priced
        break;
      case Relation::kGreaterEqual:
        CHECK(y >= -tol);
        if (y > tol) CHECK(act <= row.rhs + tol);
        break;
      case Relation::kEqual:
        break;
    }
  }
  for (int j = 0; j < prog.num_vars(); ++j) {
    const bool at_lower = std::isfinite(prog.lower[j]) &&
                          sol.x[j] <= prog.lower[j] + tol;
    const bool at_upper = std::isfinite(prog.upper[j]) &&
                          sol.x[j] >= prog.upper[j] - tol;
    if (at_lower && !at_upper) {
      CHECK(rc[j] >= -tol);
    } else if (at_upper && !at_lower) {
      CHECK(rc[j] <= tol);
    } else if (!at_lower && !at_upper) {
      CHECK(std::abs(rc[j]) <= tol);
    }
  }
}

}  // namespace

TEST_CASE("single variable against a bound row") {
  LinearProgram prog;
  prog.add_var(1.0);
  prog.add_row(Relation::kGreaterEqual, 3.0, {{0, 1.0}});
  const lp::Solution sol = lp::solve(prog);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(sol.x[0] == doctest::Approx(3.0));
}

TEST_CASE("documented dual sign convention") {
  // min -x - y s.t. x + y <= 1: objective -1, dual of the row -1.
  LinearProgram prog;
  prog.add_var(-1.0);
  prog.add_var(-1.0);
  prog.add_row(Relation::kLessEqual, 1.0, {{0, 1.0}, {1, 1.0}});
  const lp::Solution sol = lp::solve(prog);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(-1.0));
  CHECK(sol.duals[0] == doctest::Approx(-1.0));
}

TEST_CASE("mixed relations with an upper bound") {
  // min 2x + 3y s.t. x + y >= 2, x - y <= 1, x in [0, 1.5]:
  // optimum 4.5 at (1.5, 0.5). External reference solution.
  LinearProgram prog;
  prog.add_var(2.0, 0.0, 1.5);
  prog.add_var(3.0);
  prog.add_row(Relation::kGreaterEqual, 2.0, {{0, 1.0}, {1, 1.0}});
  prog.add_row(Relation::kLessEqual, 1.0, {{0, 1.0}, {1, -1.0}});
  const lp::Solution sol = lp::solve(prog);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(4.5));
  CHECK(sol.x[0] == doctest::Approx(1.5));
  CHECK(sol.x[1] == doctest::Approx(0.5));
  check_kkt(prog, sol);
}

TEST_CASE("equality row and a negative lower bound") {
  // min x1 - 2x2 + x3 s.t. x1 + x2 + x3 = 4, x2 - x3 <= 1,
  // x1 in [0,3], x2 in [-5,5], x3 >= 0. Reference: objective -3.5 at
  // (0, 2.5, 1.5), inequality dual -1.5, equality dual -0.5.
  LinearProgram prog;
  prog.add_var(1.0, 0.0, 3.0);
  prog.add_var(-2.0, -5.0, 5.0);
  prog.add_var(1.0);
  prog.add_row(Relation::kEqual, 4.0, {{0, 1.0}, {1, 1.0}, {2, 1.0}});
  prog.add_row(Relation::kLessEqual, 1.0, {{1, 1.0}, {2, -1.0}});
  const lp::Solution sol = lp::solve(prog);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(-3.5));
  CHECK(sol.x[0] == doctest::Approx(0.0));
  CHECK(sol.x[1] == doctest::Approx(2.5));
  CHECK(sol.x[2] == doctest::Approx(1.5));
  CHECK(sol.duals[0] == doctest::Approx(-0.5));
  CHECK(sol.duals[1] == doctest::Approx(-1.5));
  check_kkt(prog, sol);
}

TEST_CASE("degenerate optimum") {
  LinearProgram prog;
  prog.add_var(-1.0);
  prog.add_var(-2.0);
  prog.add_row(Relation::kLessEqual, 2.0, {{0, 1.0}});
  prog.add_row(Relation::kLessEqual, 2.0, {{1, 1.0}});
  prog.add_row(Relation::kLessEqual, 4.0, {{0, 1.0}, {1, 1.0}});
  const lp::Solution sol = lp::solve(prog);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(-6.0));
  CHECK(sol.x[0] == doctest::Approx(2.0));
  CHECK(sol.x[1] == doctest::Approx(2.0));
  check_kkt(prog, sol);
}

TEST_CASE("classic cycling instance terminates at its optimum") {
  LinearProgram prog;
  prog.add_var(-0.75);
  prog.add_var(150.0);
  prog.add_var(-0.02);
  prog.add_var(6.0);
  prog.add_row(Relation::kLessEqual, 0.0,
               {{0, 0.25}, {1, -60.0}, {2, -0.04}, {3, 9.0}});
  prog.add_row(Relation::kLessEqual, 0.0,
               {{0, 0.5}, {1, -90.0}, {2, -0.02}, {3, 3.0}});
  prog.add_row(Relation::kLessEqual, 1.0, {{2, 1.0}});
  const lp::Solution sol = lp::solve(prog);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(-0.05));
  CHECK(sol.x[2] == doctest::Approx(1.0));
  check_kkt(prog, sol);
}

TEST_CASE("infeasible and unbounded outcomes are statuses") {
  SUBCASE("infeasible") {
    LinearProgram prog;
    prog.add_var(1.0);  // x >= 0
    prog.add_row(Relation::kLessEqual, -1.0, {{0, 1.0}});
    CHECK(lp::solve(prog).status == SolveStatus::kInfeasible);
  }
  SUBCASE("unbounded") {
    LinearProgram prog;
    prog.add_var(-1.0);
    CHECK(lp::solve(prog).status == SolveStatus::kUnbounded);
  }
  SUBCASE("unbounded through a free variable") {
    LinearProgram prog;
    prog.add_var(1.0, -lp::kInf, lp::kInf);
    prog.add_row(Relation::kLessEqual, 5.0, {{0, 1.0}});
    CHECK(lp::solve(prog).status == SolveStatus::kUnbounded);
  }
}

TEST_CASE("random instances satisfy the kkt certificate") {
  Rng rng(31);
  int optimal_count = 0;
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 9;
    const int m = 1 + t % 7;
    LinearProgram prog;
    for (int j = 0; j < n; ++j) {
      // Mix of bounded, boxed, and free variables; positive cost floor
      // keeps most instances bounded (unbounded ones are skipped).
      const int kind = rng.uniform_int(0, 3);
      const double cost = rng.uniform(-0.2, 1.5);
      if (kind == 0) {
        prog.add_var(cost);
      } else if (kind == 1) {
        prog.add_var(cost, 0.0, rng.uniform(0.5, 3.0));
      } else if (kind == 2) {
        prog.add_var(cost, rng.uniform(-2.0, -0.5), rng.uniform(0.5, 2.0));
      } else {
        prog.add_var(std::abs(cost) + 0.05, -lp::kInf, lp::kInf);
      }
    }
    for (int r = 0; r < m; ++r) {
      std::vector<std::pair<int, double>> coeffs;
      for (int j = 0; j < n; ++j) {
        if (rng.u01() < 0.7) coeffs.emplace_back(j, rng.uniform(-1.0, 1.0));
      }
      if (coeffs.empty()) coeffs.emplace_back(0, 1.0);
      const int rel = rng.uniform_int(0, 2);
      prog.add_row(rel == 0   ? Relation::kLessEqual
                   : rel == 1 ? Relation::kGreaterEqual
                              : Relation::kEqual,
                   rng.uniform(-1.0, 2.0), std::move(coeffs));
    }
    lp::SolveOptions opts;
    opts.self_check = true;
    const lp::Solution sol = lp::solve(prog, opts);
    if (sol.status != SolveStatus::kOptimal) continue;
    CHECK(sol.kkt_ok);
    check_kkt(prog, sol);
    ++optimal_count;
  }
  CHECK(optimal_count >= 20);  // the generator must not degenerate
}

TEST_CASE("warm start from an appended column") {
  // Base problem, then a new variable that improves the optimum; the warm
  // solve must agree with a cold solve and not need more iterations.
  LinearProgram prog;
  prog.add_var(1.0);
  prog.add_var(2.0);
  prog.add_row(Relation::kGreaterEqual, 3.0, {{0, 1.0}, {1, 1.0}});
  prog.add_row(Relation::kGreaterEqual, 1.0, {{1, 1.0}});
  const lp::Solution base = lp::solve(prog);
  REQUIRE(base.status == SolveStatus::kOptimal);
  CHECK(base.objective == doctest::Approx(4.0));

  const int v = prog.add_var(0.5);
  prog.rows[0].coeffs.emplace_back(v, 1.0);
  const lp::Solution cold = lp::solve(prog);

  lp::SolveOptions warm;
  warm.warm_basis = &base.basis;
  const lp::Solution hot = lp::solve(prog, warm);
  REQUIRE(cold.status == SolveStatus::kOptimal);
  REQUIRE(hot.status == SolveStatus::kOptimal);
  CHECK(hot.objective == doctest::Approx(cold.objective));
  CHECK(hot.objective == doctest::Approx(3.0));  // x3 = 2, y = 1
  CHECK(hot.iterations <= cold.iterations);
}

TEST_CASE("duplicate coefficient entries accumulate") {
  LinearProgram prog;
  prog.add_var(-1.0);
  prog.add_row(Relation::kLessEqual, 4.0, {{0, 1.0}, {0, 1.0}});
  const lp::Solution sol = lp::solve(prog);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.x[0] == doctest::Approx(2.0));
}

TEST_CASE("mps round trip") {
  LinearProgram prog;
  prog.add_var(2.0, 0.0, 1.5);
  prog.add_var(3.0);
  prog.add_var(-1.0, -2.0, lp::kInf);
  prog.add_row(Relation::kGreaterEqual, 2.0, {{0, 1.0}, {1, 1.0}});
  prog.add_row(Relation::kLessEqual, 1.0, {{0, 1.0}, {1, -1.0}, {2, 0.25}});
  prog.add_row(Relation::kEqual, 0.5, {{2, 1.0}});

  std::stringstream buf;
  lp::write_mps(prog, buf);
  const LinearProgram back = lp::read_mps(buf);
  REQUIRE(back.num_vars() == prog.num_vars());
  REQUIRE(back.num_rows() == prog.num_rows());
  const lp::Solution a = lp::solve(prog);
  const lp::Solution b = lp::solve(back);
  REQUIRE(a.status == SolveStatus::kOptimal);
  REQUIRE(b.status == SolveStatus::kOptimal);
  // Six significant digits survive the fixed-format numeric fields.
  CHECK(b.objective ==
        doctest::Approx(a.objective).epsilon(1e-5));
}
