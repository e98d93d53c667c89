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

#ifndef SMOOTHRO_SOLVER_HPP_
#define SMOOTHRO_SOLVER_HPP_

#include <string>
#include <vector>

#include "smoothro/lp.hpp"
#include "smoothro/model.hpp"
#include "smoothro/sets.hpp"

namespace smoothro {

struct SolveStats {
  std::string method;
  lp::SolveStatus status = lp::SolveStatus::kIterationLimit;
  double objective = 0.0;
  std::vector<double> x, y;
  long lp_iterations = 0;  // simplex pivots across all master solves
  int rounds = 0;          // outer iterations (column/cut generation)
  int cuts_added = 0;      // scenarios pooled by cut generation
  long vars_start = 0;     // multiplier columns in the initial master
  long vars_generated = 0; // multiplier columns added by pricing
  long vars_full = 0;      // multiplier columns the full dualization has
  long lp_rows = 0, lp_vars = 0;  // final master size
  double seconds = 0.0;
};

struct SolverOptions {
  double violation_tol = 1e-7;
  int max_rounds = 500;
  bool flow_oracle = true;        // cut generation separation backend
  double dense_edge_ratio = 2.0;  // auto: prefer column generation when
                                  // |E| exceeds this multiple of n
  lp::SolveOptions lp;
};

/// Solves the full deterministic equivalent in one shot.
SolveStats solve_dualization(const RobustLP& model, const SmoothSet& set,
                             const SolverOptions& opts = {});

/// Delayed generation of multiplier columns. The initial master carries all
/// vertex rows plus the rows of a shortest-path tree rooted at the graph
/// center; pricing adds any row whose multiplier has negative reduced cost,
/// one master re-solve per full scan, warm-started from the previous basis.
SolveStats solve_colgen(const RobustLP& model, const SmoothSet& set,
                        const SolverOptions& opts = {});

/// Scenario pooling: each robust constraint keeps a pool of adversarial
/// scenarios (seeded with the nominal point, or the bounds midpoint when the
/// nominal lies outside the set), the master enforces the constraint at
/// pooled scenarios only, and the worst-case oracle refutes or certifies the
/// master solution each round. Objective is monotone nondecreasing across
/// rounds.
SolveStats solve_cutgen(const RobustLP& model, const SmoothSet& set,
                        const SolverOptions& opts = {});

/// Compact scenario rows where sign patterns permit, multiplier blocks for
/// the rest.
SolveStats solve_compact(const RobustLP& model, const SmoothSet& set,
                         const SolverOptions& opts = {});

/// Picks a method: compact when every constraint has a usable sign pattern,
/// column generation on dense graphs, full dualization otherwise.
SolveStats solve(const RobustLP& model, const SmoothSet& set,
                 const SolverOptions& opts = {});

/// Initial universe-row selection for solve_colgen, exposed for tests:
/// all 2n vertex rows plus both orientations of each shortest-path-tree
/// edge, tree rooted at the minimum-eccentricity vertex (lowest index on
/// ties).
std::vector<int> initial_rows(const SmoothSet& set);

}  // namespace smoothro

#endif  // SMOOTHRO_SOLVER_HPP_
