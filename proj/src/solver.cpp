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

#include "smoothro/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "smoothro/adversarial.hpp"
#include "smoothro/reformulate.hpp"

namespace smoothro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

long full_multiplier_count(const RobustLP& model, const SmoothSet& set) {
  return 2L * (set.dim() + static_cast<long>(set.graph().edges.size())) *
         static_cast<long>(model.uncertain.size());
}

void extract_xy(const lp::Solution& sol, const RobustLP& model,
                SolveStats* stats) {
  stats->objective = sol.objective;
  stats->x.assign(sol.x.begin(), sol.x.begin() + model.n_x);
  stats->y.assign(sol.x.begin() + model.n_x,
                  sol.x.begin() + model.n_x + model.n_y);
}

void check_model(const RobustLP& model, const SmoothSet& set) {
  const std::vector<std::string> issues = model.validate(set);
  if (!issues.empty()) {
    throw std::invalid_argument("solver: invalid model: " + issues.front());
  }
  const auto any = [](const std::vector<bool>& flags) {
    return std::any_of(flags.begin(), flags.end(), [](bool b) { return b; });
  };
  if (any(model.x_integer) || any(model.y_integer)) {
    throw std::invalid_argument(
        "solver: integer variables are not supported by the LP methods");
  }
}

}  // namespace

std::vector<int> initial_rows(const SmoothSet& set) {
  const int n = set.dim();
  const Eigen::MatrixXd& dist = set.distances();

  // Graph center: minimum eccentricity, lowest index on ties. A fully
  // disconnected vertex has infinite eccentricity; any choice then works.
  int center = 0;
  double best = kInf;
  for (int v = 0; v < n; ++v) {
    double ecc = 0.0;
    for (int u = 0; u < n; ++u) ecc = std::max(ecc, dist(v, u));
    if (ecc < best) {
      best = ecc;
      center = v;
    }
  }

  // Shortest-path tree from the center over the original edges.
  const std::vector<UncertaintyGraph::Edge>& edges = set.graph().edges;
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge)
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    adj[edges[e].i].emplace_back(edges[e].j, e);
    adj[edges[e].j].emplace_back(edges[e].i, e);
  }
  std::vector<double> d(n, kInf);
  std::vector<int> parent_edge(n, -1);
  std::vector<char> settled(n, 0);
  d[center] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.push({0.0, center});
  while (!heap.empty()) {
    const auto [dv, v] = heap.top();
    heap.pop();
    if (settled[v]) continue;
    settled[v] = 1;
    for (const auto& [u, e] : adj[v]) {
      if (dv + edges[e].gamma < d[u]) {
        d[u] = dv + edges[e].gamma;
        parent_edge[u] = e;
        heap.push({d[u], u});
      }
    }
  }

  std::vector<int> rows;
  rows.reserve(2 * n + 2 * n);
  for (int v = 0; v < n; ++v) {
    rows.push_back(2 * v);
    rows.push_back(2 * v + 1);
  }
  for (int v = 0; v < n; ++v) {
    const int e = parent_edge[v];
    if (v == center || e < 0) continue;
    rows.push_back(2 * n + 2 * e);
    rows.push_back(2 * n + 2 * e + 1);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

SolveStats solve_dualization(const RobustLP& model, const SmoothSet& set,
                             const SolverOptions& opts) {
  check_model(model, set);
  Stopwatch clock;
  SolveStats stats;
  stats.method = "dualization";
  stats.vars_full = full_multiplier_count(model, set);
  stats.vars_start = stats.vars_full;

  MasterModel master = dualize(model, set);
  const lp::Solution sol = lp::solve(master.program(), opts.lp);
  stats.status = sol.status;
  stats.lp_iterations = sol.iterations;
  stats.lp_rows = master.program().num_rows();
  stats.lp_vars = master.program().num_vars();
  if (sol.status == lp::SolveStatus::kOptimal) extract_xy(sol, model, &stats);
  stats.seconds = clock.seconds();
  return stats;
}

SolveStats solve_colgen(const RobustLP& model, const SmoothSet& set,
                        const SolverOptions& opts) {
  check_model(model, set);
  Stopwatch clock;
  SolveStats stats;
  stats.method = "colgen";
  stats.vars_full = full_multiplier_count(model, set);

  const std::vector<int> init = initial_rows(set);
  const int m = static_cast<int>(model.uncertain.size());
  MasterModel master(
      model, set, std::vector<std::vector<int>>(m, init));
  stats.vars_start = master.multiplier_count();

  const std::vector<ConstraintRow> universe = set.constraint_rows();
  const int n_universe = static_cast<int>(universe.size());

  std::vector<lp::BasisLabel> warm;
  lp::Solution sol;
  bool converged = false;
  for (stats.rounds = 1; stats.rounds <= opts.max_rounds; ++stats.rounds) {
    lp::SolveOptions lp_opts = opts.lp;
    if (!warm.empty()) lp_opts.warm_basis = &warm;
    sol = lp::solve(master.program(), lp_opts);
    stats.lp_iterations += sol.iterations;
    stats.status = sol.status;
    if (sol.status != lp::SolveStatus::kOptimal) break;
    warm = sol.basis;

    // A multiplier column prices out at a_l' mu_i - b_l sigma_i, with mu the
    // equality duals and sigma the (negated) budget dual. Any positive value
    // is a violated inequality of the unrestricted dual, so the column
    // enters; one full scan per re-solve.
    int added = 0;
    for (int i = 0; i < m; ++i) {
      const double sigma = std::max(0.0, -sol.duals[master.budget_row(i)]);
      const std::vector<int>& eq = master.equality_rows(i);
      for (int l = 0; l < n_universe; ++l) {
        if (master.is_included(i, l)) continue;
        double value = -universe[l].b * sigma;
        for (const auto& [j, aval] : universe[l].a) {
          value += aval * sol.duals[eq[j]];
        }
        if (value > opts.violation_tol) {
          master.add_multiplier(i, l);
          ++added;
        }
      }
    }
    if (added == 0) {
      converged = true;
      break;
    }
    stats.vars_generated += added;
  }
  stats.rounds = std::min(stats.rounds, opts.max_rounds);
  if (!converged && stats.status == lp::SolveStatus::kOptimal) {
    stats.status = lp::SolveStatus::kIterationLimit;
  }

  stats.lp_rows = master.program().num_rows();
  stats.lp_vars = master.program().num_vars();
  if (stats.status == lp::SolveStatus::kOptimal) {
    extract_xy(sol, model, &stats);
  }
  stats.seconds = clock.seconds();
  return stats;
}

SolveStats solve_cutgen(const RobustLP& model, const SmoothSet& set,
                        const SolverOptions& opts) {
  check_model(model, set);
  Stopwatch clock;
  SolveStats stats;
  stats.method = "cutgen";
  stats.vars_full = full_multiplier_count(model, set);

  const int m = static_cast<int>(model.uncertain.size());
  const int n = set.dim();

  // Pools start at the nominal point when it is a member (radii permitting),
  // otherwise at the midpoint of the projection bounds, which always is.
  std::vector<double> seed_point = set.graph().nominal;
  if (!set.contains(seed_point, 1e-9)) {
    const ProjectionBounds& pb = set.bounds();
    for (int i = 0; i < n; ++i) {
      seed_point[i] = 0.5 * (pb.lower[i] + pb.upper[i]);
    }
  }
  std::vector<std::vector<std::vector<double>>> pools(
      m, {seed_point});

  lp::Solution sol;
  bool converged = false;
  for (stats.rounds = 1; stats.rounds <= opts.max_rounds; ++stats.rounds) {
    lp::LinearProgram prog = robust_skeleton(model);
    for (int i = 0; i < m; ++i) {
      for (const std::vector<double>& scen : pools[i]) {
        append_scenario_row(constraint_at_scenario(model.uncertain[i], scen),
                            model.n_x, &prog);
      }
    }
    sol = lp::solve(prog, opts.lp);
    stats.lp_iterations += sol.iterations;
    stats.status = sol.status;
    stats.lp_rows = prog.num_rows();
    stats.lp_vars = prog.num_vars();
    if (sol.status != lp::SolveStatus::kOptimal) break;

    int added = 0;
    for (int i = 0; i < m; ++i) {
      const UncertainConstraint& con = model.uncertain[i];
      // Worst case of delta' C x* over the set, plus the deterministic part.
      std::vector<double> s(n, 0.0);
      for (int j = 0; j < n; ++j) {
        for (const auto& [var, coeff] : con.c_rows[j]) {
          s[j] += coeff * sol.x[var];
        }
      }
      const WorstCase wc =
          opts.flow_oracle ? worst_case_flow(set, s) : worst_case_lp(set, s);
      double lhs = wc.value;
      for (const auto& [w, coeff] : con.d) {
        lhs += coeff * sol.x[model.n_x + w];
      }
      if (lhs > con.rhs + opts.violation_tol) {
        pools[i].push_back(wc.argmax);
        ++added;
      }
    }
    if (added == 0) {
      converged = true;
      break;
    }
    stats.cuts_added += added;
  }
  stats.rounds = std::min(stats.rounds, opts.max_rounds);
  if (!converged && stats.status == lp::SolveStatus::kOptimal) {
    stats.status = lp::SolveStatus::kIterationLimit;
  }

  if (stats.status == lp::SolveStatus::kOptimal) {
    extract_xy(sol, model, &stats);
  }
  stats.seconds = clock.seconds();
  return stats;
}

SolveStats solve_compact(const RobustLP& model, const SmoothSet& set,
                         const SolverOptions& opts) {
  check_model(model, set);
  Stopwatch clock;
  SolveStats stats;
  stats.method = "compact";
  stats.vars_full = full_multiplier_count(model, set);

  const CompiledModel compiled =
      auto_reformulate(model, set, ReformStrategy::kCompactFirst);
  const lp::Solution sol = lp::solve(compiled.lp, opts.lp);
  stats.status = sol.status;
  stats.lp_iterations = sol.iterations;
  stats.lp_rows = compiled.lp.num_rows();
  stats.lp_vars = compiled.lp.num_vars();
  if (sol.status == lp::SolveStatus::kOptimal) extract_xy(sol, model, &stats);
  stats.seconds = clock.seconds();
  return stats;
}

SolveStats solve(const RobustLP& model, const SmoothSet& set,
                 const SolverOptions& opts) {
  check_model(model, set);
  bool all_compact = true;
  for (const UncertainConstraint& con : model.uncertain) {
    if (sign_pattern(con, model).kind == SignPattern::kMixed) {
      all_compact = false;
      break;
    }
  }
  if (all_compact) return solve_compact(model, set, opts);
  const double edges = static_cast<double>(set.graph().edges.size());
  if (edges > opts.dense_edge_ratio * set.dim()) {
    return solve_colgen(model, set, opts);
  }
  return solve_dualization(model, set, opts);
}

}  // namespace smoothro
