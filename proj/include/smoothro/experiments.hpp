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

#ifndef SMOOTHRO_EXPERIMENTS_HPP_
#define SMOOTHRO_EXPERIMENTS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "smoothro/model.hpp"
#include "smoothro/sets.hpp"

namespace smoothro {

// --- Set geometry comparison ------------------------------------------

/// Volume/diameter table for the ellipsoid, its enclosing graph set, the
/// directly calibrated graph set, the bounding box, and the rotated box,
/// under Sigma_ij = rho^|i-j|. The `general` block uses distribution-free
/// sizing, the `gaussian` block the Gaussian rules. Graph-set volumes are
/// Monte Carlo (std_error reported); the rest are closed forms.
struct SetComparison {
  struct Entry {
    std::string name;
    double volume = 0.0;
    double diameter = 0.0;
    double volume_ratio = 0.0;  // volume / ellipsoid volume in its block
    double mc_std_error = 0.0;  // zero for closed forms
  };
  int n = 0;
  double p = 0.0;
  double rho = 0.0;
  std::vector<Entry> general, gaussian;
};

SetComparison set_comparison_report(int n, double p, double rho,
                                    std::int64_t samples, std::uint64_t seed);

// --- Transshipment with affine recourse -------------------------------

/// One supplier (node id -1) and n retailers on a bidirectional cycle, the
/// supplier linked to every retailer in both directions. Demands are
/// N(mu, sigma), handled in standardized units by the recourse model.
struct TransshipmentInstance {
  struct Arc {
    int from = 0;
    int to = 0;  // -1 marks the supplier on either end
  };
  int n = 0;
  std::vector<Arc> arcs;
  std::vector<double> order_cost, holding_cost, backlog_cost;  // per retailer
  std::vector<double> ship_cost;                               // per arc
  std::vector<double> nominal_demand;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  std::uint64_t seed = 0;
};

/// Seeded random instance in the documented ranges: order/holding/ship
/// costs U[0,1], backlog U[0,4], nominal demand U[50,150], mu U[1,2],
/// sigma = R R' with R entries U[0,1]. n >= 3.
TransshipmentInstance make_transshipment_instance(int n, std::uint64_t seed);

/// Sigma rescaled to unit diagonal.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& sigma);

/// Two-stage model with affine recourse in the standardized demand: order
/// quantities up front; shipment and inventory-cost rules respond linearly
/// to the standardized demand vector. Robust rows: one total-cost epigraph,
/// n backlog rows, n holding rows, one nonnegativity row per arc.
RobustLP build_transshipment_aarc(const TransshipmentInstance& inst,
                                  const SmoothSet& set);

/// The decision rules packed out of a solved model's (x, y).
struct AffineRules {
  std::vector<double> order;       // per retailer
  std::vector<double> ship_const;  // per arc
  Eigen::MatrixXd ship_coeff;      // |arcs| x n, per standardized component
  std::vector<double> inv_const;   // per retailer
  Eigen::MatrixXd inv_coeff;       // n x n
  double total_cost = 0.0;
};

AffineRules extract_rules(const TransshipmentInstance& inst,
                          const std::vector<double>& x,
                          const std::vector<double>& y);

/// Simulated cost of the rules over N(mu, sigma) demands clamped at zero:
/// ordering plus rule-driven shipping plus the exact inventory charge (the
/// larger of the backlog and holding rows). Deterministic per seed.
struct SimulatedCost {
  double mean = 0.0;
  double worst = 0.0;
};

SimulatedCost evaluate_transshipment(const AffineRules& rules,
                                     const TransshipmentInstance& inst,
                                     int n_scenarios, std::uint64_t seed);

// --- Robust shortest path ---------------------------------------------

struct DirectedGraph {
  struct Arc {
    int from = 0;
    int to = 0;
  };
  int num_nodes = 0;
  std::vector<Arc> arcs;
};

struct ShortestPathInstance {
  DirectedGraph graph;
  std::vector<double> nominal_time;  // per arc, positive
  Eigen::MatrixXd scenarios;         // S x |arcs| travel times; may be empty
  int origin = 0;
  int destination = 0;
};

struct PathResult {
  std::vector<int> arcs;  // arc indices along the path
  double cost = 0.0;
};

/// Worst-case path under relative per-arc deviations in the graph set: the
/// worst deviation profile is the upper projection bound, so one Dijkstra
/// on weights upper_a * nominal_a decides. Errors on negative weights.
PathResult robust_shortest_path(const ShortestPathInstance& inst,
                                const UncertaintyGraph& deviations);

PathResult nominal_shortest_path(const ShortestPathInstance& inst);

// --- Train/test calibration study -------------------------------------

struct FrontierPoint {
  double lambda = 0.0;
  double lambda_diff = 0.0;
  double mean_ratio = 0.0;  // mean test travel time / nominal-path mean
  double max_ratio = 0.0;
};

/// Drops points that another point weakly improves in both coordinates;
/// result sorted by mean_ratio.
std::vector<FrontierPoint> nondominated(std::vector<FrontierPoint> points);

/// Repeated train/test splits: calibrate per scheme on training rows,
/// walk the (lambda, lambda_diff) grid, score each robust path's mean and
/// max test travel time normalized by the nominal path's mean. box_* rows
/// are the same schemes with the difference bounds dropped.
struct TradeoffTable {
  std::vector<FrontierPoint> max_based;
  std::vector<FrontierPoint> stdev_based;
  std::vector<FrontierPoint> box_max;
  std::vector<FrontierPoint> box_stdev;
};

TradeoffTable shortest_path_study(const ShortestPathInstance& inst,
                                  const std::vector<double>& lambda_grid,
                                  const std::vector<double>& lambda_diff_grid,
                                  int splits = 10, double train_frac = 0.8,
                                  std::uint64_t seed = 1);

// --- Cross-validated membership ---------------------------------------

/// L-fold study: per fold, a range-calibrated graph set and a corrected
/// covariance ellipsoid are fit on training rows and scored on validation
/// rows. The surrogate grid links the two families through (rho, omega).
struct CrossvalCurves {
  struct SurrogatePoint {
    double rho = 0.0, omega = 0.0;
    double alpha_bar = 0.0, beta_bar = 0.0;
    double smooth_membership = 0.0;
    double ellipsoid_membership = 0.0;
  };
  struct DirectPoint {
    double alpha = 0.0, beta = 0.0;
    double smooth_membership = 0.0;
  };
  int folds = 0;
  std::vector<SurrogatePoint> surrogate;
  std::vector<DirectPoint> direct;
};

CrossvalCurves crossval_membership_study(const Eigen::MatrixXd& data,
                                         int folds,
                                         const std::vector<double>& alpha_grid,
                                         const std::vector<double>& beta_grid,
                                         const std::vector<double>& rho_grid,
                                         const std::vector<double>& omega_grid,
                                         std::uint64_t seed);

// --- Synthetic data and shared test scaffolding -----------------------

/// Travel times with a shared congestion factor: columns move together, so
/// difference bounds carry real information.
Eigen::MatrixXd synthetic_travel_times(int num_arcs, int rows,
                                       std::uint64_t seed);

/// Few samples of a low-rank-plus-noise field; rows may be far fewer than
/// columns.
Eigen::MatrixXd synthetic_low_rank(int n, int rows, int rank,
                                   std::uint64_t seed);

/// Random feasible bounded robust model over a random graph; the rhs of
/// each robust row is padded above its worst case at a reference point, so
/// the instance is never vacuously infeasible.
struct RandomInstance {
  RobustLP model;
  UncertaintyGraph graph;
};

RandomInstance random_robust_instance(int n_delta, int m_rows,
                                      std::uint64_t seed);

/// Smallest win count whose one-sided binomial tail at fair-coin odds stays
/// within 1 - confidence.
int sign_test_threshold(int trials, double confidence = 0.90);

}  // namespace smoothro

#endif  // SMOOTHRO_EXPERIMENTS_HPP_
